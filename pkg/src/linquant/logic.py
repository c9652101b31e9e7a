"""Boolean-level algorithms over linear-inequality atoms.

Satisfiability of a conjunction of atoms is decided internally by iterated
Fourier-Motzkin elimination over exact rationals: eliminate one variable at
a time by pairing its lower and upper bounds, then constant-fold the
variable-free residue.  A satisfying valuation can be read back by reversing
the elimination order and picking a point inside each residual interval.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .numerics import ext_cmp
from .terms import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoolExpr,
    Disjunct,
    FalseExpr,
    InfExpr,
    LinExpr,
    Not,
    Or,
    Rel,
    TrueExpr,
    Valuation,
    fvars_expr,
    lin_eval,
    or_all,
)


def atom_eval(valuation: Valuation, atom: Atom) -> bool:
    """Evaluate an atom under a (total enough) valuation."""
    lhs, rhs = atom.lhs, atom.rhs
    if isinstance(lhs, LinExpr) and isinstance(rhs, LinExpr):
        a = lhs.evaluate(valuation)
        b = rhs.evaluate(valuation)
        return atom.rel.holds((a > b) - (a < b))
    cmp = ext_cmp(lin_eval(valuation, lhs), lin_eval(valuation, rhs))
    return atom.rel.holds(cmp)


def bool_eval(valuation: Valuation, phi: BoolExpr, _atom_cache: dict | None = None) -> bool:
    """Evaluate a guard; an optional per-valuation cache shares atom truth
    values across guards (atoms repeat heavily in engine outputs)."""
    if isinstance(phi, Atom):
        if _atom_cache is None:
            return atom_eval(valuation, phi)
        hit = _atom_cache.get(phi)
        if hit is None:
            hit = _atom_cache[phi] = atom_eval(valuation, phi)
        return hit
    if isinstance(phi, Not):
        return not bool_eval(valuation, phi.arg, _atom_cache)
    if isinstance(phi, And):
        return bool_eval(valuation, phi.lhs, _atom_cache) and bool_eval(
            valuation, phi.rhs, _atom_cache
        )
    if isinstance(phi, Or):
        return bool_eval(valuation, phi.lhs, _atom_cache) or bool_eval(
            valuation, phi.rhs, _atom_cache
        )
    if isinstance(phi, TrueExpr):
        return True
    if isinstance(phi, FalseExpr):
        return False
    raise TypeError(f"not a Boolean expression: {phi!r}")


def negate_atom(atom: Atom) -> Atom:
    """Complement the relation over the total order (e.g. not (a < b) is a >= b)."""
    return Atom(atom.lhs, atom.rel.negated, atom.rhs)


@lru_cache(maxsize=1 << 16)
def fold_atom(atom: Atom) -> Atom | TrueExpr | FalseExpr:
    """Replace decidable atoms by their truth value.

    An atom folds when either side is infinite (finite expressions always
    evaluate strictly between -oo and oo) or when the two sides differ by a
    constant.  Anything else is returned unchanged.
    """
    lhs, rel, rhs = atom.lhs, atom.rel, atom.rhs
    if isinstance(lhs, InfExpr) and isinstance(rhs, InfExpr):
        cmp = (lhs.sign > rhs.sign) - (lhs.sign < rhs.sign)
        return TRUE if rel.holds(cmp) else FALSE
    if isinstance(rhs, InfExpr):
        # finite rel oo  /  finite rel -oo
        if rhs.sign > 0:
            return TRUE if rel in (Rel.LT, Rel.LE) else FALSE
        return TRUE if rel in (Rel.GT, Rel.GE) else FALSE
    if isinstance(lhs, InfExpr):
        return fold_atom(Atom(rhs, rel.flipped, lhs))
    diff = lhs - rhs
    if diff.is_constant:
        cmp = (diff.constant > 0) - (diff.constant < 0)
        return TRUE if rel.holds(cmp) else FALSE
    return atom


@lru_cache(maxsize=1 << 16)
def isolate(atom: Atom, var: str) -> Atom:
    """Rewrite an atom mentioning ``var`` into the shape ``var rel bound``.

    The bound never mentions ``var``; the relation flips when the collected
    coefficient is negative and division is exact.  Atoms not mentioning
    ``var`` (including ones where it cancels) come back ``var``-free.
    """
    lhs, rel, rhs = atom.lhs, atom.rel, atom.rhs
    if isinstance(lhs, InfExpr):
        if isinstance(rhs, InfExpr) or var not in rhs.coeffs:
            return atom
        return isolate(Atom(rhs, rel.flipped, lhs), var)
    if isinstance(rhs, InfExpr):
        c = lhs.coeff(var)
        if c == 0:
            return atom
        bound = InfExpr(rhs.sign if c > 0 else -rhs.sign)
        new_rel = rel if c > 0 else rel.flipped
        return Atom(LinExpr.var(var), new_rel, bound)
    if var not in lhs.coeffs and var not in rhs.coeffs:
        return atom
    diff = lhs - rhs  # atom is equivalent to diff rel 0
    c = diff.coeff(var)
    if c == 0:
        return Atom(diff, rel, LinExpr.const(0))
    bound = diff.without(var).scale(Fraction(-1) / c)
    new_rel = rel if c > 0 else rel.flipped
    return Atom(LinExpr.var(var), new_rel, bound)


def is_isolated_in(atom: Atom, var: str) -> bool:
    """True when the atom is ``var rel bound`` with ``var`` absent from the bound."""
    lhs = atom.lhs
    return (
        isinstance(lhs, LinExpr)
        and lhs.constant == 0
        and lhs.coeffs == {var: Fraction(1)}
        and var not in fvars_expr(atom.rhs)
    )


# Negation-normal / disjunctive-normal form -------------------------------


def _nnf(phi: BoolExpr, positive: bool) -> BoolExpr:
    if isinstance(phi, Atom):
        return phi if positive else negate_atom(phi)
    if isinstance(phi, Not):
        return _nnf(phi.arg, not positive)
    if isinstance(phi, And):
        a, b = _nnf(phi.lhs, positive), _nnf(phi.rhs, positive)
        return And(a, b) if positive else Or(a, b)
    if isinstance(phi, Or):
        a, b = _nnf(phi.lhs, positive), _nnf(phi.rhs, positive)
        return Or(a, b) if positive else And(a, b)
    if isinstance(phi, TrueExpr):
        return TRUE if positive else FALSE
    if isinstance(phi, FalseExpr):
        return FALSE if positive else TRUE
    raise TypeError(f"not a Boolean expression: {phi!r}")


def _conjoin(d1: Disjunct, d2: Disjunct) -> Disjunct:
    seen = set(d1.atoms)
    extra = tuple(a for a in d2.atoms if a not in seen)
    return Disjunct(d1.atoms + extra)


def _dnf_of_nnf(phi: BoolExpr) -> list[Disjunct]:
    if isinstance(phi, Atom):
        folded = fold_atom(phi)
        if folded is TRUE:
            return [Disjunct()]
        if folded is FALSE:
            return []
        return [Disjunct((folded,))]
    if isinstance(phi, TrueExpr):
        return [Disjunct()]
    if isinstance(phi, FalseExpr):
        return []
    if isinstance(phi, Or):
        return _dnf_of_nnf(phi.lhs) + _dnf_of_nnf(phi.rhs)
    if isinstance(phi, And):
        left = _dnf_of_nnf(phi.lhs)
        right = _dnf_of_nnf(phi.rhs)
        out: list[Disjunct] = []
        keys: set[frozenset] = set()
        for d1 in left:
            for d2 in right:
                merged = _conjoin(d1, d2)
                key = frozenset(merged.atoms)
                if key not in keys and disjunct_sat(merged):
                    keys.add(key)
                    out.append(merged)
        return out
    raise TypeError(f"unexpected node in NNF: {phi!r}")


@lru_cache(maxsize=1 << 14)
def _to_dnf_cached(phi: BoolExpr) -> tuple[Disjunct, ...]:
    disjuncts = _dnf_of_nnf(_nnf(phi, True))
    seen: set[frozenset] = set()
    unique: list[Disjunct] = []
    for d in disjuncts:
        key = frozenset(d.atoms)
        if key not in seen:
            seen.add(key)
            unique.append(d)
    return tuple(unique)


def to_dnf(phi: BoolExpr) -> list[Disjunct]:
    """Disjunctive normal form with unsatisfiable disjuncts pruned.

    The returned list's disjunction is equivalent to ``phi``; the empty
    list encodes false.
    """
    return list(_to_dnf_cached(phi))


def dnf_to_bool(disjuncts) -> BoolExpr:
    return or_all(d.to_bool() for d in disjuncts)


@lru_cache(maxsize=1 << 14)
def reduce_disjunct(d: Disjunct) -> Disjunct:
    """Drop atoms entailed by the rest of the conjunction (same solutions).

    Scans from the back so earlier atoms win when two imply each other.
    """
    atoms = list(d.atoms)
    i = len(atoms) - 1
    while i >= 0:
        rest = atoms[:i] + atoms[i + 1 :]
        if rest and not disjunct_sat(Disjunct(tuple(rest) + (negate_atom(atoms[i]),))):
            atoms.pop(i)
        i -= 1
    return Disjunct(tuple(atoms))


def refine_dnf(state: list[Disjunct], guard: BoolExpr) -> list[Disjunct]:
    """Conjoin a guard into a pruned, deduplicated DNF state.

    Surviving disjuncts are reduced to an equivalent minimal form, so the
    per-step satisfiability checks stay cheap no matter how many guards
    have been conjoined before.
    """
    out: list[Disjunct] = []
    keys: set[frozenset] = set()
    for branch in to_dnf(guard):
        for d in state:
            merged = _conjoin(d, branch)
            if not disjunct_sat(merged):
                continue
            reduced = reduce_disjunct(merged)
            key = frozenset(reduced.atoms)
            if key not in keys:
                keys.add(key)
                out.append(reduced)
    return out


def guard_disjuncts(phi: BoolExpr) -> list[Disjunct]:
    """Split a guard already in DNF shape; falls back to full conversion."""
    out: list[Disjunct] = []

    def atoms_of(conj: BoolExpr) -> tuple[Atom, ...] | None:
        if isinstance(conj, Atom):
            return (conj,)
        if isinstance(conj, TrueExpr):
            return ()
        if isinstance(conj, And):
            a = atoms_of(conj.lhs)
            b = atoms_of(conj.rhs)
            if a is None or b is None:
                return None
            return a + b
        return None

    def walk(node: BoolExpr) -> bool:
        if isinstance(node, Or):
            return walk(node.lhs) and walk(node.rhs)
        if isinstance(node, FalseExpr):
            return True
        atoms = atoms_of(node)
        if atoms is None:
            return False
        out.append(Disjunct(atoms))
        return True

    if walk(phi):
        return out
    return to_dnf(phi)


# Fourier-Motzkin satisfiability ------------------------------------------


@lru_cache(maxsize=1 << 16)
def _classify(atom: Atom, var: str):
    """How an atom constrains ``var``: a bound, a leftover, or a constant."""
    if var not in atom.fvars():
        return ("rest", atom)
    iso = fold_atom(isolate(atom, var))
    if iso is TRUE:
        return ("true", None)
    if iso is FALSE:
        return ("false", None)
    if var not in iso.fvars():
        return ("rest", iso)
    return ("upper" if iso.rel.is_upper else "lower", (iso.rhs, iso.rel.is_strict))


def _split_bounds(atoms, var: str):
    """Partition folded, isolated atoms into bounds on ``var`` and the rest.

    Returns (lowers, uppers, rest) where bound entries are (expr, strict).
    Constant bounds collapse to the single tightest one and expression
    bounds are deduplicated, which keeps the Fourier-Motzkin cross product
    from ballooning.  ``None`` signals an atom that folded to false.
    """
    lowers: list[tuple[LinExpr, bool]] = []
    uppers: list[tuple[LinExpr, bool]] = []
    best_lo: tuple[Fraction, bool] | None = None  # max constant lower bound
    best_hi: tuple[Fraction, bool] | None = None  # min constant upper bound
    seen_bounds: set = set()
    rest: list[Atom] = []
    for atom in atoms:
        kind, payload = _classify(atom, var)
        if kind == "true":
            continue
        if kind == "false":
            return None
        if kind == "rest":
            rest.append(payload)
            continue
        bound, strict = payload
        upper = kind == "upper"
        if bound.is_constant:
            c = bound.constant
            if upper:
                if best_hi is None or c < best_hi[0] or (c == best_hi[0] and strict):
                    best_hi = (c, strict)
            else:
                if best_lo is None or c > best_lo[0] or (c == best_lo[0] and strict):
                    best_lo = (c, strict)
            continue
        key = (bound, strict, upper)
        if key in seen_bounds:
            continue
        seen_bounds.add(key)
        (uppers if upper else lowers).append((bound, strict))
    if best_lo is not None:
        lowers.append((LinExpr.const(best_lo[0]), best_lo[1]))
    if best_hi is not None:
        uppers.append((LinExpr.const(best_hi[0]), best_hi[1]))
    return lowers, uppers, rest


@lru_cache(maxsize=1 << 17)
def _bound_pair(lo: LinExpr, hi: LinExpr, strict: bool):
    """Folded comparison lo (<|<=) hi; the returned atom object is shared."""
    return fold_atom(Atom(lo, Rel.LT if strict else Rel.LE, hi))


def _fm_step(atoms, var: str):
    """Eliminate ``var``; returns the residual atoms or None if unsat."""
    split = _split_bounds(atoms, var)
    if split is None:
        return None
    lowers, uppers, rest = split
    out = dict.fromkeys(rest)
    for lo, lo_strict in lowers:
        for hi, hi_strict in uppers:
            folded = _bound_pair(lo, hi, lo_strict or hi_strict)
            if folded is FALSE:
                return None
            if folded is not TRUE:
                out[folded] = None
    return list(out)


def _atoms_fvars(atoms) -> set[str]:
    out: set[str] = set()
    for a in atoms:
        out |= a.fvars()
    return out


@lru_cache(maxsize=1 << 16)
def _sat_cached(atom_key: frozenset) -> bool:
    atoms: list[Atom] = []
    for a in atom_key:
        folded = fold_atom(a)
        if folded is FALSE:
            return False
        if folded is not TRUE:
            atoms.append(folded)
    for var in sorted(_atoms_fvars(atoms)):
        atoms = _fm_step(atoms, var)
        if atoms is None:
            return False
    for a in atoms:
        folded = fold_atom(a)
        if folded is FALSE:
            return False
        assert folded is TRUE, f"variable-free atom did not fold: {a!r}"
    return True


def disjunct_sat(d: Disjunct) -> bool:
    """Decide whether some valuation satisfies every atom of the disjunct."""
    return _sat_cached(frozenset(d.atoms))


def bool_sat(phi: BoolExpr) -> bool:
    """Satisfiability of an arbitrary guard, via pruned DNF."""
    return bool(to_dnf(phi))


def canonical_hyperplane(atom: Atom) -> LinExpr | None:
    """The atom's boundary hyperplane as a canonical expression.

    Returns a difference expression scaled so its lexicographically first
    variable has coefficient one (None for atoms without a boundary, i.e.
    foldable ones).  Atoms over the same hyperplane canonicalize equally.
    """
    plane = atom_plane(atom)
    return plane[1] if plane[0] == "plane" else None


@lru_cache(maxsize=1 << 16)
def atom_plane(atom: Atom):
    """Decompose an atom into its canonical hyperplane and orientation.

    Returns ``("const", truth)`` for atoms that fold to a constant, else
    ``("plane", expr, positive, rel)`` where the atom holds iff
    ``rel.holds(sign)`` for the sign of ``expr`` (negated when not
    ``positive``).  Atoms over the same hyperplane share the same expr.
    """
    folded = fold_atom(atom)
    if folded is TRUE:
        return ("const", True)
    if folded is FALSE:
        return ("const", False)
    diff = folded.lhs - folded.rhs  # folded atoms have two finite sides
    lead = min(diff.coeffs)
    coeff = diff.coeffs[lead]
    expr = diff.scale(Fraction(1) / coeff)
    return ("plane", expr, coeff > 0, folded.rel)


def eval_signs(phi: BoolExpr, signs: dict) -> bool | None:
    """Three-valued evaluation under partial hyperplane signs.

    ``signs`` maps canonical hyperplane expressions to -1, 0, or 1; a
    guard whose value the fixed signs already force evaluates to True or
    False, anything else to None.
    """
    if isinstance(phi, Atom):
        plane = atom_plane(phi)
        if plane[0] == "const":
            return plane[1]
        _, expr, positive, rel = plane
        sign = signs.get(expr)
        if sign is None:
            return None
        return rel.holds(sign if positive else -sign)
    if isinstance(phi, TrueExpr):
        return True
    if isinstance(phi, FalseExpr):
        return False
    if isinstance(phi, Not):
        inner = eval_signs(phi.arg, signs)
        return None if inner is None else not inner
    if isinstance(phi, And):
        left = eval_signs(phi.lhs, signs)
        if left is False:
            return False
        right = eval_signs(phi.rhs, signs)
        if right is False:
            return False
        return True if (left is True and right is True) else None
    if isinstance(phi, Or):
        left = eval_signs(phi.lhs, signs)
        if left is True:
            return True
        right = eval_signs(phi.rhs, signs)
        if right is True:
            return True
        return False if (left is False and right is False) else None
    raise TypeError(f"not a Boolean expression: {phi!r}")


def guard_planes(phi: BoolExpr) -> list[LinExpr]:
    """Canonical hyperplanes occurring in a guard, in syntactic order."""
    out: list[LinExpr] = []
    seen: set[LinExpr] = set()

    def walk(node: BoolExpr):
        if isinstance(node, Atom):
            plane = atom_plane(node)
            if plane[0] == "plane" and plane[1] not in seen:
                seen.add(plane[1])
                out.append(plane[1])
        elif isinstance(node, Not):
            walk(node.arg)
        elif isinstance(node, (And, Or)):
            walk(node.lhs)
            walk(node.rhs)

    walk(phi)
    return out


def fm_witness(d: Disjunct, extra_vars=()) -> Valuation | None:
    """A satisfying valuation for the disjunct, or None when unsatisfiable.

    Variables are eliminated in name order; back-substitution picks the
    midpoint of each residual interval, bound +/- 1 when one-sided, and 0
    when unconstrained.  ``extra_vars`` are included (defaulting to 0).
    """
    atoms: list[Atom] = []
    for a in d:
        folded = fold_atom(a)
        if folded is FALSE:
            return None
        if folded is not TRUE:
            atoms.append(folded)
    variables = sorted(_atoms_fvars(atoms))
    stages: list[tuple[str, list, list]] = []
    system = atoms
    for var in variables:
        split = _split_bounds(system, var)
        if split is None:
            return None
        lowers, uppers, rest = split
        stages.append((var, lowers, uppers))
        system = _fm_step(system, var)
        if system is None:
            return None
    values: dict[str, Fraction] = {}
    valuation = Valuation()
    for var, lowers, uppers in reversed(stages):
        lo = hi = None
        lo_strict = hi_strict = False
        for expr, strict in lowers:
            v = expr.evaluate(valuation)
            if lo is None or v > lo or (v == lo and strict):
                lo, lo_strict = v, strict if (lo is None or v > lo) else (lo_strict or strict)
        for expr, strict in uppers:
            v = expr.evaluate(valuation)
            if hi is None or v < hi or (v == hi and strict):
                hi, hi_strict = v, strict if (hi is None or v < hi) else (hi_strict or strict)
        if lo is None and hi is None:
            pick = Fraction(0)
        elif lo is None:
            pick = hi - 1
        elif hi is None:
            pick = lo + 1
        elif lo == hi:
            assert not lo_strict and not hi_strict, "empty interval after FM"
            pick = lo
        else:
            assert lo < hi, "inverted interval after FM"
            pick = (lo + hi) / 2
        values[var] = pick
        valuation = Valuation(values)
    for var in extra_vars:
        if var not in values:
            values[var] = Fraction(0)
    return Valuation(values)
