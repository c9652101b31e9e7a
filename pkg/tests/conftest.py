"""Shared fixtures and small independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from linquant import (
    Atom,
    Disjunct,
    GenParams,
    LinExpr,
    Quantity,
    Rel,
    Valuation,
    parse_quantity,
)
from linquant.logic import atom_eval

EX1_TEXT = "sup x : [y1 >= z -> (x - 2 < y1 && -x >= y3 && x >= y2)] * (2*x + z)"

CRAIG_F_TEXT = "[x >= 0] * x + [x >= 0 && y <= x] * y"
CRAIG_G_TEXT = "[x >= 0 && z >= x] * (2*x + z + 1) + [z < x] * oo"


@pytest.fixture
def ex1() -> Quantity:
    return parse_quantity(EX1_TEXT)


@pytest.fixture
def craig_pair() -> tuple[Quantity, Quantity]:
    return parse_quantity(CRAIG_F_TEXT), parse_quantity(CRAIG_G_TEXT)


def val(**bindings) -> Valuation:
    return Valuation({k: Fraction(v) for k, v in bindings.items()})


def lin(constant=0, **coeffs) -> LinExpr:
    return LinExpr(Fraction(constant), {k: Fraction(v) for k, v in coeffs.items()})


def atom(lhs, rel: str, rhs) -> Atom:
    to_expr = lambda e: e if not isinstance(e, (int, Fraction)) else LinExpr.const(e)
    return Atom(to_expr(lhs), Rel(rel), to_expr(rhs))


def grid_sat(d: Disjunct, variables, lo=-5, hi=5, denominator=4) -> Valuation | None:
    """Exhaustive small-grid satisfiability oracle (quarter-integer grid)."""
    variables = sorted(variables)
    if not variables:
        empty = Valuation({})
        return empty if all(atom_eval(empty, a) for a in d) else None

    steps = [Fraction(k, denominator) for k in range(lo * denominator, hi * denominator + 1)]

    def rec(i: int, bound: dict) -> Valuation | None:
        if i == len(variables):
            sigma = Valuation(bound)
            if all(atom_eval(sigma, a) for a in d):
                return sigma
            return None
        for q in steps:
            bound[variables[i]] = q
            found = rec(i + 1, bound)
            if found is not None:
                return found
        del bound[variables[i]]
        return None

    return rec(0, {})


def random_iso_disjunct(
    rng: random.Random, variables, var: str, max_atoms=4, bound=3
) -> Disjunct:
    """A random disjunct whose ``var`` atoms are isolated, with integer
    coefficients/constants in [-bound, bound]."""
    others = [v for v in variables if v != var]
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        rel = rng.choice(list(Rel))
        if rng.random() < 0.7:
            # bound on var: constant or linear in the other variables
            if others and rng.random() < 0.6:
                coeffs = {v: rng.randint(-bound, bound) for v in rng.sample(others, 1)}
                rhs = LinExpr(rng.randint(-bound, bound), coeffs)
            else:
                rhs = LinExpr.const(rng.randint(-bound, bound))
            atoms.append(Atom(LinExpr.var(var), rel, rhs))
        elif others:
            lhs = LinExpr(rng.randint(-bound, bound), {rng.choice(others): rng.choice((-1, 1))})
            atoms.append(Atom(lhs, rel, LinExpr.const(rng.randint(-bound, bound))))
        else:
            atoms.append(Atom(LinExpr.var(var), rel, LinExpr.const(rng.randint(-bound, bound))))
    return Disjunct(tuple(atoms))


def direct_bound_check(d: Disjunct, var: str, sigma: Valuation):
    """Independent interval analysis of {q : sigma[var -> q] satisfies d}.

    Returns (nonempty, greatest_lower, least_upper) where the bounds are
    ExtRat values (defaults -oo / oo) computed directly from the atoms;
    assumes the ``var`` atoms are isolated.
    """
    from linquant import NEG_INF, POS_INF, ext_cmp, lin_eval

    lows: list[tuple] = []
    highs: list[tuple] = []
    for a in d:
        mentions = var in getattr(a.lhs, "coeffs", {}) or var in getattr(a.rhs, "coeffs", {})
        if not mentions:
            if not atom_eval(sigma, a):
                return False, None, None
            continue
        value = lin_eval(sigma, a.rhs)
        if a.rel in (Rel.LT, Rel.LE):
            highs.append((value, a.rel is Rel.LT))
        else:
            lows.append((value, a.rel is Rel.GT))
    glb, glb_strict = NEG_INF, False
    for value, strict in lows:
        c = ext_cmp(value, glb)
        if c > 0:
            glb, glb_strict = value, strict
        elif c == 0:
            glb_strict = glb_strict or strict
    lub, lub_strict = POS_INF, False
    for value, strict in highs:
        c = ext_cmp(value, lub)
        if c < 0:
            lub, lub_strict = value, strict
        elif c == 0:
            lub_strict = lub_strict or strict
    c = ext_cmp(glb, lub)
    nonempty = c < 0 or (c == 0 and not glb_strict and not lub_strict and glb.is_finite)
    return nonempty, glb, lub


def seeded_instances(count: int, base_seed: int, **overrides):
    params = GenParams(**overrides)
    from linquant import random_quantity

    return [random_quantity(params, base_seed + k) for k in range(count)]


def entailing_pair(seed: int):
    """A pair (f, g) with g = f plus a nonnegative-valued extra body over
    shared variables (plus occasionally a fresh one), so f entails g by
    construction."""
    from linquant import random_quantity
    from linquant.terms import GuardedTerm, Quantity, fvars_body

    rng = random.Random(seed)
    f = random_quantity(
        GenParams(vars=2, summands=2, atoms_per_guard=2, infinity_prob=0.1, quantifiers=0),
        seed,
    )
    shared = sorted(fvars_body(f.body)) or ["x"]
    extra_terms = []
    for _ in range(rng.randint(1, 2)):
        var = rng.choice(shared + ["w"])
        guard = Atom(
            LinExpr.var(var),
            Rel.LE if rng.random() < 0.5 else Rel.GT,
            LinExpr.const(rng.randint(-2, 2)),
        )
        extra_terms.append(GuardedTerm(guard, LinExpr.const(rng.randint(0, 3))))
    return f, Quantity((), f.body + tuple(extra_terms))
