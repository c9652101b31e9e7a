"""Command-line interface.

Commands: elim, eval, interpolate, entails, check, gnf, selftest.  Input is
a UTF-8 file in the quantity grammar (or a JSON AST, detected by a leading
"{"); ``-`` or no file reads stdin.  Exit codes: 0 success, 1 parse error,
2 well-formedness violation, 3 missing variable binding, 4 failed
entailment.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import MissingVariable, NotEntailed, ParseError, WellFormednessViolation
from .interpolate import entails, strongest_interpolant, weakest_interpolant
from .normalform import check_well_formed, to_gnf
from .oracle import GenParams, eval_quantity, oracle_inf, oracle_sup, random_quantity
from .parser import parse_quantity
from .printer import print_quantity, quantity_from_json, quantity_to_json
from .qelim import eliminate
from .terms import Quant, Quantity, Valuation, free_vars

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ILL_FORMED = 2
EXIT_MISSING_VAR = 3
EXIT_NOT_ENTAILED = 4


def _read_quantity(path: str | None) -> Quantity:
    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    if text.lstrip().startswith("{"):
        return quantity_from_json(json.loads(text))
    return parse_quantity(text)


def _emit(q: Quantity, as_json: bool) -> None:
    if as_json:
        print(json.dumps(quantity_to_json(q), sort_keys=True))
    else:
        print(print_quantity(q))


def _parse_sigma(spec: str) -> Valuation:
    bindings = {}
    if spec.strip():
        for piece in spec.split(","):
            name, _, value = piece.partition("=")
            if not value:
                raise ParseError(f"bad binding {piece!r}, expected var=value", 1, 1)
            bindings[name.strip()] = Fraction(value.strip())
    return Valuation(bindings)


def _require_well_formed(q: Quantity) -> None:
    violation = check_well_formed(q)
    if violation is not None:
        raise violation


def _cmd_elim(args) -> int:
    q = _read_quantity(args.file)
    _require_well_formed(q)
    result = eliminate(q, simplify=args.simplify, jobs=args.jobs)
    _emit(result, args.json)
    return EXIT_OK


def _cmd_eval(args) -> int:
    q = _read_quantity(args.file)
    _require_well_formed(q)
    sigma = _parse_sigma(args.sigma)
    if q.prefix:
        q = eliminate(q, jobs=args.jobs)
    missing = sorted(free_vars(q) - set(sigma))
    if missing:
        raise MissingVariable(missing[0])
    print(eval_quantity(sigma, q.body))
    return EXIT_OK


def _cmd_entails(args) -> int:
    f = _read_quantity(args.f)
    g = _read_quantity(args.g)
    _require_well_formed(f)
    _require_well_formed(g)
    witness = entails(f, g)
    if witness is None:
        print("yes")
        return EXIT_OK
    print(f"no {witness}")
    return EXIT_NOT_ENTAILED


def _cmd_interpolate(args) -> int:
    f = _read_quantity(args.f)
    g = _read_quantity(args.g)
    _require_well_formed(f)
    _require_well_formed(g)
    build = weakest_interpolant if args.weakest else strongest_interpolant
    result = build(f, g, jobs=args.jobs)
    _emit(result, args.json)
    return EXIT_OK


def _cmd_check(args) -> int:
    q = _read_quantity(args.file)
    violation = check_well_formed(q)
    if violation is None:
        print("ok")
        return EXIT_OK
    i, j = violation.pair
    print(f"violation: terms {i} and {j} overlap with values oo and -oo")
    return EXIT_ILL_FORMED


def _cmd_gnf(args) -> int:
    q = _read_quantity(args.file)
    _require_well_formed(q)
    _emit(to_gnf(q, args.var), args.json)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    """Randomized agreement check between the engine and the brute-force oracle."""
    from .oracle import random_valuation, sample_pool
    from .numerics import ext_cmp

    params = GenParams(vars=3, summands=2, atoms_per_guard=2, coeff_bound=3,
                       infinity_prob=0.1, quantifiers=1)
    failures = 0
    import random as _random

    for case in range(args.cases):
        q = random_quantity(params, seed=args.seed + case)
        quant, var = q.prefix[0]
        gnf = to_gnf(Quantity((), q.body), var)
        result = eliminate(q)
        rng = _random.Random(args.seed * 7919 + case)
        variables = sorted(free_vars(q))
        pool = sample_pool(result)
        oracle = oracle_sup if quant is Quant.SUP else oracle_inf
        for _ in range(args.samples):
            sigma = random_valuation(variables, rng, pool)
            expected = oracle(sigma, var, gnf.body)
            actual = eval_quantity(sigma, result.body)
            if ext_cmp(expected, actual) != 0:
                failures += 1
                print(f"mismatch at seed {args.seed + case}: {sigma} -> {actual} (oracle {expected})")
                break
    print(f"selftest: {args.cases - failures}/{args.cases} cases agree with the oracle")
    return EXIT_OK if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linquant",
        description="Quantifier elimination and Craig interpolation for piecewise linear quantities.",
    )
    sub = parser.add_subparsers(
        dest="command",
        required=True,
        metavar="{elim,eval,entails,interpolate,check,gnf}",
    )

    def add_common(p, with_jobs=True):
        p.add_argument("--json", action="store_true", help="emit the JSON AST")
        if with_jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel elimination tasks")

    p = sub.add_parser("elim", help="eliminate all quantifiers")
    p.add_argument("file", nargs="?", help="input file (default: stdin)")
    p.add_argument("--simplify", action="store_true", help="merge and drop redundant terms")
    add_common(p)
    p.set_defaults(func=_cmd_elim)

    p = sub.add_parser("eval", help="evaluate at a valuation")
    p.add_argument("file", nargs="?")
    p.add_argument("--sigma", default="", help="comma-separated bindings, e.g. x=1,y=-2/3")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("entails", help="decide quantitative entailment f |= g")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=_cmd_entails)

    p = sub.add_parser("interpolate", help="construct a Craig interpolant")
    p.add_argument("f")
    p.add_argument("g")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strongest", action="store_true", default=True)
    group.add_argument("--weakest", action="store_true", default=False)
    add_common(p)
    p.set_defaults(func=_cmd_interpolate)

    p = sub.add_parser("check", help="check well-formedness")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("gnf", help="guarded normal form w.r.t. a variable")
    p.add_argument("file", nargs="?")
    p.add_argument("--var", required=True)
    add_common(p, with_jobs=False)
    p.set_defaults(func=_cmd_gnf)

    # hidden: randomized oracle-agreement harness
    p = sub.add_parser("selftest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--cases", type=int, default=25)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WellFormednessViolation as exc:
        i, j = exc.pair
        print(f"ill-formed: terms {i} and {j} overlap with values oo and -oo", file=sys.stderr)
        return EXIT_ILL_FORMED
    except MissingVariable as exc:
        print(f"missing binding: {exc}", file=sys.stderr)
        return EXIT_MISSING_VAR
    except NotEntailed as exc:
        print(f"not an entailment: {exc}", file=sys.stderr)
        return EXIT_NOT_ENTAILED


if __name__ == "__main__":
    raise SystemExit(main())
