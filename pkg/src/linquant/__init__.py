"""Symbolic sup/inf quantifier elimination, quantitative entailment, and
Craig interpolation for piecewise linear quantities over extended rationals."""

from .errors import (
    IndexOutOfRange,
    LinquantError,
    MissingVariable,
    NonLinearError,
    NotEntailed,
    NotIsolated,
    NotPartitioning,
    ParseError,
    UndefinedSum,
    WellFormednessViolation,
)
from .interpolate import entails, strongest_interpolant, weakest_interpolant
from .normalform import check_well_formed, is_partitioning, make_partitioning, to_gnf
from .numerics import NEG_INF, POS_INF, ExtRat, Rational, ext_add, ext_cmp, ext_scale
from .oracle import (
    GenParams,
    equiv_sample,
    eval_quantity,
    oracle_inf,
    oracle_sup,
    random_quantity,
)
from .parser import parse_body, parse_quantity
from .printer import print_quantity, quantity_from_json, quantity_to_json
from .qelim import (
    BoundSets,
    depth,
    eliminate,
    eliminate_over_disjunct,
    eliminate_var,
    extract_bounds,
    feasibility,
    greatest_lower_selector,
    least_upper_selector,
    pointwise_max,
    pointwise_min,
    simplify_body,
    substitute_bound,
    width,
)
from .terms import (
    NEG_OO,
    OO,
    Atom,
    BoolExpr,
    Disjunct,
    GuardedTerm,
    InfExpr,
    LinExpr,
    Quant,
    Quantity,
    Rel,
    Valuation,
    free_vars,
    lin_eval,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BoolExpr",
    "BoundSets",
    "Disjunct",
    "ExtRat",
    "GenParams",
    "GuardedTerm",
    "IndexOutOfRange",
    "InfExpr",
    "LinExpr",
    "LinquantError",
    "MissingVariable",
    "NEG_INF",
    "NEG_OO",
    "NonLinearError",
    "NotEntailed",
    "NotIsolated",
    "NotPartitioning",
    "OO",
    "POS_INF",
    "ParseError",
    "Quant",
    "Quantity",
    "Rational",
    "Rel",
    "UndefinedSum",
    "Valuation",
    "WellFormednessViolation",
    "check_well_formed",
    "depth",
    "eliminate",
    "eliminate_over_disjunct",
    "eliminate_var",
    "entails",
    "equiv_sample",
    "eval_quantity",
    "ext_add",
    "ext_cmp",
    "ext_scale",
    "extract_bounds",
    "feasibility",
    "free_vars",
    "greatest_lower_selector",
    "is_partitioning",
    "least_upper_selector",
    "lin_eval",
    "make_partitioning",
    "oracle_inf",
    "oracle_sup",
    "parse_body",
    "parse_quantity",
    "pointwise_max",
    "pointwise_min",
    "print_quantity",
    "quantity_from_json",
    "quantity_to_json",
    "random_quantity",
    "simplify_body",
    "strongest_interpolant",
    "substitute_bound",
    "to_gnf",
    "weakest_interpolant",
    "width",
]
