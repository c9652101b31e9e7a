"""Quantitative entailment and Craig interpolant construction."""

import random
from fractions import Fraction

import pytest

from linquant import (
    GenParams,
    LinExpr,
    NotEntailed,
    Quantity,
    entails,
    equiv_sample,
    eval_quantity,
    ext_cmp,
    free_vars,
    random_quantity,
    strongest_interpolant,
    weakest_interpolant,
)
from linquant.parser import parse_quantity
from linquant.terms import Atom, GuardedTerm, Rel, Valuation, fvars_body

from conftest import val


class TestEntails:
    def test_craig_pair(self, craig_pair):
        f, g = craig_pair
        assert entails(f, g) is None

    def test_reflexive(self, ex1, craig_pair):
        for q in (ex1, *craig_pair, parse_quantity("[true] * 0")):
            assert entails(q, q) is None

    def test_constant_gap(self):
        one = parse_quantity("[true] * 1")
        zero = parse_quantity("[true] * 0")
        witness = entails(one, zero)
        assert witness is not None
        assert entails(zero, one) is None

    def test_witness_is_exact(self):
        f = parse_quantity("[x >= 0] * (2*x + 1)")
        g = parse_quantity("[x >= 3] * (5*x)")
        witness = entails(f, g)
        assert witness is not None
        assert ext_cmp(
            eval_quantity(witness, f.body), eval_quantity(witness, g.body)
        ) > 0

    def test_infinite_right_side_absorbs(self):
        f = parse_quantity("[true] * 100")
        g = parse_quantity("[true] * oo")
        assert entails(f, g) is None
        assert entails(g, f) is not None

    def test_negative_infinity_left_absorbs(self):
        f = parse_quantity("[true] * (-oo)")
        g = parse_quantity("[true] * (-5)")
        assert entails(f, g) is None

    def test_quantified_inputs(self):
        # sup over y of the Craig left side equals [x>=0]*2x pointwise
        projected = parse_quantity("sup y : [x >= 0] * x + [x >= 0 && y <= x] * y")
        assert entails(projected, parse_quantity("[x >= 0] * (3*x)")) is None
        assert entails(parse_quantity("[x >= 0] * (3*x)"), projected) is not None


class TestStrongestInterpolant:
    def test_craig_example(self, craig_pair):
        f, g = craig_pair
        s = strongest_interpolant(f, g)
        expected = parse_quantity("[x >= 0] * (2*x)")
        assert s.prefix == ()
        assert equiv_sample(s, expected, 1000, seed=7) is None
        assert free_vars(s) <= free_vars(f) & free_vars(g)
        assert entails(f, s) is None
        assert entails(s, g) is None

    def test_no_private_variables_degenerates_to_elimination(self):
        f = parse_quantity("[x >= 0] * x")
        g = parse_quantity("[x >= 0] * (x + 1) + [y > 0] * 1")
        s = strongest_interpolant(f, g)
        assert equiv_sample(s, f, 500, seed=3) is None

    def test_not_entailed_raises(self):
        f = parse_quantity("[true] * 1")
        g = parse_quantity("[true] * 0")
        with pytest.raises(NotEntailed) as err:
            strongest_interpolant(f, g)
        assert err.value.witness is not None


class TestWeakestInterpolant:
    def test_craig_example(self, craig_pair):
        f, g = craig_pair
        w = weakest_interpolant(f, g)
        expected = parse_quantity("[x >= 0] * (3*x + 1)")
        assert equiv_sample(w, expected, 1000, seed=7) is None
        assert free_vars(w) <= free_vars(f) & free_vars(g)
        assert entails(f, w) is None
        assert entails(w, g) is None

    def test_strongest_entails_weakest(self, craig_pair):
        f, g = craig_pair
        s = strongest_interpolant(f, g)
        w = weakest_interpolant(f, g)
        assert entails(s, w) is None

    def test_no_private_variables(self):
        f = parse_quantity("[x >= 0] * x + [y > 0] * 1")
        g = parse_quantity("[x >= 0] * (x + 2) + [y > 0] * 2")
        w = weakest_interpolant(f, g)
        assert equiv_sample(w, g, 500, seed=4) is None


from conftest import entailing_pair


class TestEntailsSamplingAgreement:
    def test_yes_verdicts_hold_at_samples(self):
        rng = random.Random(555)
        for seed in range(5):
            f, g = entailing_pair(seed)
            assert entails(f, g) is None
            variables = sorted(fvars_body(f.body) | fvars_body(g.body))
            for _ in range(500):
                sigma = Valuation(
                    {v: Fraction(rng.randint(-40, 40), 4) for v in variables}
                )
                assert (
                    ext_cmp(eval_quantity(sigma, f.body), eval_quantity(sigma, g.body))
                    <= 0
                )


    def test_no_verdicts_carry_exact_witnesses(self):
        rng = random.Random(777)
        saw_no = 0
        for seed in range(30):
            f = random_quantity(
                GenParams(vars=2, summands=2, atoms_per_guard=2, infinity_prob=0.1,
                          quantifiers=0),
                7_000 + seed,
            )
            g = random_quantity(
                GenParams(vars=2, summands=2, atoms_per_guard=2, infinity_prob=0.1,
                          quantifiers=0),
                7_500 + seed,
            )
            witness = entails(f, g)
            if witness is None:
                continue
            saw_no += 1
            assert ext_cmp(
                eval_quantity(witness, f.body), eval_quantity(witness, g.body)
            ) > 0
        assert saw_no > 10  # random pairs rarely entail


class TestSandwich:
    def test_constructed_pairs(self):
        for seed in range(25):
            f, g = entailing_pair(seed)
            assert entails(f, g) is None
            s = strongest_interpolant(f, g)
            w = weakest_interpolant(f, g)
            shared = free_vars(f) & free_vars(g)
            assert free_vars(s) <= shared
            assert free_vars(w) <= shared
            assert entails(f, s) is None
            assert entails(s, w) is None
            assert entails(w, g) is None

    def test_strongest_entails_generated_candidates(self):
        # candidates = strongest + nonnegative constants over shared variables
        for seed in range(8):
            f, g = entailing_pair(100 + seed)
            s = strongest_interpolant(f, g)
            rng = random.Random(seed)
            candidate = Quantity(
                (),
                s.body
                + (
                    GuardedTerm(
                        Atom(
                            LinExpr.var(sorted(free_vars(f) & free_vars(g) or {"x"})[0]),
                            Rel.GE,
                            LinExpr.const(rng.randint(-2, 2)),
                        ),
                        LinExpr.const(rng.randint(0, 2)),
                    ),
                ),
            )
            if entails(f, candidate) is None and entails(candidate, g) is None:
                assert entails(s, candidate) is None
