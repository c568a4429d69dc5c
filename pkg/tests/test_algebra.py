"""Laurent arithmetic tests.

The expected strings and monomial values in this file were frozen by hand
before the implementation existed, so they act as an independent check on
the canonical form rather than a snapshot of it.
"""

import pytest
from hypothesis import given, settings, strategies as st

from snakegraphs.algebra import (
    Mat2,
    Mono,
    NotUnimodular,
    Poly,
    PolyParseError,
    SubstituteNonMonomial,
    ZeroPolynomial,
    format_mono,
    format_poly,
    parse_poly,
    var,
)

VARS = [("x", "t1"), ("x", "t2"), ("y", "t1"), ("Y", "t2"), ("b", "b1")]


def mono_strategy():
    return st.dictionaries(
        st.sampled_from(VARS), st.integers(-4, 4), max_size=3
    ).map(Mono)


def poly_strategy():
    return st.dictionaries(
        mono_strategy(), st.integers(-5, 5), max_size=4
    ).map(Poly)


polys = poly_strategy()


class TestRingAxioms:
    @settings(max_examples=200)
    @given(polys, polys, polys)
    def test_add_associative_commutative(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p

    @settings(max_examples=200)
    @given(polys, polys, polys)
    def test_mul_associative_commutative(self, p, q, r):
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p

    @settings(max_examples=200)
    @given(polys, polys, polys)
    def test_distributive(self, p, q, r):
        assert p * (q + r) == p * q + p * r

    @given(polys)
    def test_identities(self, p):
        assert p + Poly.zero() == p
        assert p * Poly.one() == p
        assert p - p == Poly.zero()
        assert p * Poly.zero() == Poly.zero()


class TestCanonicalText:
    def test_simple_rendering(self):
        p = Poly.of_var("x", "t1") + Poly.of_var("y", "t1")
        assert format_poly(p) == "x:t1 + y:t1"

    def test_kind_order_in_ties(self):
        # same degree: x before y before Y before b
        p = (Poly.of_var("b", "b1") + Poly.of_var("Y", "t2")
             + Poly.of_var("x", "t1") + Poly.of_var("y", "t1"))
        assert format_poly(p) == "x:t1 + y:t1 + Y:t2 + b:b1"

    def test_graded_order(self):
        x = Poly.of_var("x", "t1")
        p = x * x + x + Poly.const(7)
        assert format_poly(p) == "x:t1^2 + x:t1 + 7"

    def test_negative_and_coefficients(self):
        x = Poly.of_var("x", "t1")
        y = Poly.of_var("y", "t1")
        p = Poly.const(-3) * x + y * 2
        assert format_poly(p) == "-3*x:t1 + 2*y:t1"
        assert format_poly(-p) == "3*x:t1 - 2*y:t1"

    def test_half_and_negative_powers(self):
        m = Mono({var("x", "t1"): 1, var("Y", "t2"): -3, var("x", "t2"): -2})
        assert format_mono(m) == "x:t1^(1/2)*x:t2^-1*Y:t2^(-3/2)"

    def test_zero(self):
        assert format_poly(Poly.zero()) == "0"
        assert parse_poly("0") == Poly.zero()

    def test_labels_with_dashes(self):
        p = Poly.of_var("x", "0-2") - Poly.of_var("x", "1-3")
        assert format_poly(p) == "x:0-2 - x:1-3"
        assert parse_poly(format_poly(p)) == p

    @settings(max_examples=300)
    @given(polys)
    def test_round_trip(self, p):
        assert parse_poly(format_poly(p)) == p

    def test_parse_rejects_garbage(self):
        for bad in ["", "x", "x:t1^", "q:t1", "x:t1^^2", "x:"]:
            with pytest.raises(PolyParseError):
                parse_poly(bad)


class TestSubstitute:
    def test_monomial_value(self):
        p = Poly.of_var("x", "t1") + Poly.one()
        v = Mono({var("x", "a"): 2, var("x", "b"): 2})
        q = p.substitute({var("x", "t1"): v})
        assert q == Poly.from_mono(v) + Poly.one()

    def test_value_one_kills_variable(self):
        p = Poly.of_var("b", "b1") * Poly.of_var("x", "t1")
        q = p.substitute({var("b", "b1"): 1})
        assert q == Poly.of_var("x", "t1")

    def test_half_power_of_square(self):
        p = Poly.of_var("Y", "t1", exp2=1)
        q = p.substitute({var("Y", "t1"): Mono.of("y", "u")})
        assert q == Poly.of_var("y", "u", exp2=1)

    def test_rejects_sum(self):
        p = Poly.of_var("x", "t1")
        with pytest.raises(SubstituteNonMonomial):
            p.substitute({var("x", "t1"): Poly.one() + Poly.of_var("x", "a")})

    def test_rejects_fractional_result(self):
        p = Poly.of_var("x", "t1", exp2=1)
        with pytest.raises(SubstituteNonMonomial):
            p.substitute({var("x", "t1"): Mono.of("x", "a", exp2=1)})

    def test_merging_after_substitution(self):
        x1, x2 = Poly.of_var("x", "t1"), Poly.of_var("x", "t2")
        p = x1 + x2
        q = p.substitute({var("x", "t2"): Mono.of("x", "t1")})
        assert q == Poly.const(2) * x1


class TestTropical:
    def test_min_exponents(self):
        y1, y2 = var("y", "t1"), var("y", "t2")
        p = (Poly.one() + Poly.from_mono(Mono({y1: 2, y2: -2}))
             + Poly.from_mono(Mono({y2: 4})))
        t = p.tropical_eval([y1, y2])
        assert t == Mono({y2: -2})

    def test_constant_term_gives_unit(self):
        p = Poly.one() + Poly.of_var("y", "t1")
        assert p.tropical_eval() == Mono.unit()

    def test_zero_raises(self):
        with pytest.raises(ZeroPolynomial):
            Poly.zero().tropical_eval()

    def test_restricted_variables(self):
        p = Poly.of_var("x", "t1") * Poly.of_var("y", "t1")
        t = p.tropical_eval([var("y", "t1")])
        assert t == Mono.of("y", "t1")


class TestMat2:
    def x(self, lbl):
        return Poly.of_var("x", lbl)

    def test_mul_and_identity(self):
        m = Mat2(self.x("a"), self.x("b"), self.x("c"), self.x("d"))
        assert Mat2.identity() * m == m
        assert m * Mat2.identity() == m

    def test_det_trace_ur(self):
        m = Mat2(self.x("a"), self.x("b"), self.x("c"), self.x("d"))
        assert m.det() == self.x("a") * self.x("d") - self.x("b") * self.x("c")
        assert m.trace() == self.x("a") + self.x("d")
        assert m.upper_right() == self.x("b")

    def test_inverse_unimodular(self):
        # a lower triangular unipotent and a rotation-like factor both have
        # determinant 1 in the Laurent ring
        s = Poly.of_var("x", "s").div_mono(
            Mono({var("x", "t"): 2, var("x", "u"): 2}))
        low = Mat2(1, 0, s, 1)
        rot = Mat2(0, self.x("t"),
                   Poly.zero() - Poly.of_var("x", "t", exp2=-2), 0)
        for m in (low, rot, low * rot, rot * low * rot):
            inv = m.inverse_unimodular()
            assert m * inv == Mat2.identity()
            assert inv * m == Mat2.identity()

    def test_inverse_rejects_other_determinants(self):
        with pytest.raises(NotUnimodular):
            Mat2(self.x("a"), 0, 0, self.x("a")).inverse_unimodular()
        with pytest.raises(NotUnimodular):
            Mat2(0, 1, 1, 0).inverse_unimodular()  # det -1
