"""Polynomial arithmetic: rings, univariate division, gcds, rational functions and matrices."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import gcd as sympy_gcd

from qetale.domains import QQ, PolynomialDomain
from qetale.exceptions import DomainError, NotDivisible, PreconditionError
from qetale.exprio import parse_poly
from qetale.gcd import mv_gcd, squarefree_part
from qetale.matrix import Matrix
from qetale.mpoly import PolyRing
from qetale.ratfun import RatFun
from qetale.sympy_bridge import from_sympy, to_sympy
from qetale.upoly import UPoly, specialize

R = PolyRing(["x", "y"])

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, ring=R, max_terms=4, max_exp=3):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_exp) for _ in ring.gens]),
            small,
            max_size=max_terms,
        )
    )
    return ring.from_dict(terms)


@st.composite
def upolys(draw, max_degree=5):
    return UPoly(draw(st.lists(small, max_size=max_degree + 1)))


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(polys(), polys(), polys())
    def test_commutative_ring(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == R.zero

    @settings(max_examples=40, deadline=None)
    @given(polys(), polys())
    def test_exact_divide_inverts_multiplication(self, a, b):
        if b.is_zero:
            return
        assert (a * b).exact_divide(b) == a

    def test_exact_divide_rejects_remainder(self):
        x = parse_poly("x^2 + 1", ["x"])
        with pytest.raises(NotDivisible):
            x.exact_divide(parse_poly("x + 1", ["x"]))

    def test_ring_mismatch(self):
        with pytest.raises(DomainError):
            R.gen("x") + PolyRing(["x"]).gen("x")

    def test_evaluate_requires_every_variable(self):
        with pytest.raises(DomainError):
            parse_poly("x*y", R).evaluate({"x": 1})

    def test_specialize_and_evaluate(self):
        f = parse_poly("x^2*y - 3*y + 1/2", R)
        assert f.specialize({"y": 2}) == parse_poly("2*x^2 - 11/2", R)
        assert f.evaluate({"x": 1, "y": Fraction(1, 2)}) == Fraction(-1, 2)

    def test_primitive_is_integral_with_positive_lead(self):
        f = parse_poly("-2/3*x + 4/9", ["x"])
        assert f.primitive() == parse_poly("3*x - 2", ["x"])


class TestUnivariate:
    @settings(max_examples=60, deadline=None)
    @given(upolys(), upolys())
    def test_division_identity(self, a, b):
        if b.is_zero:
            return
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero or r.degree < b.degree

    def test_gcd_and_squarefree(self):
        f = UPoly([-2, 3, 0, -1]).scale(Fraction(-1))  # x^3 - 3x + 2 = (x - 1)^2 (x + 2)
        assert f.gcd(f.derivative()) == UPoly([-1, 1])
        assert f.squarefree_part() == UPoly([-2, 1, 1])

    def test_gcd_needs_a_field(self):
        dom = PolynomialDomain(PolyRing(["p"]))
        f = UPoly([dom.one, dom.one], dom)
        with pytest.raises(PreconditionError):
            f.gcd(f)

    def test_specialize_reports_degree_drop(self):
        ring = PolyRing(["c"])
        dom = PolynomialDomain(ring)
        g = UPoly([ring.one, ring.zero, ring.gen("c")], dom)
        result = specialize(g, {"c": 0})
        assert result.degree_dropped
        assert result.value == UPoly([1])


class TestGcd:
    @pytest.mark.parametrize(
        "a,b",
        [
            ("x^2 - y^2", "x^2 + 2*x*y + y^2"),
            ("x^3*y - x*y^3", "x^2*y + x*y^2"),
            ("x + 1", "y - 1"),
            ("6*x^2 - 6", "4*x + 4"),
        ],
        ids=["difference-of-squares", "common-monomial", "coprime", "content"],
    )
    def test_matches_sympy(self, a, b):
        fa, fb = parse_poly(a, R), parse_poly(b, R)
        expected = from_sympy(to_sympy(fa).gcd(to_sympy(fb)), R).primitive()
        assert mv_gcd(fa, fb) == expected

    @settings(max_examples=30, deadline=None)
    @given(polys(max_terms=3, max_exp=2), polys(max_terms=3, max_exp=2), polys(max_terms=2, max_exp=1))
    def test_common_factor_divides_gcd(self, a, b, c):
        if a.is_zero or b.is_zero or c.is_zero:
            return
        g = mv_gcd(a * c, b * c)
        assert (a * c).exact_divide(g) * g == a * c
        assert g.exact_divide(c.primitive()) is not None
        expected = from_sympy(sympy_gcd(to_sympy(a * c), to_sympy(b * c)), R).primitive()
        assert g == expected

    @pytest.mark.parametrize(
        "f,expected",
        [
            ("(x - 1)^2*(x + y)", "(x - 1)*(x + y)"),
            ("-3*x^3*y^2", "x*y"),
            ("4*(x^2 + y^2 - 1)^3*(x - y)", "(x^2 + y^2 - 1)*(x - y)"),
            ("x^2 - y^2", "x^2 - y^2"),
            ("7", "1"),
        ],
        ids=["repeated-line", "monomial", "cubed-circle", "already-squarefree", "constant"],
    )
    def test_squarefree_part(self, f, expected):
        assert squarefree_part(parse_poly(f, R)) == parse_poly(expected, R).primitive()


class TestRatFun:
    def test_equality_cross_multiplies(self):
        x, y = R.gen("x"), R.gen("y")
        assert RatFun(x * y, y * y) == RatFun(x, y)
        assert RatFun(x, y) != RatFun(y, x)

    def test_arithmetic(self):
        x, y = R.gen("x"), R.gen("y")
        a = RatFun(x, y)
        b = RatFun(y, x)
        assert a * b == RatFun(R.one)
        assert a + b == RatFun(x * x + y * y, x * y)
        assert (a - a).is_zero

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RatFun(R.gen("x"), R.zero)

    def test_evaluate_at_pole(self):
        with pytest.raises(ZeroDivisionError):
            RatFun(R.one, R.gen("x")).evaluate({"x": 0, "y": 1})


class TestMatrix:
    def test_determinant_and_charpoly(self):
        m = Matrix.from_rows([[2, 1], [1, 2]])
        assert m.det() == 3
        assert m.trace() == 4
        assert m.char_poly() == UPoly([3, -4, 1])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_cayley_hamilton(self, rows):
        m = Matrix.from_rows(rows, QQ)
        assert m.evaluate_poly(m.char_poly()).is_zero_matrix()
