"""Groebner bases, quotient algebras and rational univariate representations over Q."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import groebner as sympy_groebner
from sympy import symbols

from qetale.config import Settings, use_settings
from qetale.exceptions import NotZeroDimensional, PreconditionError, ResourceLimitExceeded
from qetale.exprio import parse_poly
from qetale.mpoly import PolyRing
from qetale.rur import candidate_family, rur_build, rur_numerator, select_separating, verify_rur
from qetale.sympy_bridge import from_sympy, to_sympy
from qetale.upoly import UPoly, poly_from_roots
from qetale.zerodim import buchberger, char_poly, fiber_summary, mult_matrix, quotient_basis, trace_det

XY = PolyRing(["x", "y"])


def system(*texts: str, ring: PolyRing = XY):
    return [parse_poly(t, ring) for t in texts]


SPLIT_SYSTEMS = {
    # name: (generators, points with multiplicity)
    "two-lines": (("x^2 - 1", "y - x"), [((1, 1), 1), ((-1, -1), 1)]),
    "grid": (("x^2 - x", "y^2 - 4"), [((0, 2), 1), ((0, -2), 1), ((1, 2), 1), ((1, -2), 1)]),
    "double-point": (("x^2", "y - 1"), [((0, 1), 2)]),
    "tangent": (("y - x^2", "y"), [((0, 0), 2)]),
}


class TestGroebner:
    @pytest.mark.parametrize(
        "gens",
        [
            ("x^2 + y^2 - 1", "x - y"),
            ("x*y - 1", "x^2 - y"),
            ("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"),
            ("x^2 - 1", "y^2 - 1", "x*y - 1"),
        ],
        ids=["circle-line", "hyperbola-parabola", "cubic-pair", "redundant"],
    )
    def test_matches_sympy(self, gens):
        gb = buchberger(system(*gens), XY)
        x, y = symbols("x y")
        expected = sympy_groebner([to_sympy(p).as_expr() for p in system(*gens)], x, y, order="grevlex")
        theirs = sorted(str(from_sympy(p, XY).monic()) for p in expected.polys)
        ours = sorted(str(g) for g in gb.generators)
        assert ours == theirs

    def test_unit_ideal(self):
        gb = buchberger(system("x*y - 1", "x"), XY)
        assert gb.is_unit
        assert quotient_basis(gb).dim == 0

    def test_positive_dimension(self):
        with pytest.raises(NotZeroDimensional):
            quotient_basis(buchberger(system("x*y - 1"), XY))

    def test_pair_limit(self):
        with use_settings(Settings(spair_limit=1)):
            with pytest.raises(ResourceLimitExceeded):
                buchberger(system("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"), XY)

    def test_contains(self):
        gb = buchberger(system("x^2 - 1", "y - x"), XY)
        assert gb.contains(parse_poly("y^2 - 1", XY))
        assert not gb.contains(parse_poly("y - 1", XY))


class TestQuotient:
    def test_standard_monomials(self):
        gb = buchberger(system("x^2 - x", "y^2 - 4"), XY)
        qb = quotient_basis(gb)
        assert qb.dim == 4
        assert set(qb.monomials) == {(0, 0), (1, 0), (0, 1), (1, 1)}

    @pytest.mark.parametrize("name", sorted(SPLIT_SYSTEMS))
    def test_stickelberger(self, name):
        gens, points = SPLIT_SYSTEMS[name]
        gb = buchberger(system(*gens), XY)
        qb = quotient_basis(gb)
        sigma = parse_poly("x + 3*y", XY)
        values = [(Fraction(px) + 3 * Fraction(py), mu) for (px, py), mu in points]
        trace, det = trace_det(sigma, gb, qb)
        assert trace == sum(v * mu for v, mu in values)
        expected_det = Fraction(1)
        for v, mu in values:
            expected_det *= v**mu
        assert det == expected_det
        roots = [v for v, mu in values for _ in range(mu)]
        assert char_poly(mult_matrix(sigma, gb, qb)) == poly_from_roots(roots)

    @pytest.mark.parametrize("name", sorted(SPLIT_SYSTEMS))
    def test_cayley_hamilton(self, name):
        gens, _ = SPLIT_SYSTEMS[name]
        gb = buchberger(system(*gens), XY)
        m = mult_matrix(parse_poly("x - 2*y", XY), gb, quotient_basis(gb))
        assert m.evaluate_poly(m.char_poly()).is_zero_matrix()

    def test_fiber_summary_multiplicities(self):
        gb = buchberger(system("x^2", "y - 1"), XY)
        summary = fiber_summary(gb, parse_poly("x", XY))
        assert summary.geo_count == 1
        assert summary.multiplicities == ((UPoly([0, 1]), 2),)


class TestRur:
    def test_candidate_family_size(self):
        family = candidate_family(3, 4)
        assert len(family) == 2 * 6 + 1
        assert str(family[2]) == "x1 + 2*x2 + 4*x3"

    def test_separating_element_prefers_smallest_index(self):
        gb = buchberger(system("x^2 - 1", "y - 2"), XY)
        sigma, summary = select_separating(gb)
        assert str(sigma) == "x"
        assert summary.geo_count == 2

    def test_non_separating_first_candidate_is_skipped(self):
        gb = buchberger(system("x^2 - x", "y^2 - y", "x*y"), XY)
        sigma, summary = select_separating(gb)
        assert summary.geo_count == 3
        assert str(sigma) == "x + 2*y"

    @pytest.mark.parametrize(
        "gens",
        [
            ("x^2 + y^2 - 5", "x*y - 2"),
            ("x^2 - 2", "y^2 - 3"),
            ("x^3 - 3*x + 2", "y - x^2"),
            ("y^2 - x^2 - 1", "x"),
        ],
        ids=["circle-hyperbola", "two-radicals", "double-root", "axis"],
    )
    def test_back_substitution(self, gens):
        polys = system(*gens)
        rur = rur_build(buchberger(polys, XY), polys)
        verify_rur(rur, polys)
        assert rur.u.is_monic()
        assert rur.u.gcd(rur.u.derivative()).degree == 0

    @pytest.mark.parametrize(
        "gens,count",
        [(("x^2 - 2",), 2), (("(x - 1)*(x - 2)*(x - 3)",), 3), (("x^3 - 3*x + 2",), 2)],
        ids=["sqrt-two", "three-roots", "double-root"],
    )
    def test_univariate(self, gens, count):
        ring = PolyRing(["x"])
        polys = system(*gens, ring=ring)
        rur = rur_build(buchberger(polys, ring), polys)
        assert rur.geo_count == count
        assert rur.u.gcd(rur.g).degree == 0

    def test_numerators_of_sqrt_two(self):
        ring = PolyRing(["x"])
        x = ring.gen("x")
        gb = buchberger(system("x^2 - 2", ring=ring), ring)
        qb = quotient_basis(gb)
        u = UPoly([-2, 0, 1])
        assert rur_numerator(ring.one, x, u, gb, qb) == UPoly([0, 2])
        assert rur_numerator(x, x, u, gb, qb) == UPoly([4])
        rur = rur_build(gb)
        assert (rur.g, rur.numerators) == (UPoly([0, 2]), (UPoly([4]),))

    def test_numerators_of_a_single_point(self):
        ring = PolyRing(["x"])
        x = ring.gen("x")
        gb = buchberger(system("x - 3", ring=ring), ring)
        u = UPoly([-3, 1])
        assert rur_numerator(ring.one, x, u, gb, quotient_basis(gb)) == UPoly([1])
        assert rur_numerator(x, x, u, gb, quotient_basis(gb)) == UPoly([3])

    def test_double_root_fiber(self):
        polys = system("x^3 - 3*x + 2", "y - x^2")
        rur = rur_build(buchberger(polys, XY), polys)
        assert rur.geo_count == 2

    def test_unit_ideal_has_no_rur(self):
        with pytest.raises(PreconditionError):
            rur_build(buchberger(system("x", "x - 1"), XY))


linear_terms = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


def _shifted_squares(ring: PolyRing, cx, cy, extra) -> list:
    x, y = ring.gen("x"), ring.gen("y")
    gens = [x**2 + cx[0] * x + cx[1] * y + cx[2], y**2 + cy[0] * x + cy[1] * y + cy[2]]
    if extra is not None:
        gens.append(extra[0] * x * y + extra[1] * x + extra[2])
    return gens


@st.composite
def point_sets(draw):
    xs = draw(st.lists(st.integers(-4, 4), min_size=1, max_size=4, unique=True))
    ys = draw(st.lists(st.integers(-4, 4), min_size=len(xs), max_size=len(xs)))
    return list(zip(xs, ys))


def interpolating_ideal(points) -> list:
    """Generators vanishing exactly on ``points``: the x-coordinates and y written as a function of x."""
    x, y = XY.gen("x"), XY.gen("y")
    vanish = XY.one
    through = XY.zero
    for i, (a, b) in enumerate(points):
        vanish = vanish * (x - a)
        basis = XY.constant(b)
        for j, (c, _) in enumerate(points):
            if j != i:
                basis = basis * (x - c) * Fraction(1, a - c)
        through = through + basis
    return [vanish, y - through]


class TestRandomIdeals:
    @settings(max_examples=50, deadline=None)
    @given(linear_terms, linear_terms, st.none() | linear_terms)
    def test_dimension_does_not_depend_on_the_order(self, cx, cy, extra):
        lex = XY.with_order("lex")
        grevlex_dim = quotient_basis(buchberger(_shifted_squares(XY, cx, cy, extra), XY)).dim
        lex_dim = quotient_basis(buchberger(_shifted_squares(lex, cx, cy, extra), lex)).dim
        assert grevlex_dim == lex_dim <= 4

    @settings(max_examples=20, deadline=None)
    @given(point_sets())
    def test_rur_recovers_the_points(self, points):
        gens = interpolating_ideal(points)
        rur = rur_build(buchberger(gens, XY), gens)
        verify_rur(rur, gens)
        assert rur.geo_count == len(points)
        for a, b in points:
            lam = rur.sigma.evaluate({"x": Fraction(a), "y": Fraction(b)})
            assert rur.u.evaluate(lam) == 0
            g = rur.g.evaluate(lam)
            assert rur.numerator("x").evaluate(lam) / g == a
            assert rur.numerator("y").evaluate(lam) / g == b

    @settings(max_examples=20, deadline=None)
    @given(point_sets(), st.randoms(use_true_random=False))
    def test_separating_choice_ignores_generator_order(self, points, rnd):
        gens = interpolating_ideal(points)
        shuffled = gens + [gens[0] * XY.gen("y")]
        rnd.shuffle(shuffled)
        sigma, summary = select_separating(buchberger(gens, XY))
        sigma_shuffled, summary_shuffled = select_separating(buchberger(shuffled, XY))
        assert sigma == sigma_shuffled
        assert summary.geo_count == summary_shuffled.geo_count == len(points)
        assert summary.sqfree == summary_shuffled.sqfree
