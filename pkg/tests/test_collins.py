"""Projection sets, leading-coefficient strata and delineability probes."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qetale.collins import (
    Region,
    delineability_probe,
    parse_region,
    projection_set,
    real_root_count_at,
    single_poly_strata,
)
from qetale.domains import RationalFunctionField
from qetale.exceptions import PreconditionError, SampleNotInRegion, SystemFileError
from qetale.exprio import parse_poly
from qetale.mpoly import PolyRing
from qetale.parametric import delta_chain
from qetale.ratfun import RatFun
from qetale.upoly import UPoly

PQX = PolyRing(["p", "q", "x"])
PQ = PolyRing(["p", "q"])

CUBIC = parse_poly("x^3 + p*x + q", PQX)


def at(p, q):
    return {"p": Fraction(p), "q": Fraction(q)}


class TestProjection:
    def test_cubic(self):
        proj = projection_set(CUBIC, "x")
        assert proj.ring == PQ
        assert len(proj.truncations) == 3
        assert proj.zero_coefficients == (2,)
        assert proj.subdiscs == tuple(parse_poly(t, PQ) for t in ("p", "4*p^3 + 27*q^2", "6*p", "3"))

    def test_full_truncation_matches_the_delta_chain(self):
        proj = projection_set(CUBIC, "x")
        last = len(proj.truncations) - 1
        full = [RatFun(c) for i, _, c in proj.table if i == last]
        fld = RationalFunctionField(PQ)
        chi = UPoly([RatFun(parse_poly("q", PQ)), RatFun(parse_poly("p", PQ)), fld.zero, fld.one], fld)
        assert full == delta_chain(chi)

    def test_linear_truncation_contributes_its_leading_coefficient(self):
        proj = projection_set(CUBIC, "x")
        assert (1, 0, parse_poly("p", PQ)) in proj.table

    def test_polynomials_drop_only_exact_repeats(self):
        polys = projection_set(CUBIC, "x").polynomials
        assert len(polys) == len(set(polys))
        assert parse_poly("p", PQ) in polys
        assert parse_poly("6*p", PQ) in polys


class TestCoefficientStrata:
    def test_monic_cubic(self):
        strata = single_poly_strata(CUBIC, "x")
        assert [s.index for s in strata] == [0, 1, 2, 3, 4]
        assert [s.degree for s in strata] == [3, 2, 1, 0, -1]
        assert [s.empty for s in strata] == [False, True, True, True, True]
        assert strata[-1].cylinder
        assert not any(s.cylinder for s in strata[:-1])

    def test_non_monic_quadratic(self):
        a = parse_poly("p*x^2 + q*x + 1", PQX)
        strata = single_poly_strata(a, "x")
        assert [s.empty for s in strata] == [False, False, False, True]
        assert strata[1].equations == (parse_poly("p", PQ),)
        assert strata[1].nonvanish == parse_poly("q", PQ)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-2, 2), st.integers(-2, 2))
    def test_strata_partition_the_parameter_space(self, p, q):
        a = parse_poly("p*x^2 + q*x + p - q", PQX)
        strata = single_poly_strata(a, "x")
        holding = [s.index for s in strata if s.contains(at(p, q))]
        assert len(holding) == 1
        assert not strata[holding[0]].empty
        assert strata[holding[0]].cylinder == (p == q == 0)


class TestRegion:
    def test_parse_and_check(self):
        region = parse_region("4*p^3 + 27*q^2 < 0; p < 0", PQ)
        assert len(region.signs) == 2
        region.check(at(-3, 1))
        with pytest.raises(SampleNotInRegion, match="sign"):
            region.check(at(1, 0))

    def test_equations(self):
        region = parse_region("q = 0", PQ)
        region.check(at(5, 0))
        with pytest.raises(SampleNotInRegion, match="equation"):
            region.check(at(0, 1))

    @pytest.mark.parametrize("text", ["p <= 0", "p != 0", "p"], ids=["le", "ne", "no-relation"])
    def test_unsupported(self, text):
        with pytest.raises(SystemFileError):
            parse_region(text, PQ)


class TestProbe:
    def test_three_real_roots(self):
        region = parse_region("4*p^3 + 27*q^2 < 0; p < 0", PQ)
        report = delineability_probe(CUBIC, "x", region, [at(-3, 1), at(-4, 1)])
        assert report.status == "delineable"
        assert report.count == 3
        assert "sampling evidence" in report.message

    def test_one_real_root(self):
        region = parse_region("4*p^3 + 27*q^2 > 0; p < 0", PQ)
        report = delineability_probe(CUBIC, "x", region, [at(-1, 1), at(-1, 2)])
        assert report.status == "delineable"
        assert report.counts == (1, 1)

    def test_samples_across_the_discriminant(self):
        report = delineability_probe(CUBIC, "x", Region(), [at(-3, 1), at(-1, 1)])
        assert report.status == "not one sign cell"
        assert report.count is None
        assert report.message.startswith("samples not in one sign cell")

    def test_sample_outside_the_region(self):
        region = parse_region("p < 0", PQ)
        with pytest.raises(SampleNotInRegion):
            delineability_probe(CUBIC, "x", region, [at(-1, 0), at(2, 0)])

    def test_needs_samples(self):
        with pytest.raises(PreconditionError):
            delineability_probe(CUBIC, "x", Region(), [])


def test_real_root_count_at():
    a = parse_poly("p*x^2 + q", PQX)
    assert real_root_count_at(a, "x", at(1, -1)) == 2
    assert real_root_count_at(a, "x", at(1, 1)) == 0
    assert real_root_count_at(a, "x", at(0, 0)) is None
