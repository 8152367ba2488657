"""Generic fiber algebras, delta chains, the u*f factorization and the stratification."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

import qetale.parametric as parametric

from qetale.domains import RationalFunctionField
from qetale.exceptions import EmptyStratum, GenericFiberInfinite, PointNotInStratum, PreconditionError
from qetale.exprio import parse_poly, parse_system_file
from qetale.ideals import vanishes_on
from qetale.mpoly import PolyRing
from qetale.parametric import (
    ExcludedLocus,
    ParamSystem,
    Stratum,
    constancy_check,
    delta_chain,
    etale_certificate,
    evaluate_upoly,
    factor_uf,
    generic_basis,
    parametric_charpoly,
    parametric_rur,
    sample_points,
    specialized_fiber_count,
    split_on_failure,
    stratify,
)
from qetale.ratfun import RatFun
from qetale.upoly import UPoly

PQ = PolyRing(["p", "q"])


def P(text: str, ring: PolyRing = PQ):
    return parse_poly(text, ring)


@pytest.fixture
def cubic_ps(cubic):
    return ParamSystem.from_system_file(cubic)


@pytest.fixture
def cubic_report(cubic_ps):
    return stratify(cubic_ps)


class TestGenericBasis:
    def test_cubic_over_its_discriminant(self, cubic_ps):
        basis = generic_basis(cubic_ps, cubic_ps.base)
        assert basis.rank == 3
        assert basis.h == PQ.one
        assert basis.h_factors == ()

    def test_torus_inverts_x_minus_one(self, torus):
        ps = ParamSystem.from_system_file(torus)
        basis = generic_basis(ps, ps.base)
        assert basis.rank == 2
        assert basis.h == parse_poly("x - 1", PolyRing(["x", "y"]))
        assert basis.h_factors == (basis.h,)

    def test_hyperbola_inverts_x(self, hyperbola_origin):
        ps = ParamSystem.from_system_file(hyperbola_origin)
        basis = generic_basis(ps, ())
        assert basis.rank == 1
        assert basis.h == PolyRing(["x"]).gen("x")

    def test_empty_locus(self, cubic_ps):
        with pytest.raises(EmptyStratum):
            generic_basis(cubic_ps, [P("p"), P("q")], P("p"))

    def test_positive_dimensional_generic_fiber(self):
        sf = parse_system_file("params: t\nvars: x, y\nsystem:\n  x*y - t\n")
        with pytest.raises(GenericFiberInfinite):
            generic_basis(ParamSystem.from_system_file(sf), ())

    def test_charpoly_of_the_cubic(self, cubic_ps):
        basis = generic_basis(cubic_ps, cubic_ps.base)
        chi = parametric_charpoly(PolyRing(["x"]).gen("x"), basis)
        fld = basis.field
        assert chi == UPoly([RatFun(P("q")), RatFun(P("p")), fld.zero, fld.one], fld)


class TestDeltaChain:
    def test_plain_cubic(self):
        fld = RationalFunctionField(PQ)
        chi = UPoly([RatFun(P("q")), RatFun(P("p")), fld.zero, fld.one], fld)
        deltas = delta_chain(chi)
        assert deltas == [RatFun(P("4*p^3 + 27*q^2")), RatFun(P("6*p")), RatFun(PQ.constant(3))]

    def test_on_the_discriminant_curve(self, cubic_report, cubic_ps):
        chart = cubic_report.strata[0]
        deltas = delta_chain(chart.chi)
        assert deltas[0].is_zero
        assert vanishes_on(P("4*p^3 + 27*q^2"), cubic_ps.base)
        assert not vanishes_on(deltas[1].num, cubic_ps.base)

    def test_rejects_constants(self):
        fld = RationalFunctionField(PQ)
        with pytest.raises(PreconditionError):
            delta_chain(UPoly([fld.one], fld))


class TestCubic:
    def test_two_charts(self, cubic_report):
        generic, origin = cubic_report.strata
        assert generic.rank == 3
        assert generic.s == 1
        assert generic.geo_count == 2
        assert generic.nonvanish == P("p")
        assert origin.equations == (P("4*p^3 + 27*q^2"), P("p"))
        assert origin.geo_count == 1
        assert not cubic_report.excluded

    def test_no_merge_across_the_origin(self, cubic_report):
        counts = sorted(q.geo_count for q in cubic_report.qetale_strata)
        assert counts == [1, 2]

    def test_factorization(self, cubic_report):
        generic = cubic_report.strata[0]
        u, f = factor_uf(generic)
        assert (u.degree, f.degree) == (2, 1)
        assert u == generic.u
        assert f == generic.f

    def test_origin_local_form(self, cubic_report):
        origin = cubic_report.strata[1]
        fld = origin.u.domain
        assert origin.u == UPoly([fld.zero, fld.one], fld)
        assert origin.f == UPoly([fld.zero, fld.zero, fld.one], fld)

    def test_u_specializes_to_the_reduced_fiber(self, cubic_report):
        generic = cubic_report.strata[0]
        assert evaluate_upoly(generic.u, {"p": -3, "q": 2}) == UPoly([-2, 1, 1])

    def test_u_has_a_pole_at_the_origin(self, cubic_report):
        with pytest.raises(PointNotInStratum):
            evaluate_upoly(cubic_report.strata[0].u, {"p": 0, "q": 0})

    def test_every_chart_is_etale(self, cubic_report):
        assert all(etale_certificate(st) for st in cubic_report.strata)

    def test_rur_recomputes(self, cubic_report, cubic_ps):
        generic = cubic_report.strata[0]
        rur = parametric_rur(generic, cubic_ps)
        assert rur.geo_count == generic.geo_count == 2

    def test_locate(self, cubic_report):
        assert cubic_report.locate({"p": -3, "q": 2}).geo_count == 2
        assert cubic_report.locate({"p": 0, "q": 0}).geo_count == 1
        with pytest.raises(PointNotInStratum):
            cubic_report.locate({"p": 1, "q": 1})

    def test_check_point_names_the_condition(self, cubic_report):
        with pytest.raises(PointNotInStratum, match="nonvanish"):
            cubic_report.strata[0].check_point({"p": 0, "q": 0})

    def test_constancy_on_samples(self, cubic_report, cubic_ps):
        generic = cubic_report.strata[0]
        samples = sample_points(generic, 3, params=cubic_ps.params)
        assert len(samples) == 3
        assert all(generic.contains(s) for s in samples)
        report = constancy_check(generic, cubic_ps, samples)
        assert report.ok

    def test_forced_sample_at_the_origin(self, cubic_report, cubic_ps):
        origin = cubic_report.strata[1]
        assert sample_points(origin, 3, params=cubic_ps.params) == [{"p": Fraction(0), "q": Fraction(0)}]

    def test_specialized_counts(self, cubic_ps):
        assert specialized_fiber_count(cubic_ps, {"p": -3, "q": 2}) == 2
        assert specialized_fiber_count(cubic_ps, {"p": 0, "q": 0}) == 1

    def test_covering(self, cubic_report):
        points = [{"p": -3, "q": 2}, {"p": -3, "q": -2}, {"p": 0, "q": 0}, {"p": Fraction(-3, 4), "q": Fraction(1, 4)}]
        assert cubic_report.check_covering(points).ok


class TestOtherSystems:
    def test_torus_is_one_qetale_stratum(self, torus):
        report = stratify(ParamSystem.from_system_file(torus))
        assert len(report.qetale_strata) == 1
        merged = report.qetale_strata[0]
        assert merged.geo_count == 2
        assert len(merged.charts) == len(report.strata)
        for point in ({"x": 1, "y": 0}, {"x": -1, "y": 0}, {"x": Fraction(3, 5), "y": Fraction(4, 5)}):
            assert report.locate_qetale(point) is merged

    def test_twin_parabolas_jump_at_the_origin(self, twin_parabolas):
        report = stratify(ParamSystem.from_system_file(twin_parabolas))
        assert sorted(st.geo_count for st in report.strata) == [2, 3, 4]
        assert report.locate({"x": 1}).geo_count == 4
        assert report.locate({"x": -1}).geo_count == 4
        assert report.locate({"x": 0}).geo_count == 2
        assert report.check_covering([{"x": Fraction(k)} for k in range(-3, 4)]).ok

    def test_hyperbola_with_origin_isolates_the_origin(self, hyperbola_origin):
        report = stratify(ParamSystem.from_system_file(hyperbola_origin))
        assert len(report.qetale_strata) == 2
        off, on = report.locate({"x": 1}), report.locate({"x": 0})
        assert off is not on
        assert off.geo_count == on.geo_count == 1
        assert not off.contains({"x": 0})

    def test_depth_limit_leaves_an_excluded_locus(self, twin_parabolas):
        report = stratify(ParamSystem.from_system_file(twin_parabolas), max_depth=1)
        assert [x.reason for x in report.excluded] == ["max-depth"]
        assert isinstance(report.locate({"x": 0}), ExcludedLocus)
        assert isinstance(report.locate({"x": 1}), Stratum)

    def test_max_depth_must_be_positive(self, cubic_ps):
        with pytest.raises(PreconditionError):
            stratify(cubic_ps, max_depth=0)


class TestParameterOnlyConstants:
    """A constant over Q(params) is invertible only off its own zero set."""

    def test_reduction_to_a_constant(self):
        ps = ParamSystem.from_system_file(parse_system_file("params: t\nvars: x\nsystem:\n  t*x^2 - 1\n  x - t\n"))
        basis = generic_basis(ps, ())
        assert basis.rank == 0
        assert basis.h == parse_poly("t^4 - t", ps.param_ring)
        report = stratify(ps)
        assert report.locate({"t": 2}).geo_count == 0
        at_one = report.locate({"t": 1})
        assert at_one.geo_count == specialized_fiber_count(ps, {"t": 1}) == 1
        assert constancy_check(at_one, ps, [{"t": Fraction(1)}]).ok

    def test_parameter_only_generator(self):
        ps = ParamSystem.from_system_file(parse_system_file("params: t\nvars: x\nsystem:\n  x^2 - 1\n  t\n"))
        report = stratify(ps)
        assert report.locate({"t": 3}).geo_count == 0
        assert report.locate({"t": 0}).geo_count == specialized_fiber_count(ps, {"t": 0}) == 2
        assert report.check_covering([{"t": Fraction(k)} for k in range(-2, 3)]).ok


class TestConstancySplits:
    def test_split_on_failure_picks_the_delta_factor(self, cubic_report, cubic_ps):
        widened = replace(cubic_report.strata[0], nonvanish=PQ.one)
        report = constancy_check(widened, cubic_ps, [{"p": Fraction(-3), "q": Fraction(2)}, {"p": Fraction(0), "q": Fraction(0)}])
        assert not report.ok
        assert report.failed_samples == [{"p": Fraction(0), "q": Fraction(0)}]
        assert report.chi_counts == (2, 1)
        assert split_on_failure(widened, report) == P("p")

    def test_nothing_to_split_when_every_sample_agrees(self, cubic_report, cubic_ps):
        generic = cubic_report.strata[0]
        report = constancy_check(generic, cubic_ps, [{"p": Fraction(-3), "q": Fraction(2)}])
        assert report.ok
        assert split_on_failure(generic, report) is None

    def test_stratify_cuts_off_failing_samples(self, cubic_ps, monkeypatch):
        emit = parametric._emit_chart

        def widened(ps, basis, node):
            chart, delta = emit(ps, basis, node)
            if node.depth == 0:
                return replace(chart, nonvanish=PQ.one), None
            return chart, delta

        monkeypatch.setattr(parametric, "_emit_chart", widened)
        report = stratify(cubic_ps)
        assert report.strata[0].nonvanish == P("p")
        assert report.locate({"p": -3, "q": 2}).geo_count == 2
        assert report.locate({"p": 0, "q": 0}).geo_count == 1
        assert not report.excluded
