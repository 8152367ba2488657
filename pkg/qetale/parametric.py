"""Parametric systems: generic fiber algebras, delta chains and the q-etale stratification.

A recursion node is a locally closed set ``V(E) \\ V(outer)`` of the
parameter space. At each node the system is solved over the fraction field of
``Q[params]/E`` (zero tests are radical membership on the node locus), giving
a monomial basis that stays valid where the inverted leading coefficients
``h`` are nonzero. On that open part the delta chain of a separating
element's characteristic polynomial fixes the geometric fiber count; the loci
where ``h`` or the first nonvanishing delta coefficient vanish are handled by
child nodes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from qetale.config import get_settings
from qetale.domains import RationalFunctionField
from qetale.exceptions import (
    EmptyStratum,
    GenericFiberInfinite,
    InvariantViolation,
    NotZeroDimensional,
    PointNotInStratum,
    PreconditionError,
)
from qetale.exprio import SystemFile, split_upoly
from qetale.gcd import mv_gcd, squarefree_part
from qetale.ideals import groebner, radical_member, regular_on, vanishes_on
from qetale.logger import get_logger
from qetale.matrix import Matrix
from qetale.mpoly import MPoly, PolyRing
from qetale.ratfun import RatFun
from qetale.rur import (
    RUR,
    back_substitute,
    candidate_family,
    candidate_weights,
    combine_matrices,
    lagrange_numerator,
    power_table,
    select_separating,
    trace_of_product,
)
from qetale.subresultant import SresChain, sres_chain
from qetale.sympy_bridge import rational_roots
from qetale.upoly import UPoly
from qetale.zerodim import GroebnerBasis, QuotientBasis, buchberger, char_poly, mult_matrix, normal_form, quotient_basis

logger = get_logger(__name__)

Point = Mapping[str, Fraction]


@dataclass(frozen=True)
class ParamSystem:
    """Parameters, fiber variables, base equations and the system ideal."""

    params: Tuple[str, ...]
    vars: Tuple[str, ...]
    base: Tuple[MPoly, ...]
    system: Tuple[MPoly, ...]

    @classmethod
    def from_system_file(cls, sf: SystemFile) -> "ParamSystem":
        return cls(sf.params, sf.vars, sf.base, sf.system)

    @property
    def param_ring(self) -> PolyRing:
        return PolyRing(self.params)

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.params + self.vars)

    @property
    def var_ring(self) -> PolyRing:
        return PolyRing(self.vars)


def _evaluate_all(polys: Sequence[MPoly], point: Point) -> List[Fraction]:
    return [Fraction(p.evaluate(point)) for p in polys]


class Locus:
    """Mixin for pieces described by ``equations`` and one ``nonvanish`` polynomial."""

    equations: Tuple[MPoly, ...]
    nonvanish: MPoly

    def check_point(self, point: Point) -> None:
        """Raise :class:`PointNotInStratum` naming the failed condition."""
        for eq, value in zip(self.equations, _evaluate_all(self.equations, point)):
            if value != 0:
                raise PointNotInStratum(f"equation {eq} evaluates to {value} at {_show(point)}")
        if Fraction(self.nonvanish.evaluate(point)) == 0:
            raise PointNotInStratum(f"nonvanish polynomial {self.nonvanish} is zero at {_show(point)}")

    def contains(self, point: Point) -> bool:
        try:
            self.check_point(point)
        except PointNotInStratum:
            return False
        return True


def _show(point: Point) -> str:
    return ",".join(f"{k}={v}" for k, v in point.items())


@dataclass(frozen=True)
class Stratum(Locus):
    """One chart of the stratification: constant rank, separating element and local form."""

    equations: Tuple[MPoly, ...]
    nonvanish: MPoly
    rank: int
    sigma: Optional[MPoly]
    chi: UPoly
    deltas: Tuple[RatFun, ...]
    s: int
    geo_count: int
    u: UPoly
    f: UPoly
    rur: Optional[RUR]
    depth: int
    etale: bool
    traces: Tuple[RatFun, ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class ExcludedLocus(Locus):
    """A locus the stratification could not finish."""

    equations: Tuple[MPoly, ...]
    nonvanish: MPoly
    reason: str
    depth: int


@dataclass(frozen=True)
class QEtaleStratum(Locus):
    """Charts whose union has constant geometric count and one regular family of data."""

    equations: Tuple[MPoly, ...]
    nonvanish: MPoly
    geo_count: int
    charts: Tuple[Stratum, ...]


@dataclass(frozen=True)
class CoveringReport:
    ok: bool
    checked: int
    failures: Tuple[str, ...] = ()


@dataclass(frozen=True)
class StratificationReport:
    """Charts, merged q-etale strata and excluded loci covering the base."""

    system: ParamSystem
    strata: Tuple[Stratum, ...]
    qetale_strata: Tuple[QEtaleStratum, ...]
    excluded: Tuple[ExcludedLocus, ...]
    depth: int

    def pieces(self) -> List[Locus]:
        return list(self.strata) + list(self.excluded)

    def locate(self, point: Point) -> Locus:
        """Return the unique chart or excluded locus containing ``point``.

        Raises:
            PointNotInStratum: If the point is off the base or in no piece.
            InvariantViolation: If the point lies in more than one piece.
        """
        base = list(self.system.base)
        for eq, value in zip(base, _evaluate_all(base, point)):
            if value != 0:
                raise PointNotInStratum(f"base equation {eq} evaluates to {value} at {_show(point)}")
        hits = [p for p in self.pieces() if p.contains(point)]
        if not hits:
            raise PointNotInStratum(f"no stratum contains {_show(point)}")
        if len(hits) > 1:
            raise InvariantViolation(f"{len(hits)} strata contain {_show(point)}")
        return hits[0]

    def locate_qetale(self, point: Point) -> QEtaleStratum:
        hits = [q for q in self.qetale_strata if q.contains(point)]
        if len(hits) != 1:
            raise PointNotInStratum(f"{len(hits)} q-etale strata contain {_show(point)}")
        return hits[0]

    def check_covering(self, points: Sequence[Point]) -> CoveringReport:
        """Every point on the base must lie in exactly one piece."""
        failures = []
        for point in points:
            hits = sum(1 for p in self.pieces() if p.contains(point))
            if hits != 1:
                failures.append(f"{_show(point)} lies in {hits} pieces")
        return CoveringReport(not failures, len(points), tuple(failures))


# -- generic fiber ------------------------------------------------------------


@dataclass(frozen=True)
class GenericBasis:
    """The fiber algebra over the fraction field of a node."""

    field: RationalFunctionField
    fiber_ring: PolyRing
    gb: GroebnerBasis
    qb: QuotientBasis
    coords: Tuple[Matrix, ...]
    h: MPoly
    h_factors: Tuple[MPoly, ...]

    @property
    def rank(self) -> int:
        return self.qb.dim

    def table(self, sigma: MPoly) -> Matrix:
        """Multiplication matrix of a fiber-ring element."""
        return mult_matrix(sigma, self.gb, self.qb)


def to_fiber(f: MPoly, params: PolyRing, fiber_ring: PolyRing) -> MPoly:
    """Rewrite ``f`` in ``params + vars`` as a polynomial in the vars over ``Frac(params)``."""
    dom: RationalFunctionField = fiber_ring.domain
    src = f.ring
    slots = []
    for name in src.gens:
        if name in params.gens:
            slots.append((0, params.index(name)))
        else:
            slots.append((1, fiber_ring.index(name)))
    buckets: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]] = {}
    for m, c in f.terms.items():
        pm = [0] * params.nvars
        vm = [0] * fiber_ring.nvars
        for (kind, pos), e in zip(slots, m):
            if e:
                (pm if kind == 0 else vm)[pos] = e
        buckets.setdefault(tuple(vm), {})[tuple(pm)] = c
    terms = {}
    for vm, pterms in buckets.items():
        coeff = dom.canonical(RatFun(MPoly(params, pterms)))
        if not coeff.is_zero:
            terms[vm] = coeff
    return MPoly(fiber_ring, terms)


def _modulus_nf(f: MPoly, equations: Sequence[MPoly]) -> MPoly:
    if not equations:
        return f
    return normal_form(f, groebner(list(equations), f.ring).generators)


def generic_basis(
    ps: ParamSystem,
    equations: Sequence[MPoly],
    avoid: Optional[MPoly] = None,
) -> GenericBasis:
    """Groebner basis of the system over the fraction field of ``Q[params]/equations``.

    ``h`` is the square-free part of the product of the inverted leading
    coefficients, counting a constant that turned the ideal into the unit
    ideal. The returned monomial basis is a basis of every fiber where ``h``
    and ``avoid`` do not vanish.

    Raises:
        EmptyStratum: If the equations have no common zero off ``V(avoid)``.
        GenericFiberInfinite: If the generic fiber is not finite.
    """
    params = ps.param_ring
    avoid = params.one if avoid is None else avoid
    equations = tuple(e.set_ring(params) for e in equations)
    if radical_member(avoid, equations) if equations else avoid.is_zero:
        raise EmptyStratum("the node locus is empty")
    fld = RationalFunctionField(params, equations, avoid)
    fiber_ring = PolyRing(ps.vars, "grevlex", fld)
    system = [to_fiber(F, params, fiber_ring) for F in ps.system]
    gb = buchberger(system, fiber_ring)

    factors: List[MPoly] = []
    for pivot in gb.pivots:
        num = _modulus_nf(pivot.num, equations)
        if num.is_constant():
            continue
        fac = squarefree_part(num)
        if fac not in factors:
            factors.append(fac)
    h = params.one
    for fac in factors:
        h = h * fac
    h = squarefree_part(h)

    if gb.is_unit:
        qb = QuotientBasis(())
    else:
        try:
            qb = quotient_basis(gb)
        except NotZeroDimensional as exc:
            raise GenericFiberInfinite(str(exc)) from exc
    coords = tuple(mult_matrix(fiber_ring.gen(name), gb, qb) for name in ps.vars) if qb.dim else ()
    return GenericBasis(fld, fiber_ring, gb, qb, coords, h, tuple(factors))


def parametric_charpoly(sigma: MPoly, basis: GenericBasis) -> UPoly:
    """``det(lam*I - L_sigma)`` over the node's fraction field."""
    sigma = to_fiber(sigma, basis.field.ring, basis.fiber_ring) if sigma.ring != basis.fiber_ring else sigma
    return char_poly(basis.table(sigma))


def _cleared_chain(chi: UPoly) -> Tuple[SresChain, MPoly]:
    """Subresultant chain of ``(D*chi, D*chi')`` over ``Q[params]`` and the cleared denominator ``D``."""
    num, den = split_upoly(chi)
    return sres_chain(num, num.derivative()), den


def delta_chain(chi: UPoly) -> List[RatFun]:
    """Principal subresultant coefficients ``Delta_j`` of ``(chi, chi')`` for ``j < deg chi``.

    Raises:
        PreconditionError: If ``chi`` has degree below 1.
    """
    if chi.degree < 1:
        raise PreconditionError("delta chain needs a characteristic polynomial of degree >= 1")
    chain, den = _cleared_chain(chi)
    r = chi.degree
    dom = chi.domain
    return [dom.canonical(RatFun(c, den ** (2 * r - 1 - 2 * j))) for j, c in enumerate(chain.coeffs)]


def _first_nonvanishing(coeffs: Sequence[MPoly], equations: Sequence[MPoly], avoid: MPoly) -> int:
    for j, c in enumerate(coeffs):
        if not vanishes_on(c, equations, avoid):
            return j
    return len(coeffs)


@dataclass(frozen=True)
class _Choice:
    index: int
    sigma: MPoly
    table: Matrix
    chi: UPoly
    chain: SresChain
    den: MPoly
    s: int


def _choose_sigma(ps: ParamSystem, basis: GenericBasis, equations: Sequence[MPoly], avoid: MPoly) -> _Choice:
    """Argmax of ``r - s`` over the candidate family, smallest index on ties."""
    r = basis.rank
    best: Optional[_Choice] = None
    display = candidate_family(ps.var_ring, r)
    for i, sigma in enumerate(display):
        table = combine_matrices(candidate_weights(len(ps.vars), i), basis.coords)
        chi = char_poly(table)
        chain, den = _cleared_chain(chi)
        s = _first_nonvanishing(chain.coeffs, equations, avoid)
        if s >= r:
            raise InvariantViolation("the last delta coefficient vanishes on a nonempty locus")
        if best is None or s < best.s:
            best = _Choice(i, sigma, table, chi, chain, den, s)
        if s == 0:
            break
    assert best is not None
    return best


def _strip_common(delta: MPoly, factors: Sequence[MPoly]) -> MPoly:
    for fac in factors:
        while True:
            g = mv_gcd(delta, fac)
            if g.is_constant():
                break
            delta = delta.exact_divide(g)
    return delta.primitive()


def factor_uf(st: Stratum) -> Tuple[UPoly, UPoly]:
    """Recompute ``chi = u*f`` for a stratum; see :func:`_factor_uf`."""
    chain, _ = _cleared_chain(st.chi)
    return _factor_uf(st.chi, chain, st.s, st.equations, st.nonvanish)


def _factor_uf(
    chi: UPoly,
    chain: SresChain,
    s: int,
    equations: Sequence[MPoly],
    nonvanish: MPoly,
) -> Tuple[UPoly, UPoly]:
    """``f`` is the monic ``s``-th subresultant of ``(chi, chi')`` and ``u = chi // f``.

    Raises:
        InvariantViolation: If the division remainder does not vanish on the stratum.
    """
    kdom: RationalFunctionField = chi.domain
    plain = RationalFunctionField(kdom.ring)
    sres = chain.polys[s]
    f = UPoly([RatFun(c) for c in sres.coeffs], plain).monic()
    chi_plain = UPoly(chi.coeffs, plain)
    u, gamma = chi_plain.divmod(f)
    for c in gamma.coeffs:
        if not vanishes_on(c.num, equations, nonvanish):
            raise InvariantViolation(f"remainder coefficient {c} of chi / f does not vanish on the stratum")
    return UPoly(u.coeffs, kdom).canonical(), UPoly(f.coeffs, kdom).canonical()


def etale_certificate(st: Stratum) -> bool:
    """Whether ``Res(u, u')`` has no zero on the stratum."""
    u = st.u
    if u.degree < 1:
        return True
    num, _ = split_upoly(u)
    if num.degree == 1:
        return True
    res = sres_chain(num, num.derivative()).coeffs[0]
    return radical_member(st.nonvanish, list(st.equations) + [res])


def _rur_traces(table: Matrix, basis: GenericBasis) -> Tuple[List[Any], List[List[Any]]]:
    powers = power_table(table, basis.rank)
    plain = [p.trace() for p in powers]
    per_var = [[trace_of_product(lx, p) for p in powers] for lx in basis.coords]
    return plain, per_var


def _build_rur(
    ps: ParamSystem,
    basis: GenericBasis,
    sigma: MPoly,
    u: UPoly,
    plain: Sequence[Any],
    per_var: Sequence[Sequence[Any]],
    equations: Sequence[MPoly],
    nonvanish: MPoly,
) -> RUR:
    g = lagrange_numerator(plain, u) % u
    numerators = tuple((lagrange_numerator(t, u) % u).canonical() for t in per_var)
    rur = RUR(sigma, u, g.canonical(), numerators, ps.vars)
    names = dict(zip(ps.vars, numerators))
    for F in ps.system:
        rest = back_substitute(to_fiber(F, basis.field.ring, basis.fiber_ring), rur.g, names, u)
        for c in rest.coeffs:
            if not vanishes_on(c.num, equations, nonvanish):
                raise InvariantViolation(f"back-substitution of {F} leaves {c} on the stratum")
    return rur


def parametric_rur(st: Stratum, ps: ParamSystem) -> RUR:
    """Recompute the parametric RUR of a stratum from the system.

    Raises:
        InvariantViolation: If the back-substitution identity fails.
    """
    if st.sigma is None or st.rank == 0:
        raise PreconditionError("a stratum with empty fiber has no RUR")
    basis = generic_basis(ps, st.equations, st.nonvanish)
    weights = [int(st.sigma.terms.get(tuple(1 if k == j else 0 for k in range(len(ps.vars))), 0)) for j in range(len(ps.vars))]
    table = combine_matrices(weights, basis.coords)
    plain, per_var = _rur_traces(table, basis)
    u = UPoly(st.u.coeffs, basis.field)
    return _build_rur(ps, basis, st.sigma, u, plain, per_var, st.equations, st.nonvanish)


# -- stratification -----------------------------------------------------------


@dataclass
class _Node:
    equations: Tuple[MPoly, ...]
    outer: MPoly
    depth: int
    chart: Optional[Stratum] = None
    children: List["_Node"] = field(default_factory=list)
    excluded: Optional[ExcludedLocus] = None
    data: Tuple[Any, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.chart is None and self.excluded is None and not self.children

    def walk(self) -> Iterator["_Node"]:
        yield self
        for child in self.children:
            yield from child.walk()


def _empty_chart(ps: ParamSystem, basis: GenericBasis, node: _Node, nonvanish: MPoly) -> Stratum:
    one = UPoly([basis.field.one], basis.field)
    return Stratum(node.equations, nonvanish, 0, None, one, (), 0, 0, one, one, None, node.depth, True)


def _emit_chart(ps: ParamSystem, basis: GenericBasis, node: _Node) -> Tuple[Optional[Stratum], Optional[MPoly]]:
    """Chart on ``h != 0`` and the polynomial cutting the c-branch."""
    params = ps.param_ring
    outer_h = (node.outer * basis.h).primitive()
    if radical_member(outer_h, node.equations) if node.equations else outer_h.is_zero:
        return None, None
    if basis.rank == 0:
        return _empty_chart(ps, basis, node, outer_h), None

    choice = _choose_sigma(ps, basis, node.equations, outer_h)
    r = basis.rank
    s = choice.s
    delta_num = _modulus_nf(choice.chain.coeffs[s], node.equations)
    delta = _strip_common(delta_num.primitive(), basis.h_factors) if not delta_num.is_constant() else params.one
    nonvanish = (outer_h * delta).primitive()
    deltas = tuple(
        basis.field.canonical(RatFun(c, choice.den ** (2 * r - 1 - 2 * j))) for j, c in enumerate(choice.chain.coeffs)
    )
    u, f = _factor_uf(choice.chi, choice.chain, s, node.equations, nonvanish)
    plain, per_var = _rur_traces(choice.table, basis)
    rur = _build_rur(ps, basis, choice.sigma, u, plain, per_var, node.equations, nonvanish)
    chart = Stratum(
        equations=node.equations,
        nonvanish=nonvanish,
        rank=r,
        sigma=choice.sigma,
        chi=choice.chi,
        deltas=deltas,
        s=s,
        geo_count=r - s,
        u=u,
        f=f,
        rur=rur,
        depth=node.depth,
        etale=False,
        traces=tuple(plain) + tuple(t for row in per_var for t in row),
    )
    chart = replace(chart, etale=etale_certificate(chart))
    if not chart.etale:
        raise InvariantViolation(f"stratum {nonvanish} != 0 fails the etale certificate")
    node.data = tuple(choice.chi.coeffs) + chart.traces
    return chart, (None if delta.is_constant() else delta)


def _visit(ps: ParamSystem, node: _Node, max_depth: int) -> None:
    if node.equations and radical_member(node.outer, node.equations):
        return
    if node.depth > max_depth:
        logger.info("depth limit reached at %s", _describe(node))
        node.excluded = ExcludedLocus(node.equations, node.outer, "max-depth", node.depth)
        return
    logger.info("node %s", _describe(node))
    try:
        basis = generic_basis(ps, node.equations, node.outer)
    except EmptyStratum:
        return
    except GenericFiberInfinite as exc:
        node.excluded = ExcludedLocus(node.equations, node.outer, f"generic fiber not finite: {exc}", node.depth)
        return

    chart, delta = _emit_chart(ps, basis, node)
    if chart is not None:
        chart = _settle(ps, node, chart, max_depth)
        node.chart = chart
        logger.info("stratum %s != 0: rank %d, geometric count %d", chart.nonvanish, chart.rank, chart.geo_count)
    outer_h = (node.outer * basis.h).primitive()
    if delta is not None:
        node.children.append(_Node(node.equations + (delta,), outer_h, node.depth + 1))
    acc = node.outer
    for fac in basis.h_factors:
        node.children.append(_Node(node.equations + (fac,), acc, node.depth + 1))
        acc = (acc * fac).primitive()
    for child in node.children:
        _visit(ps, child, max_depth)


def _settle(ps: ParamSystem, node: _Node, chart: Stratum, max_depth: int) -> Stratum:
    """Check the chart's count at sample points, cutting off loci where it fails.

    Each cut shrinks the chart's open set and becomes a child node.

    Raises:
        InvariantViolation: If a failure has no candidate locus to cut off.
    """
    for _ in range(max_depth):
        samples = sample_points(chart, params=ps.params)
        report = constancy_check(chart, ps, samples)
        if report.ok:
            return chart
        split = split_on_failure(chart, report)
        if split is None:
            raise InvariantViolation(f"stratum {chart.nonvanish} != 0: {report.describe()}")
        logger.warning("stratum %s != 0 fails at samples (%s); splitting on %s", chart.nonvanish, report.describe(), split)
        node.children.append(_Node(node.equations + (split,), chart.nonvanish, node.depth + 1))
        chart = replace(chart, nonvanish=(chart.nonvanish * split).primitive())
    raise InvariantViolation(f"stratum {chart.nonvanish} != 0 still fails after {max_depth} splits")


def _describe(node: _Node) -> str:
    eqs = ", ".join(str(e) for e in node.equations) or "-"
    return f"[{eqs}] \\ V({node.outer}) depth {node.depth}"


def _regular(node: _Node) -> bool:
    for value in node.data:
        if not regular_on(value.num, value.den, node.equations, node.outer):
            return False
    return True


def _merge(node: _Node) -> Tuple[Optional[QEtaleStratum], List[QEtaleStratum]]:
    """Merged stratum for ``node`` if its whole subtree qualifies, else the pieces below."""
    child_results = [_merge(c) for c in node.children if not c.is_empty]
    pieces: List[QEtaleStratum] = []
    for merged, parts in child_results:
        pieces.extend([merged] if merged is not None else parts)
    own = (
        QEtaleStratum(node.chart.equations, node.chart.nonvanish, node.chart.geo_count, (node.chart,))
        if node.chart is not None
        else None
    )
    if node.excluded is not None:
        return None, []
    if own is None:
        # the node's own open part is empty: its locus is the union of the children
        merged = [m for m, _ in child_results]
        if len(merged) == 1 and merged[0] is not None:
            return merged[0], []
        if merged and all(m is not None and m.geo_count == merged[0].geo_count for m in merged):
            charts = tuple(c for m in merged for c in m.charts)
            return QEtaleStratum(node.equations, node.outer, merged[0].geo_count, charts), []
        return None, pieces
    whole = all(m is not None for m, _ in child_results) and all(
        m.geo_count == own.geo_count for m, _ in child_results if m is not None
    )
    if whole and (not child_results or _regular(node)):
        charts = list(own.charts)
        for m, _ in child_results:
            charts.extend(m.charts)
        return QEtaleStratum(node.equations, node.outer, own.geo_count, tuple(charts)), []
    return None, [own] + pieces


def stratify(ps: ParamSystem, max_depth: Optional[int] = None) -> StratificationReport:
    """Stratify the base into charts of constant geometric fiber count.

    Pieces are listed depth first: a node's own chart, then the locus where
    its delta coefficient vanishes, then the loci where inverted leading
    coefficients vanish.

    Raises:
        PreconditionError: If ``max_depth < 1``.
    """
    max_depth = get_settings().max_depth if max_depth is None else max_depth
    if max_depth < 1:
        raise PreconditionError("max_depth must be at least 1")
    params = ps.param_ring
    root = _Node(tuple(b.set_ring(params) for b in ps.base), params.one, 0)
    _visit(ps, root, max_depth)

    strata = tuple(n.chart for n in root.walk() if n.chart is not None)
    excluded = tuple(n.excluded for n in root.walk() if n.excluded is not None)
    merged, parts = _merge(root)
    qetale = (merged,) if merged is not None else tuple(parts)
    depth = max((n.depth for n in root.walk() if not n.is_empty), default=0)
    return StratificationReport(ps, strata, qetale, excluded, depth)


# -- evaluation at points -------------------------------------------------------


def evaluate_upoly(f: UPoly, point: Point) -> UPoly:
    """Specialize a UPoly over a rational function field at a parameter point.

    Raises:
        PointNotInStratum: If a coefficient denominator vanishes at the point.
    """
    out = []
    for c in f.coeffs:
        try:
            out.append(c.evaluate(point))
        except ZeroDivisionError as exc:
            raise PointNotInStratum(str(exc)) from exc
    return UPoly(out)


def _rational_candidates(bound: int, rng: random.Random) -> List[Fraction]:
    by_height: Dict[int, List[Fraction]] = {}
    seen = set()
    for den in range(1, bound + 1):
        for num in range(-bound, bound + 1):
            v = Fraction(num, den)
            if v in seen:
                continue
            seen.add(v)
            by_height.setdefault(max(abs(v.numerator), v.denominator), []).append(v)
    out: List[Fraction] = []
    for height in sorted(by_height):
        group = sorted(by_height[height], key=lambda v: (abs(v), v < 0))
        if height > 2:
            rng.shuffle(group)
        out.extend(group)
    return out


def sample_points(
    piece: Locus,
    count: Optional[int] = None,
    *,
    seed: Optional[int] = None,
    bound: Optional[int] = None,
    params: Optional[Sequence[str]] = None,
    limit: int = 20000,
) -> List[Dict[str, Fraction]]:
    """Rational points of ``V(equations) \\ V(nonvanish)`` found by greedy probing.

    Parameters are assigned in order. A parameter is forced when a
    specialized equation involves only it; its rational roots are tried.
    Otherwise small rationals ``a/b`` with ``|a|, |b| <= bound`` are probed,
    smallest height first.
    """
    settings = get_settings()
    count = settings.samples_per_stratum if count is None else count
    bound = settings.probe_bound if bound is None else bound
    rng = random.Random(settings.seed if seed is None else seed)
    ring = piece.nonvanish.ring
    names = list(params) if params is not None else list(ring.gens)
    candidates = _rational_candidates(bound, rng)
    equations = [e.set_ring(ring) for e in piece.equations]
    found: List[Dict[str, Fraction]] = []
    remaining = [limit]

    def options(eqs: List[MPoly], name: str) -> List[Fraction]:
        idx = ring.index(name)
        for e in eqs:
            used = e.variables()
            if used == {idx}:
                return sorted(rational_roots(_to_upoly(e, name)), key=lambda v: (abs(v), v < 0))
        return candidates

    def search(k: int, point: Dict[str, Fraction], eqs: List[MPoly]) -> None:
        if len(found) >= count or remaining[0] <= 0:
            return
        if k == len(names):
            remaining[0] -= 1
            if not eqs and Fraction(piece.nonvanish.evaluate(point)) != 0:
                found.append(dict(point))
            return
        name = names[k]
        for value in options(eqs, name):
            remaining[0] -= 1
            if remaining[0] <= 0 or len(found) >= count:
                return
            point[name] = value
            specialized = [e.specialize({name: value}) for e in eqs]
            if any(e.is_constant() and not e.is_zero for e in specialized):
                del point[name]
                continue
            search(k + 1, point, [e for e in specialized if not e.is_zero])
            del point[name]

    search(0, {}, equations)
    return found


def _to_upoly(e: MPoly, name: str) -> UPoly:
    up = e.to_univariate(name)
    return UPoly([c.constant_value() for c in up.coeffs])


@dataclass(frozen=True)
class ConstancyReport:
    """Sampling evidence for a constant geometric count."""

    geo_count: int
    samples: Tuple[Dict[str, Fraction], ...]
    chi_counts: Tuple[int, ...]
    fiber_counts: Tuple[int, ...]
    coherent: Tuple[bool, ...]

    def _sample_ok(self, k: int) -> bool:
        return self.chi_counts[k] == self.fiber_counts[k] == self.geo_count and self.coherent[k]

    @property
    def ok(self) -> bool:
        return all(self._sample_ok(k) for k in range(len(self.samples)))

    @property
    def failed_samples(self) -> List[Dict[str, Fraction]]:
        return [self.samples[k] for k in range(len(self.samples)) if not self._sample_ok(k)]

    def describe(self) -> str:
        bad = [
            f"{_show(self.samples[k])}: chi {self.chi_counts[k]}, fiber {self.fiber_counts[k]}"
            for k in range(len(self.samples))
            if not self._sample_ok(k)
        ]
        if not bad:
            return f"geometric count {self.geo_count} at {len(self.samples)} samples"
        return f"expected geometric count {self.geo_count}; " + "; ".join(bad)


def specialized_fiber_count(ps: ParamSystem, point: Point) -> int:
    """Geometric count of the fiber over ``point`` computed from scratch over Q.

    Raises:
        NotZeroDimensional: If the fiber over ``point`` is not finite.
    """
    var_ring = ps.var_ring
    polys = []
    for F in ps.system:
        polys.append(F.specialize(point).set_ring(var_ring))
    gb = buchberger(polys, var_ring)
    if gb.is_unit:
        return 0
    qb = quotient_basis(gb)
    _, summary = select_separating(gb, qb)
    return summary.geo_count


def constancy_check(st: Stratum, ps: ParamSystem, samples: Sequence[Point]) -> ConstancyReport:
    """Check the geometric count of ``st`` at sample points.

    For each sample: the square-free degree of the specialized ``chi``, the
    count of the fiber computed directly (``-1`` for an infinite fiber), and
    whether ``u`` specializes to the square-free part of the specialized
    ``chi``.
    """
    chi_counts = []
    fiber_counts = []
    coherent = []
    for point in samples:
        st.check_point(point)
        if st.rank == 0:
            chi_counts.append(0)
            coherent.append(True)
        else:
            sq = evaluate_upoly(st.chi, point).squarefree_part()
            chi_counts.append(sq.degree)
            try:
                coherent.append(evaluate_upoly(st.u, point) == sq)
            except PointNotInStratum:
                coherent.append(False)
        try:
            fiber_counts.append(specialized_fiber_count(ps, point))
        except NotZeroDimensional:
            fiber_counts.append(-1)
    return ConstancyReport(
        st.geo_count, tuple(dict(p) for p in samples), tuple(chi_counts), tuple(fiber_counts), tuple(coherent)
    )


def _split_candidates(st: Stratum) -> Iterator[MPoly]:
    for d in st.deltas:
        yield d.num
    for c in tuple(st.chi.coeffs) + tuple(st.u.coeffs) + tuple(st.f.coeffs) + tuple(st.deltas) + st.traces:
        yield c.den


def split_on_failure(st: Stratum, report: ConstancyReport) -> Optional[MPoly]:
    """A factor of the stratum's delta chain or data denominators that cuts off the failed samples.

    Returns the square-free part of the first candidate that vanishes at a
    failed sample without vanishing on the whole stratum, or ``None``.
    """
    bad = report.failed_samples
    if not bad:
        return None
    seen: List[MPoly] = []
    for cand in _split_candidates(st):
        if cand.is_constant():
            continue
        fac = squarefree_part(cand)
        if fac in seen:
            continue
        seen.append(fac)
        if any(Fraction(fac.evaluate(y)) == 0 for y in bad) and not vanishes_on(fac, st.equations, st.nonvanish):
            return fac
    return None
