"""Real roots over Q: Sturm counting, isolation by bisection and the real fiber sections of a stratum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from qetale.config import get_settings
from qetale.exceptions import InvariantViolation, PreconditionError
from qetale.logger import get_logger
from qetale.parametric import ParamSystem, Stratum, StratificationReport, evaluate_upoly, sample_points
from qetale.sympy_bridge import rational_roots
from qetale.upoly import UPoly

logger = get_logger(__name__)

Bound = Optional[Union[Fraction, int, float]]


# -- interval arithmetic --------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """A closed interval with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise PreconditionError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Any) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Any) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    @staticmethod
    def _lift(other: Any) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(other)

    def __add__(self, other: Any) -> "Interval":
        other = self._lift(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Any) -> "Interval":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "Interval":
        return self._lift(other) - self

    def __mul__(self, other: Any) -> "Interval":
        other = self._lift(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Interval":
        other = self._lift(other)
        if other.contains_zero():
            raise ZeroDivisionError(f"interval division by [{other.lo}, {other.hi}]")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __pow__(self, n: int) -> "Interval":
        result = Interval.point(1)
        for _ in range(n):
            result = result * self
        return result

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def eval_interval(p: UPoly, x: Interval) -> Interval:
    """Horner enclosure of ``p`` over ``x``."""
    if p.is_zero:
        return Interval.point(0)
    acc = Interval.point(p.coeffs[-1])
    for c in reversed(p.coeffs[:-1]):
        acc = acc * x + c
    return acc


# -- Sturm sequences ------------------------------------------------------------


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(p: UPoly) -> List[UPoly]:
    """``p, p', -rem(p, p'), ...`` down to a constant."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero and seq[-1].degree > 0:
        seq.append(-(seq[-2] % seq[-1]))
    return [q for q in seq if not q.is_zero]


def _is_inf(x: Bound, sign: int) -> bool:
    return x is None or (isinstance(x, float) and x == sign * float("inf"))


def _variations(seq: Sequence[UPoly], x: Bound, at_infinity: int = 0) -> int:
    signs = []
    for q in seq:
        if at_infinity:
            s = _sign(Fraction(q.lc))
            if at_infinity < 0 and q.degree % 2:
                s = -s
        else:
            s = _sign(Fraction(q.evaluate(Fraction(x))))
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UPoly, a: Bound = None, b: Bound = None) -> int:
    """Number of distinct real roots of ``p`` in ``(a, b]``; ``None`` stands for an infinite bound.

    Raises:
        PreconditionError: If ``p`` is zero.
    """
    if p.is_zero:
        raise PreconditionError("sturm_count of the zero polynomial")
    if p.degree < 1:
        return 0
    q = p.squarefree_part()
    seq = sturm_sequence(q)
    lower = _variations(seq, a, -1) if _is_inf(a, -1) else _variations(seq, a)
    upper = _variations(seq, b, 1) if _is_inf(b, 1) else _variations(seq, b)
    return lower - upper


def real_root_count(p: UPoly) -> int:
    return sturm_count(p)


def cauchy_bound(p: UPoly) -> Fraction:
    """``1 + max |c_i / c_d|`` rounded up to a power of two."""
    lc = abs(Fraction(p.lc))
    bound = 1 + max((abs(Fraction(c)) / lc for c in p.coeffs[:-1]), default=Fraction(0))
    b = Fraction(1)
    while b < bound:
        b *= 2
    return b


# -- isolation ------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatingInterval:
    """``poly`` (square-free) has exactly one root in ``[lo, hi]``.

    ``lo == hi`` when the root is a binary rational. ``root`` holds any
    rational root exactly.
    """

    lo: Fraction
    hi: Fraction
    poly: UPoly
    root: Optional[Fraction] = None

    @property
    def is_exact(self) -> bool:
        return self.root is not None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _make(lo: Fraction, hi: Fraction, q: UPoly, exact: Sequence[Fraction]) -> IsolatingInterval:
    for r in exact:
        if lo < r <= hi:
            if _is_dyadic(r):
                return IsolatingInterval(r, r, q, r)
            return _shrink(IsolatingInterval(lo, hi, q, r))
    return _shrink(IsolatingInterval(lo, hi, q))


def _shrink(iv: IsolatingInterval) -> IsolatingInterval:
    """Move ``lo`` off a neighbouring root so closed intervals stay disjoint."""
    q = iv.poly
    lo, hi = iv.lo, iv.hi
    while q.evaluate(lo) == 0:
        mid = (lo + hi) / 2
        if sturm_count(q, lo, mid):
            hi = mid
        else:
            lo = mid
    return IsolatingInterval(lo, hi, q, iv.root)


def isolate(p: UPoly) -> List[IsolatingInterval]:
    """One isolating interval per distinct real root, largest root first.

    Raises:
        PreconditionError: If ``p`` is zero.
    """
    if p.is_zero:
        raise PreconditionError("isolate of the zero polynomial")
    if p.degree < 1:
        return []
    q = p.squarefree_part()
    exact = rational_roots(q)
    b = cauchy_bound(q)
    out: List[IsolatingInterval] = []
    stack: List[Tuple[Fraction, Fraction, int]] = [(-b, b, sturm_count(q, -b, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_make(lo, hi, q, exact))
            continue
        mid = (lo + hi) / 2
        left = sturm_count(q, lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, n - left))
    out.sort(key=lambda iv: iv.hi, reverse=True)
    return out


def refine(iv: IsolatingInterval, width: Fraction) -> IsolatingInterval:
    """Bisect until the interval is narrower than ``width`` or collapses on the root."""
    if iv.lo == iv.hi or iv.width <= width:
        return iv
    q = iv.poly
    lo, hi = iv.lo, iv.hi
    s_lo = _sign(Fraction(q.evaluate(lo)))
    if q.evaluate(hi) == 0:
        return IsolatingInterval(hi, hi, q, hi) if _is_dyadic(hi) else iv
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = _sign(Fraction(q.evaluate(mid)))
        if s_mid == 0:
            return IsolatingInterval(mid, mid, q, mid)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi, q, iv.root)


# -- fiber sections ---------------------------------------------------------------


@dataclass(frozen=True)
class FiberSection:
    """The ``index``-th largest real point of a fiber, 1-based."""

    index: int
    lam: IsolatingInterval
    coords: Tuple[Interval, ...]
    variables: Tuple[str, ...]

    def coordinate(self, var: str) -> Interval:
        return self.coords[self.variables.index(var)]


def dyadic_outward(iv: Interval, width: Fraction) -> Interval:
    """Widen ``iv`` to endpoints on the grid of step ``2^-k <= width/4``.

    Intervals whose endpoints are already binary rationals are returned unchanged.
    """
    if _is_dyadic(iv.lo) and _is_dyadic(iv.hi):
        return iv
    steps = -(-4 * width.denominator // width.numerator)
    scale = 1 << (steps - 1).bit_length()
    return Interval(Fraction(math.floor(iv.lo * scale), scale), Fraction(math.ceil(iv.hi * scale), scale))


def _enclose(
    iv: IsolatingInterval,
    g: UPoly,
    numerators: Sequence[UPoly],
    width: Fraction,
    floor: Fraction,
) -> Tuple[IsolatingInterval, Tuple[Interval, ...]]:
    if iv.is_exact:
        denom = Fraction(g.evaluate(iv.root))
        if denom == 0:
            raise InvariantViolation(f"g vanishes at the root {iv.root} of u")
        return iv, tuple(Interval.point(Fraction(n.evaluate(iv.root)) / denom) for n in numerators)
    step = iv.width
    while True:
        lam = iv.as_interval()
        den = eval_interval(g, lam)
        if not den.contains_zero():
            coords = tuple(eval_interval(n, lam) / den for n in numerators)
            if all(c.width <= width for c in coords):
                return iv, coords
        elif iv.width < floor:
            raise InvariantViolation(f"g straddles zero on {lam} below the width floor")
        if iv.width < floor:
            raise InvariantViolation(f"coordinate enclosures did not reach width {width}")
        step = step / 2
        iv = refine(iv, step)
        if iv.is_exact:
            return _enclose(iv, g, numerators, width, floor)


def fiber_at(st: Stratum, point: Mapping[str, Fraction], width: Optional[Fraction] = None) -> List[FiberSection]:
    """Real points of the fiber over ``point``, ordered by decreasing ``lam``.

    Raises:
        PointNotInStratum: If ``point`` is not in the stratum.
        InvariantViolation: If ``g`` cannot be separated from zero at a root.
    """
    settings = get_settings()
    width = settings.width if width is None else Fraction(width)
    floor = Fraction(1, 2**settings.min_width_bits)
    st.check_point(point)
    if st.rank == 0 or st.rur is None:
        return []
    u = evaluate_upoly(st.u, point)
    g = evaluate_upoly(st.rur.g, point)
    numerators = [evaluate_upoly(n, point) for n in st.rur.numerators]
    sections = []
    for k, iv in enumerate(isolate(u), start=1):
        iv, coords = _enclose(iv, g, numerators, width / 2, floor)
        coords = tuple(dyadic_outward(c, width) for c in coords)
        sections.append(FiberSection(k, iv, coords, st.rur.variables))
    logger.debug("fiber over %s: %d real sections", dict(point), len(sections))
    return sections


def residual_enclosures(ps: ParamSystem, point: Mapping[str, Fraction], section: FiberSection) -> List[Interval]:
    """Interval values of every system generator at a section; each should contain zero."""
    images: Dict[str, Any] = {name: Interval.point(point[name]) for name in ps.params}
    images.update(zip(section.variables, section.coords))
    one = Interval.point(1)
    return [F.compose(images, one) for F in ps.system]


@dataclass(frozen=True)
class RealCountReport:
    """Real fiber counts at sample points; evidence, not proof."""

    samples: Tuple[Dict[str, Fraction], ...]
    counts: Tuple[int, ...]

    @property
    def constant(self) -> bool:
        return len(set(self.counts)) <= 1

    @property
    def value(self) -> Optional[int]:
        return self.counts[0] if self.counts and self.constant else None

    def describe(self) -> str:
        if not self.counts:
            return "no samples"
        if self.constant:
            return f"constant real count {self.counts[0]} on {len(self.counts)} samples (sampling evidence)"
        return "real count varies: " + ", ".join(str(c) for c in self.counts) + " (sampling evidence)"


def real_count_probe(st: Stratum, samples: Sequence[Mapping[str, Fraction]]) -> RealCountReport:
    """Real-root count of ``u`` specialized at each sample."""
    counts = []
    for point in samples:
        st.check_point(point)
        counts.append(0 if st.rank == 0 else real_root_count(evaluate_upoly(st.u, point)))
    return RealCountReport(tuple(dict(p) for p in samples), tuple(counts))


@dataclass(frozen=True)
class LiftedSample:
    stratum: int
    point: Dict[str, Fraction]
    sections: Tuple[FiberSection, ...]


def lift_samples(
    report: StratificationReport,
    base_samples: Optional[Mapping[int, Sequence[Mapping[str, Fraction]]]] = None,
    *,
    width: Optional[Fraction] = None,
) -> List[LiftedSample]:
    """Full real fibers over base samples, tagged by stratum index.

    Without ``base_samples`` each stratum is sampled with
    :func:`~qetale.parametric.sample_points`. Empty fibers are kept.
    """
    params = report.system.params
    if base_samples is None:
        base_samples = {i: sample_points(st, params=params) for i, st in enumerate(report.strata)}
    out = []
    for i in sorted(base_samples):
        st = report.strata[i]
        for point in base_samples[i]:
            out.append(LiftedSample(i, dict(point), tuple(fiber_at(st, point, width))))
    return out
