"""Collins projection sets and delineability probes for a single polynomial."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from qetale.domains import PolynomialDomain
from qetale.exceptions import PreconditionError, SampleNotInRegion, SystemFileError
from qetale.exprio import parse_poly
from qetale.ideals import radical_member
from qetale.logger import get_logger
from qetale.mpoly import MPoly, PolyRing
from qetale.parametric import Locus
from qetale.realroots import sturm_count
from qetale.subresultant import sres_chain
from qetale.upoly import UPoly

logger = get_logger(__name__)

Point = Mapping[str, Fraction]


def _dedup(polys: Sequence[MPoly]) -> List[MPoly]:
    # only exact repeats go; scalar multiples such as p and 6*p both stay
    out: List[MPoly] = []
    for p in polys:
        if p not in out:
            out.append(p)
    return out


@dataclass(frozen=True)
class ProjectionSet:
    """Coefficients ``c_k`` of ``A`` in the main variable, the truncations ``B`` and their subdiscriminants."""

    poly: MPoly
    main_var: str
    coefficients: Tuple[MPoly, ...]
    truncations: Tuple[UPoly, ...]
    subdiscs: Tuple[MPoly, ...]
    table: Tuple[Tuple[int, int, MPoly], ...]

    @property
    def ring(self) -> PolyRing:
        """The ring of the remaining variables."""
        return PolyRing([g for g in self.poly.ring.gens if g != self.main_var])

    @property
    def zero_coefficients(self) -> Tuple[int, ...]:
        """Indices ``k`` with ``c_k = 0``; these are trivially sign-invariant."""
        return tuple(k for k, c in enumerate(self.coefficients) if c.is_zero)

    @property
    def polynomials(self) -> List[MPoly]:
        """The set ``P``: nonzero coefficients and subdiscriminants, deduplicated."""
        return _dedup([c for c in self.coefficients if not c.is_zero] + list(self.subdiscs))


def _coefficients(a: MPoly, main_var: str, ring: PolyRing) -> List[MPoly]:
    if main_var not in a.ring.gens:
        return [a.set_ring(ring)]
    return [c.set_ring(ring) for c in a.to_univariate(main_var).coeffs] or [ring.zero]


def projection_set(a: MPoly, main_var: str) -> ProjectionSet:
    """Collins's ``P`` for ``A`` with respect to ``main_var``.

    Each truncation ``B_j = c_0 + ... + c_j x^j`` of degree at least one
    contributes the principal subresultant coefficients of ``(B_j, B_j')``.
    """
    ring = PolyRing([g for g in a.ring.gens if g != main_var])
    coeffs = _coefficients(a, main_var, ring)
    dom = PolynomialDomain(ring)
    truncations: List[UPoly] = []
    for j in range(len(coeffs)):
        b = UPoly(coeffs[: j + 1], dom)
        if b.is_zero or (truncations and truncations[-1] == b):
            continue
        truncations.append(b)
    table = []
    for i, b in enumerate(truncations):
        if b.degree < 1:
            continue
        for j, c in enumerate(sres_chain(b, b.derivative()).coeffs):
            table.append((i, j, c))
    subdiscs = _dedup([c for _, _, c in table if not c.is_zero])
    logger.debug("projection set of %s: %d truncations, %d subdiscriminants", a, len(truncations), len(subdiscs))
    return ProjectionSet(a, main_var, tuple(coeffs), tuple(truncations), tuple(subdiscs), tuple(table))


@dataclass(frozen=True)
class CoefficientStratum(Locus):
    """``Y_k``: the first ``k`` leading coefficients vanish and the next does not."""

    index: int
    equations: Tuple[MPoly, ...]
    nonvanish: MPoly
    degree: int
    cylinder: bool
    empty: bool


def single_poly_strata(a: MPoly, main_var: str) -> List[CoefficientStratum]:
    """The chain ``Y_0 ... Y_(n+1)`` cut out by the leading coefficients of ``A``.

    ``Y_(n+1)`` is the locus where ``A`` vanishes identically in the main
    variable and is flagged ``cylinder``.
    """
    ring = PolyRing([g for g in a.ring.gens if g != main_var])
    coeffs = _coefficients(a, main_var, ring)
    n = len(coeffs) - 1
    out = []
    for k in range(n + 2):
        equations = tuple(coeffs[n - i] for i in range(k))
        cylinder = k == n + 1
        nonvanish = ring.one if cylinder else coeffs[n - k]
        closed = [e for e in equations if not e.is_zero]
        if nonvanish.is_zero:
            empty = True
        elif closed:
            empty = radical_member(nonvanish, closed)
        else:
            empty = False
        out.append(CoefficientStratum(k, equations, nonvanish, n - k, cylinder, empty))
    return out


# -- regions and probes -----------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Equations plus sign conditions ``(polynomial, sign)`` with sign in ``{-1, 0, 1}``."""

    equations: Tuple[MPoly, ...] = ()
    signs: Tuple[Tuple[MPoly, int], ...] = ()

    def check(self, point: Point) -> None:
        """Raise :class:`SampleNotInRegion` naming the failed condition."""
        for e in self.equations:
            value = Fraction(e.evaluate(point))
            if value != 0:
                raise SampleNotInRegion(f"equation {e} = {value} at {_show(point)}")
        for p, sign in self.signs:
            value = Fraction(p.evaluate(point))
            if _sign(value) != sign:
                raise SampleNotInRegion(f"{p} has sign {_sign(value)} at {_show(point)}, expected {sign}")


_CONDITION_RE = re.compile(r"^(?P<lhs>.+?)(?P<op><=|>=|!=|<|>|=)(?P<rhs>.+)$")
_OPS = {"<": -1, ">": 1, "=": 0}


def parse_region(text: str, ring: PolyRing) -> Region:
    """Parse ``;``-separated conditions such as ``4*p^3 + 27*q^2 < 0; p < 0``.

    Raises:
        SystemFileError: On an unsupported relation.
        ParseError: On a malformed polynomial.
    """
    equations: List[MPoly] = []
    signs: List[Tuple[MPoly, int]] = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        match = _CONDITION_RE.match(part)
        if match is None:
            raise SystemFileError(f"region condition needs one of <, >, =: {part!r}")
        op = match.group("op")
        if op not in _OPS:
            raise SystemFileError(f"unsupported relation {op!r} in {part!r}")
        poly = parse_poly(match.group("lhs"), ring) - parse_poly(match.group("rhs"), ring)
        if op == "=":
            equations.append(poly)
        else:
            signs.append((poly, _OPS[op]))
    return Region(tuple(equations), tuple(signs))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _show(point: Point) -> str:
    return ",".join(f"{k}={v}" for k, v in point.items())


def real_root_count_at(a: MPoly, main_var: str, point: Point) -> Optional[int]:
    """Distinct real roots of ``A(point; x)``; ``None`` when ``A`` vanishes identically there."""
    ring = PolyRing([g for g in a.ring.gens if g != main_var])
    coeffs = [Fraction(c.evaluate(point)) for c in _coefficients(a, main_var, ring)]
    specialized = UPoly(coeffs)
    if specialized.is_zero:
        return None
    return sturm_count(specialized)


@dataclass(frozen=True)
class DelineabilityReport:
    """Sign vectors on ``P`` and real root counts at the samples; evidence only."""

    samples: Tuple[Dict[str, Fraction], ...]
    sign_vectors: Tuple[Tuple[int, ...], ...]
    counts: Tuple[Optional[int], ...]
    status: str
    message: str

    @property
    def count(self) -> Optional[int]:
        return self.counts[0] if self.status == "delineable" and self.counts else None


def delineability_probe(
    a: MPoly,
    main_var: str,
    region: Region,
    samples: Sequence[Point],
    projection: Optional[ProjectionSet] = None,
) -> DelineabilityReport:
    """Compare sign vectors on ``P`` and real root counts of ``A`` across samples.

    Raises:
        SampleNotInRegion: If a sample violates the region.
        PreconditionError: If no samples are given.
    """
    if not samples:
        raise PreconditionError("delineability_probe needs at least one sample")
    for point in samples:
        region.check(point)
    projection = projection_set(a, main_var) if projection is None else projection
    polys = projection.polynomials
    vectors = tuple(tuple(_sign(Fraction(p.evaluate(point))) for p in polys) for point in samples)
    counts = tuple(real_root_count_at(a, main_var, point) for point in samples)
    frozen = tuple(dict(p) for p in samples)

    for k, vec in enumerate(vectors[1:], start=1):
        if vec != vectors[0]:
            i = next(i for i, (x, y) in enumerate(zip(vectors[0], vec)) if x != y)
            msg = (
                f"samples not in one sign cell: {polys[i]} has sign {vectors[0][i]} at "
                f"{_show(samples[0])} and {vec[i]} at {_show(samples[k])}"
            )
            return DelineabilityReport(frozen, vectors, counts, "not one sign cell", msg)
    for k, c in enumerate(counts[1:], start=1):
        if c != counts[0]:
            msg = f"real root count {counts[0]} at {_show(samples[0])} but {c} at {_show(samples[k])}"
            return DelineabilityReport(frozen, vectors, counts, "count mismatch", msg)
    msg = f"consistent real root count {counts[0]} on {len(counts)} samples (sampling evidence)"
    return DelineabilityReport(frozen, vectors, counts, "delineable", msg)
