"""Sylvester matrices, subresultant polynomials and principal subresultant coefficients.

Conventions: for ``deg f = p > q = deg g`` the ``j``-th Sylvester matrix has
``q - j`` shifted copies of ``f`` followed by ``p - j`` shifted copies of ``g``
as columns, rows indexed by degree ``p + q - j - 1`` down to ``0``. The minor
``d_{j,i}`` keeps the first ``p + q - 2j - 1`` rows and the row of degree
``i``; ``sResP_j = sum_i d_{j,i} x^i`` and ``sRes_j = d_{j,j}``. Index ``q``
is included: ``sResP_q = lc(g)^(p-q-1) g`` and ``sRes_q = lc(g)^(p-q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Mapping, Optional, Tuple

from qetale.domains import QQ, Domain, PolynomialDomain
from qetale.exceptions import PreconditionError
from qetale.matrix import Matrix
from qetale.upoly import UPoly, lift_to_domain, specialize


@dataclass(frozen=True)
class SresChain:
    """Subresultant polynomials ``polys[j]`` and coefficients ``coeffs[j]`` for ``j = 0..q``."""

    f: UPoly
    g: UPoly
    polys: Tuple[UPoly, ...]
    coeffs: Tuple[Any, ...]

    @property
    def p(self) -> int:
        return self.f.degree

    @property
    def q(self) -> int:
        return self.g.degree

    @property
    def resultant(self) -> Any:
        return self.coeffs[0]


def _check_pair(f: UPoly, g: UPoly) -> None:
    if f.is_zero or g.is_zero:
        raise PreconditionError("subresultants of a zero polynomial")
    if f.domain != g.domain:
        raise PreconditionError("subresultant operands over different domains")
    if f.degree <= g.degree:
        raise PreconditionError(
            f"subresultants need deg f > deg g (got {f.degree} and {g.degree}); orient the pair first"
        )


def sylvester_matrix(f: UPoly, g: UPoly, j: int) -> Matrix:
    """Matrix of ``(u, v) -> u*f + v*g`` with ``deg u < q - j`` and ``deg v < p - j``.

    Raises:
        PreconditionError: If ``deg f <= deg g`` or ``j`` is outside ``0..q``.
    """
    _check_pair(f, g)
    p, q = f.degree, g.degree
    if not 0 <= j <= q:
        raise PreconditionError(f"subresultant index {j} outside 0..{q}")
    dom = f.domain
    rows = p + q - j
    columns: List[Tuple[UPoly, int]] = [(f, q - j - 1 - k) for k in range(q - j)]
    columns += [(g, p - j - 1 - k) for k in range(p - j)]
    cols = len(columns)
    entries = [dom.zero] * (rows * cols)
    for c, (poly, shift) in enumerate(columns):
        for deg, coeff in enumerate(poly.coeffs):
            r = rows - 1 - (deg + shift)
            entries[r * cols + c] = coeff
    return Matrix(rows, cols, entries, dom)


def determinantal_chain(f: UPoly, g: UPoly) -> SresChain:
    """Subresultants straight from the defining minors; slow, used as an oracle."""
    _check_pair(f, g)
    p, q = f.degree, g.degree
    dom = f.domain
    polys: List[UPoly] = []
    coeffs: List[Any] = []
    for j in range(q + 1):
        syl = sylvester_matrix(f, g, j)
        head = list(range(p + q - 2 * j - 1))
        cols = range(syl.cols)
        ds = [syl.submatrix(head + [p + q - j - 1 - i], cols).det() for i in range(j + 1)]
        polys.append(UPoly(ds, dom))
        coeffs.append(ds[j])
    return SresChain(f, g, tuple(polys), tuple(coeffs))


def sres_chain(f: UPoly, g: UPoly) -> SresChain:
    """Subresultant chain by the subresultant remainder sequence.

    Regular steps use pseudo-remainders divided exactly by the previous
    principal coefficient; a degree gap ``d - e > 1`` fills ``sResP_e`` from
    ``sResP_{d-1}`` by the gap formula and leaves the indices in between zero.

    Raises:
        PreconditionError: For a zero operand or ``deg f <= deg g``.
    """
    _check_pair(f, g)
    dom = f.domain
    p, q = f.degree, g.degree
    zero_poly = UPoly([], dom)
    polys: List[UPoly] = [zero_poly] * (q + 1)

    lcg = g.lc
    polys[q] = g.scale(lcg ** (p - q - 1)) if p - q > 1 else g
    s = lcg ** (p - q)
    a, b = g, f.prem(-g)
    while not b.is_zero:
        d, e = a.degree, b.degree
        polys[d - 1] = b
        delta = d - e
        if delta > 1:
            c = b.scale(b.lc ** (delta - 1)).exquo_scalar(s ** (delta - 1))
            polys[e] = c
        else:
            c = b
        if e == 0:
            break
        b = a.prem(-b).exquo_scalar(s**delta * a.lc)
        a = c
        s = a.lc

    polys = [pp.canonical() for pp in polys]
    coeffs = tuple(pp.coefficient(j) for j, pp in enumerate(polys))
    return SresChain(f, g, tuple(polys), coeffs)


def gcd_degree(f: UPoly, g: UPoly) -> Tuple[int, UPoly]:
    """Degree of ``gcd(f, g)`` and the witness ``sResP_j``.

    The witness is the first subresultant whose principal coefficient is
    nonzero; over a field it is an associate of the gcd.
    """
    if not f.domain.is_field:
        raise PreconditionError("gcd_degree needs coefficients in a field")
    chain = sres_chain(f, g)
    dom = f.domain
    for j, coeff in enumerate(chain.coeffs):
        if not dom.is_zero(coeff):
            return j, chain.polys[j]
    raise PreconditionError("no nonzero principal subresultant coefficient")  # pragma: no cover


@dataclass(frozen=True)
class SpecializationReport:
    """Outcome of :func:`check_specialization`."""

    ok: bool
    checked: int
    discrepancy: Optional[str] = None


def _specialize_coeff(c: Any, assignment: Mapping[str, Any], target: Domain) -> Any:
    value = c.specialize(assignment)
    if target == QQ:
        return value.constant_value() if value.is_constant() else value
    return value


def check_specialization(f: UPoly, g: UPoly, assignment: Mapping[str, Any]) -> SpecializationReport:
    """Check that subresultants commute with specializing the coefficients.

    Raises:
        PreconditionError: If the assignment kills a leading coefficient.
    """
    _check_pair(f, g)
    if not isinstance(f.domain, PolynomialDomain):
        raise PreconditionError("check_specialization expects polynomial coefficients")
    sf, sg = specialize(f, assignment), specialize(g, assignment)
    if sf.degree_dropped or sg.degree_dropped:
        raise PreconditionError("assignment kills a leading coefficient")
    sf_value, sg_value = sf.value, sg.value
    target = sf_value.domain
    if sg_value.domain != target:
        # one side lost all its parameters; compare in the polynomial domain
        target = f.domain
        sf_value, sg_value = lift_to_domain(sf_value, target), lift_to_domain(sg_value, target)
    generic = sres_chain(f, g)
    special = sres_chain(sf_value, sg_value)
    checked = 0
    for j in range(g.degree + 1):
        lhs = _specialize_coeff(generic.coeffs[j], assignment, target)
        if lhs != special.coeffs[j]:
            return SpecializationReport(False, checked, f"sRes_{j}: {lhs} != {special.coeffs[j]}")
        checked += 1
        lhs_poly = UPoly([_specialize_coeff(c, assignment, target) for c in generic.polys[j].coeffs], target)
        if lhs_poly != special.polys[j]:
            return SpecializationReport(False, checked, f"sResP_{j}: {lhs_poly} != {special.polys[j]}")
        checked += 1
    return SpecializationReport(True, checked)
