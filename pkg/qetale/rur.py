"""Separating elements and rational univariate representations."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from qetale.exceptions import InvariantViolation, PreconditionError
from qetale.logger import get_logger
from qetale.matrix import Matrix
from qetale.mpoly import MPoly, PolyRing
from qetale.upoly import UPoly
from qetale.zerodim import FiberSummary, GroebnerBasis, QuotientBasis, char_poly, mult_matrix, quotient_basis

logger = get_logger(__name__)


@dataclass(frozen=True)
class RUR:
    """Solutions written as ``x_i = g_i(lam) / g(lam)`` over the roots of ``u``."""

    sigma: MPoly
    u: UPoly
    g: UPoly
    numerators: Tuple[UPoly, ...]
    variables: Tuple[str, ...]

    @property
    def u_coeffs(self) -> Tuple[Any, ...]:
        return self.u.coeffs

    @property
    def geo_count(self) -> int:
        return self.u.degree

    def numerator(self, var: str) -> UPoly:
        return self.numerators[self.variables.index(var)]


def candidate_family(n: Union[int, PolyRing], d: int) -> List[MPoly]:
    """``x_1 + i*x_2 + ... + i^(n-1)*x_n`` for ``i = 0 .. (n-1)*C(d, 2)``.

    Args:
        n: Number of variables, or the ring whose generators are used. An
            integer builds the ring ``x1 .. xn``.
        d: Dimension of the quotient algebra.
    """
    ring = n if isinstance(n, PolyRing) else PolyRing([f"x{k + 1}" for k in range(n)])
    nvars = ring.nvars
    if nvars < 1 or d < 1:
        raise PreconditionError("candidate_family needs at least one variable and d >= 1")
    bound = (nvars - 1) * comb(d, 2)
    gens = [ring.gen(name) for name in ring.gens]
    out = []
    for i in range(bound + 1):
        sigma = ring.zero
        for k, x in enumerate(gens):
            sigma = sigma + x.scale(i**k)
        out.append(sigma)
    return out


def candidate_weights(nvars: int, i: int) -> List[int]:
    return [i**k for k in range(nvars)]


def combine_matrices(weights: Sequence[int], mats: Sequence[Matrix]) -> Matrix:
    acc = mats[0].scale(mats[0].domain.convert(weights[0]))
    for w, m in zip(weights[1:], mats[1:]):
        if w:
            acc = acc + m.scale(m.domain.convert(w))
    return acc.map(acc.domain.canonical)


def squarefree_part(chi: UPoly) -> UPoly:
    """Monic ``chi / gcd(chi, chi')``."""
    if chi.is_zero:
        raise PreconditionError("square-free part of the zero polynomial")
    return chi.squarefree_part()


def select_separating(gb: GroebnerBasis, qb: Optional[QuotientBasis] = None) -> Tuple[MPoly, FiberSummary]:
    """Candidate with the largest square-free characteristic degree, smallest index on ties.

    No candidate can exceed the number of geometric points, so the search
    stops early once a candidate reaches the dimension of the algebra.
    """
    qb = quotient_basis(gb) if qb is None else qb
    ring = gb.ring
    if qb.dim == 0:
        raise PreconditionError("the ideal has no solutions")
    coords = [mult_matrix(ring.gen(name), gb, qb) for name in ring.gens]
    best: Optional[Tuple[MPoly, FiberSummary]] = None
    for i, sigma in enumerate(candidate_family(ring, qb.dim)):
        chi = char_poly(combine_matrices(candidate_weights(ring.nvars, i), coords))
        sqfree = chi.squarefree_part()
        summary = FiberSummary(chi, sqfree, sqfree.degree)
        if best is None or summary.geo_count > best[1].geo_count:
            best = (sigma, summary)
        if summary.geo_count == qb.dim:
            break
    assert best is not None
    logger.debug("separating element %s with count %d", best[0], best[1].geo_count)
    return best


def power_table(m: Matrix, count: int) -> List[Matrix]:
    """``[I, M, M^2, ..., M^(count-1)]``."""
    out = [Matrix.identity(m.rows, m.domain)]
    for _ in range(1, count):
        out.append(out[-1] * m)
    return out


def trace_of_product(a: Matrix, b: Matrix) -> Any:
    """``tr(A*B)`` without forming the product."""
    dom = a.domain
    n = a.rows
    acc = dom.zero
    for i in range(n):
        for k in range(n):
            x = a[i, k]
            if dom.is_zero(x):
                continue
            y = b[k, i]
            if dom.is_zero(y):
                continue
            acc = acc + x * y
    return dom.canonical(acc)


def lagrange_numerator(traces: Sequence[Any], u: UPoly) -> UPoly:
    """``sum_l sum_i T_i * u_(l+i+1) * lam^l`` with ``u_k = 0`` past ``deg u``."""
    dom = u.domain
    d = len(traces)
    coeffs = []
    for l in range(d):
        acc = dom.zero
        for i in range(d - l):
            uk = u.coefficient(l + i + 1)
            if dom.is_zero(uk) or dom.is_zero(traces[i]):
                continue
            acc = acc + traces[i] * uk
        coeffs.append(dom.canonical(acc))
    return UPoly(coeffs, dom)


def rur_numerator(
    f: MPoly,
    sigma: MPoly,
    u: UPoly,
    gb: GroebnerBasis,
    qb: QuotientBasis,
    powers: Optional[Sequence[Matrix]] = None,
) -> UPoly:
    """The trace-weighted interpolation polynomial of ``f`` along ``sigma``.

    ``f = 1`` gives ``g``; a coordinate ``x_i`` gives ``g_i``. ``powers`` may
    pass a precomputed :func:`power_table` of ``sigma``.
    """
    lf = mult_matrix(f, gb, qb)
    if powers is None:
        powers = power_table(mult_matrix(sigma, gb, qb), qb.dim)
    traces = [trace_of_product(lf, p) for p in powers]
    return lagrange_numerator(traces, u)


def back_substitute(
    generator: MPoly,
    g: UPoly,
    numerators: Mapping[str, UPoly],
    u: UPoly,
) -> UPoly:
    """``g^e * F(g_1/g, ..., g_n/g) mod u`` for ``F`` of total degree ``e``.

    ``F``'s coefficients must live in ``u``'s coefficient domain.
    """
    dom = u.domain
    ring = generator.ring
    e = generator.total_degree()
    one = UPoly([dom.one], dom)
    g_powers = [one]
    for _ in range(e):
        g_powers.append((g_powers[-1] * g) % u)
    var_powers: Dict[Tuple[str, int], UPoly] = {}

    def power(name: str, k: int) -> UPoly:
        cached = var_powers.get((name, k))
        if cached is None:
            cached = one if k == 0 else (power(name, k - 1) * numerators[name]) % u
            var_powers[(name, k)] = cached
        return cached

    total = UPoly([], dom)
    for m, c in generator.terms.items():
        term = g_powers[e - sum(m)]
        for name, k in zip(ring.gens, m):
            if k:
                term = (term * power(name, k)) % u
        total = total + term.scale(c)
    return (total % u).canonical()


def rur_build(gb: GroebnerBasis, generators: Optional[Sequence[MPoly]] = None) -> RUR:
    """Rational univariate representation of a zero-dimensional ideal over Q.

    Raises:
        NotZeroDimensional: If the ideal has positive dimension.
        PreconditionError: If the ideal is the unit ideal.
        InvariantViolation: If a certified identity fails.
    """
    qb = quotient_basis(gb)
    sigma, summary = select_separating(gb, qb)
    u = summary.sqfree
    ring = gb.ring
    powers = power_table(mult_matrix(sigma, gb, qb), qb.dim)
    g = rur_numerator(ring.one, sigma, u, gb, qb, powers) % u
    numerators = [rur_numerator(ring.gen(name), sigma, u, gb, qb, powers) % u for name in ring.gens]
    rur = RUR(sigma, u, g, tuple(numerators), ring.gens)
    verify_rur(rur, generators if generators is not None else gb.generators)
    return rur


def verify_rur(rur: RUR, generators: Sequence[MPoly]) -> None:
    """Check square-freeness, invertibility of ``g`` and back-substitution exactly.

    Raises:
        InvariantViolation: On the first failed identity.
    """
    u = rur.u
    if u.gcd(u.derivative()).degree != 0:
        raise InvariantViolation(f"u = {u} is not square-free")
    if u.gcd(rur.g).degree != 0:
        raise InvariantViolation(f"g = {rur.g} is not invertible modulo u")
    names = dict(zip(rur.variables, rur.numerators))
    for generator in generators:
        rest = back_substitute(generator, rur.g, names, u)
        if not rest.is_zero:
            raise InvariantViolation(f"back-substitution of {generator} leaves {rest}")
