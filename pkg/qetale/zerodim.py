"""Groebner bases and zero-dimensional quotient algebras over a coefficient field.

The ring's domain may be ``QQ`` or a rational function field; in the latter
case coefficient zero tests go through :meth:`Domain.vanishes`, so a
coefficient that vanishes on the locus of the field is dropped, and every
leading coefficient inverted while normalizing is recorded as a pivot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from qetale.config import get_settings
from qetale.domains import QQ
from qetale.exceptions import (
    DomainError,
    InvariantViolation,
    NotZeroDimensional,
    PreconditionError,
    ResourceLimitExceeded,
)
from qetale.logger import get_logger
from qetale.matrix import Matrix
from qetale.mpoly import (
    Monomial,
    MPoly,
    PolyRing,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from qetale.upoly import UPoly

logger = get_logger(__name__)


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis.

    ``pivots`` lists the leading coefficients that were inverted to make
    polynomials monic, in the order they were met. Over ``QQ`` they are plain
    nonzero rationals and carry no information.
    """

    generators: Tuple[MPoly, ...]
    ring: PolyRing
    pivots: Tuple[Any, ...] = ()

    @property
    def order(self) -> str:
        return self.ring.order

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    @property
    def leading_monomials(self) -> List[Monomial]:
        return [g.LM for g in self.generators]

    def reduce(self, f: MPoly) -> MPoly:
        return normal_form(f, self.generators)

    def contains(self, f: MPoly) -> bool:
        return normal_form(f, self.generators).is_zero

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class QuotientBasis:
    """Standard monomials of a zero-dimensional ideal, ascending in the monomial order."""

    monomials: Tuple[Monomial, ...]

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def index(self) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}


@dataclass(frozen=True)
class FiberSummary:
    """Characteristic polynomial data of one multiplication map."""

    charpoly: UPoly
    sqfree: UPoly
    geo_count: int
    multiplicities: Optional[Tuple[Tuple[UPoly, int], ...]] = None


# -- reduction ----------------------------------------------------------------


def _leading(p: Dict[Monomial, Any], key) -> Monomial:
    return max(p, key=key)


def _clean(f: MPoly) -> MPoly:
    """Drop coefficients that vanish semantically."""
    dom = f.ring.domain
    if dom.exact_zero:
        return f
    terms = {}
    for m, c in f.terms.items():
        c = dom.canonical(c)
        if not dom.vanishes(c):
            terms[m] = c
    return MPoly(f.ring, terms)


def normal_form(f: MPoly, basis: Sequence[MPoly]) -> MPoly:
    """Fully reduce ``f`` by ``basis``, first divisor in list order winning."""
    ring = f.ring
    dom = ring.domain
    key = ring.key
    leads = [(g.LM, g.LC, g) for g in basis if not g.is_zero]
    p = dict(f.terms)
    r: Dict[Monomial, Any] = {}
    while p:
        m = _leading(p, key)
        c = dom.canonical(p.pop(m))
        if dom.vanishes(c):
            continue
        for lm, lc, g in leads:
            q = monomial_div(m, lm)
            if q is None:
                continue
            coef = c if dom.is_one(lc) else dom.exquo(c, lc)
            for gm, gc in g.terms.items():
                if gm == lm:
                    continue
                t = monomial_mul(gm, q)
                v = p.get(t)
                nv = -(coef * gc) if v is None else v - coef * gc
                if dom.is_zero(nv):
                    p.pop(t, None)
                else:
                    p[t] = nv
            break
        else:
            r[m] = c
    return MPoly(ring, r)


def spoly(f: MPoly, g: MPoly) -> MPoly:
    """S-polynomial of two monic polynomials."""
    dom = f.ring.domain
    lcm = monomial_lcm(f.LM, g.LM)
    a = f.mul_term(monomial_div(lcm, f.LM), dom.exquo(dom.one, f.LC))
    b = g.mul_term(monomial_div(lcm, g.LM), dom.exquo(dom.one, g.LC))
    return a - b


def _monic(f: MPoly, pivots: List[Any]) -> MPoly:
    lc = f.LC
    if f.ring.domain.is_one(lc):
        return f
    pivots.append(lc)
    return f.monic()


def _unit(ring: PolyRing, constant: MPoly, pivots: List[Any]) -> GroebnerBasis:
    # a constant generates the unit ideal only where its value is nonzero
    if not ring.domain.is_one(constant.LC):
        pivots.append(constant.LC)
    return GroebnerBasis((ring.one,), ring, tuple(pivots))


def buchberger(
    ideal: Iterable[MPoly],
    ring: Optional[PolyRing] = None,
    *,
    limit: Optional[int] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis in ``ring``'s monomial order.

    Pairs are handled by the normal strategy: smallest lcm in the monomial
    order first, ties broken by generator index. Buchberger's product and
    chain criteria discard useless pairs.

    Args:
        ideal: Generators; zero polynomials are ignored.
        ring: Target ring; defaults to the ring of the first generator.
        limit: Maximum number of S-pairs reduced; ``Settings.spair_limit`` by default.

    Raises:
        ResourceLimitExceeded: When more than ``limit`` S-pairs are reduced.
        DomainError: If generators live in different rings.
    """
    polys = list(ideal)
    if ring is None:
        if not polys:
            raise PreconditionError("buchberger needs a ring for an empty generator list")
        ring = polys[0].ring
    for p in polys:
        if p.ring != ring:
            raise DomainError(f"generator ring {p.ring!r} differs from {ring!r}")
    limit = get_settings().spair_limit if limit is None else limit
    key = ring.key
    pivots: List[Any] = []

    basis: List[MPoly] = []
    for p in polys:
        p = _clean(p)
        if p.is_zero:
            continue
        if p.is_constant():
            return _unit(ring, p, pivots)
        basis.append(_monic(p, pivots))
    if not basis:
        return GroebnerBasis((), ring, tuple(pivots))

    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    reduced = 0
    while pairs:
        i, j = min(
            pairs,
            key=lambda ij: (
                sum(monomial_lcm(basis[ij[0]].LM, basis[ij[1]].LM)),
                key(monomial_lcm(basis[ij[0]].LM, basis[ij[1]].LM)),
                ij[1],
                ij[0],
            ),
        )
        pairs.discard((i, j))
        lmi, lmj = basis[i].LM, basis[j].LM
        lcm = monomial_lcm(lmi, lmj)
        if monomial_mul(lmi, lmj) == lcm:
            continue
        if _chain_criterion(i, j, lcm, basis, pairs):
            continue
        reduced += 1
        if reduced > limit:
            raise ResourceLimitExceeded(f"Groebner basis computation exceeded {limit} S-pair reductions")
        h = normal_form(spoly(basis[i], basis[j]), basis)
        if h.is_zero:
            continue
        if h.is_constant():
            logger.debug("unit ideal after %d S-pairs", reduced)
            return _unit(ring, h, pivots)
        basis.append(_monic(h, pivots))
        k = len(basis) - 1
        pairs.update((a, k) for a in range(k))

    logger.debug("Groebner basis: %d S-pairs reduced, %d raw generators", reduced, len(basis))
    return GroebnerBasis(tuple(_interreduce(basis, key)), ring, tuple(pivots))


def _chain_criterion(i: int, j: int, lcm: Monomial, basis: List[MPoly], pairs: set) -> bool:
    for k, g in enumerate(basis):
        if k in (i, j) or not monomial_divides(g.LM, lcm):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _interreduce(basis: List[MPoly], key) -> List[MPoly]:
    minimal: List[MPoly] = []
    for idx, g in enumerate(basis):
        lm = g.LM
        dominated = False
        for jdx, other in enumerate(basis):
            if jdx == idx:
                continue
            olm = other.LM
            if monomial_divides(olm, lm) and (olm != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        lm, lc = g.LM, g.LC
        tail = MPoly(g.ring, {m: c for m, c in g.terms.items() if m != lm})
        out.append(MPoly(g.ring, {lm: lc}) + normal_form(tail, others))
    out.sort(key=lambda g: key(g.LM), reverse=True)
    return out


# -- quotient algebra ---------------------------------------------------------


def quotient_basis(gb: GroebnerBasis) -> QuotientBasis:
    """Standard monomials of ``gb``.

    The unit ideal yields the empty basis.

    Raises:
        NotZeroDimensional: If some variable has no pure power among the
            leading monomials.
    """
    ring = gb.ring
    if gb.is_unit:
        return QuotientBasis(())
    leads = gb.leading_monomials
    bounds = []
    for i, name in enumerate(ring.gens):
        powers = [m[i] for m in leads if all(e == 0 for k, e in enumerate(m) if k != i) and m[i] > 0]
        if not powers:
            raise NotZeroDimensional(f"variable {name} has no pure power among the leading monomials")
        bounds.append(min(powers))

    found: List[Monomial] = []
    stack = [ring.zero_monomial]
    seen = {ring.zero_monomial}
    while stack:
        m = stack.pop()
        if any(monomial_divides(lm, m) for lm in leads):
            continue
        found.append(m)
        for i in range(ring.nvars):
            if m[i] + 1 < bounds[i]:
                n = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
    found.sort(key=ring.key)
    return QuotientBasis(tuple(found))


def coordinates(f: MPoly, qb: QuotientBasis, index: Optional[Dict[Monomial, int]] = None) -> List[Any]:
    """Coordinates of a reduced polynomial in the standard monomial basis."""
    index = qb.index() if index is None else index
    dom = f.ring.domain
    out = [dom.zero] * qb.dim
    for m, c in f.terms.items():
        pos = index.get(m)
        if pos is None:
            raise InvariantViolation(f"normal form contains non-standard monomial {m}")
        out[pos] = c
    return out


def mult_matrix(sigma: MPoly, gb: GroebnerBasis, qb: QuotientBasis) -> Matrix:
    """Matrix of multiplication by ``sigma``; column ``j`` is ``NF(sigma * m_j)``."""
    ring = gb.ring
    dom = ring.domain
    sigma = ring.convert(sigma)
    index = qb.index()
    d = qb.dim
    entries = [dom.zero] * (d * d)
    for j, m in enumerate(qb.monomials):
        col = coordinates(gb.reduce(sigma.mul_term(m, dom.one)), qb, index)
        for i, c in enumerate(col):
            entries[i * d + j] = dom.canonical(c)
    return Matrix(d, d, entries, dom)


def char_poly(m: Matrix) -> UPoly:
    """``det(lambda*I - M)``."""
    return m.char_poly()


def trace_det(sigma: MPoly, gb: GroebnerBasis, qb: QuotientBasis) -> Tuple[Any, Any]:
    """Trace and determinant of the multiplication map of ``sigma``."""
    m = mult_matrix(sigma, gb, qb)
    return m.trace(), m.det()


def fiber_summary(gb: GroebnerBasis, sigma: MPoly) -> FiberSummary:
    """Characteristic polynomial, its square-free part and the count it certifies.

    ``geo_count`` is a lower bound on the number of geometric points and is
    attained exactly when ``sigma`` separates them. Multiplicities are given
    only when the characteristic polynomial splits into linear factors over Q.
    """
    from qetale.sympy_bridge import factor_upoly

    qb = quotient_basis(gb)
    if qb.dim == 0:
        one = UPoly([Fraction(1)])
        return FiberSummary(one, one, 0, ())
    chi = char_poly(mult_matrix(sigma, gb, qb))
    sqfree = chi.squarefree_part()
    multiplicities = None
    if chi.domain == QQ:
        factors = factor_upoly(chi)
        if factors and all(f.degree == 1 for f, _ in factors):
            multiplicities = tuple(factors)
    return FiberSummary(chi, sqfree, sqfree.degree, multiplicities)
