"""Ideal-level utilities over Q: cached Groebner bases, radical membership,
intersections and quotients."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from qetale.exceptions import DomainError
from qetale.logger import get_logger
from qetale.mpoly import MPoly, PolyRing
from qetale.zerodim import GroebnerBasis, buchberger

logger = get_logger(__name__)

_GB_CACHE: Dict[Tuple[PolyRing, Tuple[MPoly, ...]], GroebnerBasis] = {}
_RADICAL_CACHE: Dict[Tuple[MPoly, Tuple[MPoly, ...]], bool] = {}
_CACHE_LIMIT = 4096


def clear_caches() -> None:
    _GB_CACHE.clear()
    _RADICAL_CACHE.clear()


def _key(polys: Iterable[MPoly]) -> Tuple[MPoly, ...]:
    return tuple(p.primitive() for p in polys if not p.is_zero)


def _remember(cache: dict, key, value) -> None:
    if len(cache) >= _CACHE_LIMIT:
        cache.clear()
    cache[key] = value


def groebner(polys: Sequence[MPoly], ring: Optional[PolyRing] = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``polys`` in ``ring``; results are cached."""
    if ring is None:
        if not polys:
            raise DomainError("groebner needs a ring for an empty generator list")
        ring = polys[0].ring
    gens = tuple(p.set_ring(ring) for p in polys)
    key = (ring, _key(gens))
    gb = _GB_CACHE.get(key)
    if gb is None:
        gb = buchberger(key[1], ring)
        _remember(_GB_CACHE, key, gb)
    return gb


def radical_member(f: MPoly, ideal: Sequence[MPoly]) -> bool:
    """Whether ``f`` vanishes on every complex point of ``V(ideal)``.

    Decided with a fresh variable ``t``: ``f`` lies in the radical exactly
    when ``ideal + <1 - t*f>`` is the unit ideal.
    """
    ring = f.ring
    if f.is_zero:
        return True
    ideal = [g.set_ring(ring) for g in ideal]
    key = (f.primitive(), _key(ideal))
    cached = _RADICAL_CACHE.get(key)
    if cached is not None:
        logger.debug("radical membership cache hit for %s", f)
        return cached
    result = _radical_member(f, ideal, ring)
    _remember(_RADICAL_CACHE, key, result)
    return result


def _radical_member(f: MPoly, ideal: List[MPoly], ring: PolyRing) -> bool:
    if f.is_constant():
        return groebner(ideal, ring).is_unit if ideal else False
    if not ideal:
        return False
    gb = groebner(ideal, ring)
    if gb.is_unit or gb.contains(f):
        return True
    t = ring.fresh_name("t")
    ext = PolyRing(ring.gens + (t,), ring.order, ring.domain)
    rab = ext.one - ext.gen(t) * f.set_ring(ext)
    return groebner([g.set_ring(ext) for g in ideal] + [rab], ext).is_unit


def vanishes_on(f: MPoly, equations: Sequence[MPoly], avoid: Optional[MPoly] = None) -> bool:
    """Whether ``f`` vanishes on ``V(equations)`` outside ``V(avoid)``."""
    if avoid is not None and not avoid.is_constant():
        f = f * avoid.set_ring(f.ring)
    return radical_member(f, equations)


def _elimination_ring(ring: PolyRing) -> Tuple[PolyRing, str]:
    t = ring.fresh_name("t")
    return PolyRing((t,) + ring.gens, "lex", ring.domain), t


def ideal_intersection(a: Sequence[MPoly], b: Sequence[MPoly], ring: PolyRing) -> List[MPoly]:
    """Generators of ``a ∩ b``, eliminating ``t`` from ``t*a + (1-t)*b``."""
    ext, t = _elimination_ring(ring)
    tt = ext.gen(t)
    gens = [tt * p.set_ring(ext) for p in a] + [(ext.one - tt) * p.set_ring(ext) for p in b]
    gb = groebner(gens, ext)
    t_index = ext.index(t)
    out = [g for g in gb.generators if all(m[t_index] == 0 for m in g.terms)]
    return [g.set_ring(ring) for g in out]


def ideal_quotient(ideal: Sequence[MPoly], f: MPoly) -> List[MPoly]:
    """Generators of ``ideal : f``.

    Raises:
        DomainError: If ``f`` is zero.
    """
    if f.is_zero:
        raise DomainError("ideal quotient by the zero polynomial")
    ring = f.ring
    if f.is_constant():
        return [g.set_ring(ring) for g in ideal]
    return [g.exact_divide(f) for g in ideal_intersection(ideal, [f], ring)]


def regular_on(num: MPoly, den: MPoly, equations: Sequence[MPoly], avoid: MPoly) -> bool:
    """Whether ``num/den`` agrees with a function regular on ``V(equations) \\ V(avoid)``.

    The admissible denominators form ``(equations + <den>) : num``; the
    fraction is regular on the locus when their common zeros avoid it.
    """
    ring = num.ring
    if den.is_constant() or num.is_zero:
        return True
    equations = [g.set_ring(ring) for g in equations]
    if vanishes_on(ring.one, list(equations) + [den], avoid):
        return True
    good = ideal_quotient(list(equations) + [den], num)
    return radical_member(avoid.set_ring(ring), list(equations) + good)
