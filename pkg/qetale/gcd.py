"""Multivariate gcd over QQ by recursive primitive remainder sequences.

The polynomial is viewed in its highest occurring variable with coefficients in
the same ring; contents are handled recursively and the primitive parts go
through the subresultant chain, whose first nonvanishing principal coefficient
marks the gcd.
"""

from __future__ import annotations

from qetale.domains import PolynomialDomain
from qetale.exceptions import DomainError
from qetale.mpoly import MPoly
from qetale.upoly import UPoly


def mv_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Return ``gcd(a, b)`` with integral coprime coefficients and positive leading coefficient.

    Raises:
        DomainError: If the operands live in different rings.
    """
    if a.ring != b.ring:
        raise DomainError("mv_gcd operands live in different rings")
    if a.is_zero:
        return b.primitive()
    if b.is_zero:
        return a.primitive()
    return _gcd(a, b).primitive()


def _gcd(a: MPoly, b: MPoly) -> MPoly:
    ring = a.ring
    va, vb = a.variables(), b.variables()
    if not va or not vb:
        return ring.one
    name = ring.gens[max(va | vb)]
    idx = ring.index(name)
    if idx not in va:
        return _gcd(a, content(b, name))
    if idx not in vb:
        return _gcd(content(a, name), b)

    ua, ub = a.to_univariate(name), b.to_univariate(name)
    ca, cb = _upoly_content(ua), _upoly_content(ub)
    pa, pb = ua.exquo_scalar(ca), ub.exquo_scalar(cb)
    c = _gcd(ca, cb)
    g = _primitive_gcd(pa, pb)
    return (c * MPoly.from_univariate(g, name)).primitive()


def content(f: MPoly, var: str) -> MPoly:
    """gcd of the coefficients of ``f`` viewed as a polynomial in ``var``."""
    return _upoly_content(f.to_univariate(var))


def _upoly_content(u: UPoly) -> MPoly:
    ring = u.domain.ring
    acc = ring.zero
    for c in u.coeffs:
        if c.is_zero:
            continue
        if acc.is_zero:
            acc = c.primitive()
        else:
            acc = _gcd(acc, c).primitive()
        if acc.is_constant():
            return ring.one
    return acc if not acc.is_zero else ring.one


def _primitive_part(u: UPoly) -> UPoly:
    return u.exquo_scalar(_upoly_content(u))


def _primitive_gcd(pa: UPoly, pb: UPoly) -> UPoly:
    from qetale.subresultant import sres_chain

    dom: PolynomialDomain = pa.domain
    if pa.degree < pb.degree:
        pa, pb = pb, pa
    while True:
        if pb.degree == 0:
            return UPoly([dom.one], dom)
        if pa.degree > pb.degree:
            break
        # equal degrees: reduce once so the pair is properly oriented
        r = pa.prem(pb)
        if r.is_zero:
            return pb
        pa, pb = pb, _primitive_part(r)
    chain = sres_chain(pa, pb)
    for j, coeff in enumerate(chain.coeffs):
        if not coeff.is_zero:
            return _primitive_part(chain.polys[j])
    return pb


def squarefree_part(f: MPoly) -> MPoly:
    """Product of the distinct irreducible factors of ``f``, made primitive."""
    if f.is_constant():
        return f.ring.one if not f.is_zero else f
    g = f
    for name in f.variable_names():
        g = mv_gcd(g, f.derivative(name))
        if g.is_constant():
            return f.primitive()
    return f.exact_divide(g).primitive()
