"""Conversions to and from sympy, used for factorization over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from sympy import Poly, Rational, factor_list, symbols
from sympy.polys.domains import QQ as SYMPY_QQ

from qetale.mpoly import MPoly, PolyRing
from qetale.upoly import UPoly


def _to_rational(c: Fraction) -> Rational:
    return Rational(c.numerator, c.denominator)


def _from_rational(c: object) -> Fraction:
    r = Rational(c)
    return Fraction(int(r.p), int(r.q))


def to_sympy(f: MPoly) -> Poly:
    """Return ``f`` as a sympy ``Poly`` over ``QQ`` in the ring's generators."""
    gens = symbols(list(f.ring.gens))
    terms = {m: _to_rational(Fraction(c)) for m, c in f.terms.items()}
    if not terms:
        terms = {f.ring.zero_monomial: Rational(0)}
    return Poly.from_dict(terms, *gens, domain=SYMPY_QQ)


def from_sympy(p: Poly, ring: PolyRing) -> MPoly:
    """Convert a sympy ``Poly`` whose generators are a subset of the ring's."""
    names = [str(g) for g in p.gens]
    positions = [ring.index(n) for n in names]
    terms = {}
    for m, c in p.terms():
        exps = [0] * ring.nvars
        for pos, e in zip(positions, m):
            exps[pos] = e
        terms[tuple(exps)] = _from_rational(c)
    return ring.from_dict(terms)


def upoly_to_sympy(f: UPoly, var: str = "lam") -> Poly:
    x = symbols(var)
    coeffs = [_to_rational(Fraction(c)) for c in reversed(f.coeffs)] or [Rational(0)]
    return Poly(coeffs, x, domain=SYMPY_QQ)


def upoly_from_sympy(p: Poly) -> UPoly:
    return UPoly([_from_rational(c) for c in reversed(p.all_coeffs())])


def factor_upoly(f: UPoly) -> List[Tuple[UPoly, int]]:
    """Monic irreducible factors of ``f`` over Q with multiplicities, sorted by degree then coefficients."""
    if f.degree < 1:
        return []
    _, factors = factor_list(upoly_to_sympy(f))
    out = [(upoly_from_sympy(p).monic(), int(k)) for p, k in factors]
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def rational_roots(f: UPoly) -> List[Fraction]:
    """Distinct rational roots of a univariate polynomial over Q, ascending."""
    roots = []
    for factor, _ in factor_upoly(f):
        if factor.degree == 1:
            roots.append(-factor.coeffs[0])
    return sorted(roots)
