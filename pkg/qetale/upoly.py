"""Dense univariate polynomials over a pluggable coefficient domain."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from qetale.domains import QQ, Domain, PolynomialDomain
from qetale.exceptions import DomainError, NotDivisible, PreconditionError
from qetale.mpoly import MPoly


class UPoly:
    """Coefficients ``c_0 ... c_p`` lowest degree first, trailing zeros trimmed."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, coeffs: Iterable[Any], domain: Domain = QQ) -> None:
        self.domain = domain
        cs = [domain.convert(c) if isinstance(c, (int, Fraction)) else c for c in coeffs]
        while cs and domain.is_zero(cs[-1]):
            cs.pop()
        self.coeffs: Tuple[Any, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: Any, domain: Domain = QQ) -> "UPoly":
        return cls([domain.zero] * degree + [coeff], domain)

    @classmethod
    def constant(cls, value: Any, domain: Domain = QQ) -> "UPoly":
        return cls([value], domain)

    @classmethod
    def x(cls, domain: Domain = QQ) -> "UPoly":
        return cls([domain.zero, domain.one], domain)

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Any:
        return self.coeffs[-1] if self.coeffs else self.domain.zero

    def coefficient(self, i: int) -> Any:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.domain.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.domain.is_one(self.coeffs[-1])

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other: Any) -> "UPoly":
        if isinstance(other, UPoly):
            if other.domain != self.domain:
                raise DomainError(f"domain mismatch: {self.domain!r} vs {other.domain!r}")
            return other
        return UPoly([self.domain.convert(other)], self.domain)

    def __add__(self, other: Any) -> "UPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(out, self.domain)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs], self.domain)

    def __sub__(self, other: Any) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "UPoly":
        if not isinstance(other, UPoly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UPoly([], self.domain)
        out: List[Any] = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if self.domain.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                t = a * b
                k = i + j
                out[k] = t if out[k] is None else out[k] + t
        zero = self.domain.zero
        return UPoly([zero if c is None else c for c in out], self.domain)

    def __rmul__(self, other: Any) -> "UPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "UPoly":
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result = UPoly([self.domain.one], self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Any) -> "UPoly":
        c = self.domain.convert(c) if isinstance(c, (int, Fraction)) else c
        return UPoly([a * c for a in self.coeffs], self.domain)

    def exquo_scalar(self, c: Any) -> "UPoly":
        """Divide every coefficient exactly by ``c``."""
        dom = self.domain
        c = dom.convert(c) if isinstance(c, (int, Fraction)) else c
        if dom.is_one(c):
            return self
        return UPoly([dom.exquo(a, c) for a in self.coeffs], dom)

    def map(self, fn: Callable[[Any], Any], domain: Optional[Domain] = None) -> "UPoly":
        return UPoly([fn(c) for c in self.coeffs], self.domain if domain is None else domain)

    def canonical(self) -> "UPoly":
        return self.map(self.domain.canonical)

    def derivative(self) -> "UPoly":
        dom = self.domain
        return UPoly([c * dom.convert(i) for i, c in enumerate(self.coeffs) if i], dom)

    def evaluate(self, x: Any) -> Any:
        """Horner evaluation; ``x`` may be any object closed under ``+`` and ``*``."""
        if not self.coeffs:
            return self.domain.zero
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    # -- division ------------------------------------------------------------

    def prem(self, other: "UPoly") -> "UPoly":
        """Pseudo-remainder ``lc(other)^(deg self - deg other + 1) * self mod other``."""
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("pseudo-remainder by zero polynomial")
        db = other.degree
        if self.degree < db:
            return self
        lb = other.lc
        e = self.degree - db + 1
        r = self
        while not r.is_zero and r.degree >= db:
            t = UPoly.monomial(r.degree - db, r.lc, self.domain)
            r = r.scale(lb) - t * other
            e -= 1
        if e:
            r = r.scale(lb**e)
        return r

    def divmod(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        """Euclidean division; needs a field or a divisor with unit leading coefficient."""
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        dom = self.domain
        if not dom.is_field and not dom.is_one(other.lc):
            raise PreconditionError("divmod needs a field or a monic divisor")
        db = other.degree
        lb = other.lc
        rem = list(self.coeffs)
        quo = [dom.zero] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if dom.is_zero(c):
                continue
            q = c if dom.is_one(lb) else dom.exquo(c, lb)
            quo[k - db] = q
            for i, b in enumerate(other.coeffs):
                rem[k - db + i] = rem[k - db + i] - q * b
        return UPoly(quo, dom), UPoly(rem[:db], dom)

    def __mod__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[0]

    def exact_quotient(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise NotDivisible(f"{self} is not divisible by {other}")
        return q

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        return self.exquo_scalar(self.lc)

    def gcd(self, other: "UPoly") -> "UPoly":
        """Monic gcd over a field (zero for two zero inputs)."""
        if not self.domain.is_field:
            raise PreconditionError("UPoly.gcd needs a coefficient field")
        a, b = self, self._coerce(other)
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> "UPoly":
        if self.is_zero:
            raise PreconditionError("square-free part of the zero polynomial")
        g = self.gcd(self.derivative())
        return self.exact_quotient(g).monic()

    # -- comparison and text ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UPoly):
            return self.domain == other.domain and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if self.domain.is_zero(c):
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            text = self.domain.to_str(c)
            if not mono:
                parts.append(f"({text})")
            elif self.domain.is_one(c):
                parts.append(mono)
            else:
                parts.append(f"({text})*{mono}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"UPoly({self.format()!r})"


@dataclass(frozen=True)
class Specialized:
    """Result of :func:`specialize`."""

    value: Union[MPoly, UPoly]
    degree_dropped: bool = False


def specialize(f: Union[MPoly, UPoly], assignment: Mapping[str, Any]) -> Specialized:
    """Substitute rational values for parameters.

    For a :class:`UPoly` over a polynomial domain the coefficients are
    specialized; when no coefficient variable survives the result is a
    ``UPoly`` over ``QQ``. ``degree_dropped`` reports a vanished leading
    coefficient.

    Raises:
        DomainError: If the assignment names an unknown variable.
    """
    if isinstance(f, MPoly):
        return Specialized(f.specialize(assignment))
    if not isinstance(f.domain, PolynomialDomain):
        raise DomainError("specialize expects a UPoly over a polynomial domain")
    ring = f.domain.ring
    for name in assignment:
        ring.index(name)
    coeffs = [c.specialize(assignment) for c in f.coeffs]
    if all(c.is_constant() for c in coeffs):
        result = UPoly([c.constant_value() for c in coeffs], QQ)
    else:
        result = UPoly(coeffs, f.domain)
    return Specialized(result, degree_dropped=result.degree < f.degree)


def lift_to_domain(f: UPoly, domain: Domain) -> UPoly:
    """Convert every coefficient into ``domain``."""
    return UPoly([domain.convert(c) for c in f.coeffs], domain)


def poly_from_roots(roots: Sequence[Fraction]) -> UPoly:
    result = UPoly([Fraction(1)])
    for r in roots:
        result = result * UPoly([-Fraction(r), Fraction(1)])
    return result
