"""Rational functions ``num / den`` over a polynomial ring with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping, Optional

from qetale.config import get_settings
from qetale.exceptions import DomainError
from qetale.mpoly import MPoly, PolyRing


class RatFun:
    """A fraction of two polynomials.

    The denominator is kept primitive with positive leading coefficient. Common
    factors are cancelled lazily, once the representation grows past
    ``Settings.ratfun_reduce_terms`` terms; equality always cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Optional[MPoly] = None, *, reduce: bool = False) -> None:
        if den is None:
            den = num.ring.one
        elif den.ring != num.ring:
            raise DomainError("numerator and denominator live in different rings")
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            den = num.ring.one
        elif den.is_constant():
            c = den.constant_value()
            if c != 1:
                num = num.scale(1 / c)
            den = num.ring.one
        else:
            content, prim = den.content_and_primitive()
            if content != 1:
                num = num.scale(1 / content)
                den = prim
            if num == den:
                num = den = num.ring.one
        self.num = num
        self.den = den
        if reduce or len(num) + len(den) > get_settings().ratfun_reduce_terms:
            self._cancel()

    def _cancel(self) -> None:
        if self.den.is_constant() or self.num.is_zero:
            return
        from qetale.gcd import mv_gcd

        g = mv_gcd(self.num, self.den)
        if g.is_constant():
            return
        num = self.num.exact_divide(g)
        den = self.den.exact_divide(g)
        if den.is_constant():
            num = num.scale(1 / den.constant_value())
            den = den.ring.one
        else:
            content, den = den.content_and_primitive()
            num = num.scale(1 / content)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, ring: PolyRing, value: Any) -> "RatFun":
        return cls(ring.constant(value))

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def reduced(self) -> "RatFun":
        return RatFun(self.num, self.den, reduce=True)

    def _coerce(self, other: Any) -> "RatFun":
        if isinstance(other, RatFun):
            if other.ring != self.ring:
                raise DomainError("rational functions over different rings")
            return other
        if isinstance(other, MPoly):
            return RatFun(other)
        return RatFun(self.ring.constant(other))

    def __add__(self, other: Any) -> "RatFun":
        other = self._coerce(other)
        if other.num.is_zero:
            return self
        if self.num.is_zero:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other: Any) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "RatFun":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "RatFun":
        other = self._coerce(other)
        if self.num.is_zero or other.num.is_zero:
            return RatFun(self.ring.zero)
        if self.den == other.num and other.den == self.num:
            return RatFun(self.ring.one)
        if self.den == other.num:
            return RatFun(self.num, other.den)
        if other.den == self.num:
            return RatFun(other.num, self.den)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RatFun":
        other = self._coerce(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatFun(other.den, other.num)

    def __rtruediv__(self, other: Any) -> "RatFun":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            return RatFun(self.den, self.num) ** (-n)
        return RatFun(self.num**n, self.den**n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (RatFun, MPoly, int, Fraction)):
            other = self._coerce(other)
            return self.num * other.den == other.num * self.den
        return NotImplemented

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        r = self.reduced()
        return hash((r.num, r.den))

    def evaluate(self, point: Mapping[str, Any]) -> Fraction:
        """Evaluate at a rational point.

        Raises:
            ZeroDivisionError: If the denominator vanishes at the point.
        """
        den = self.den.evaluate(point)
        if not den:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {dict(point)}")
        return Fraction(self.num.evaluate(point)) / den

    def specialize(self, assignment: Mapping[str, Any]) -> "RatFun":
        den = self.den.specialize(assignment)
        if den.is_zero:
            raise ZeroDivisionError(f"denominator {self.den} vanishes under {dict(assignment)}")
        return RatFun(self.num.specialize(assignment), den)

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFun({str(self)!r})"
