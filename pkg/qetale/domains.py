"""Coefficient domains.

A domain tells the polynomial containers how to build constants, how to test
for zero and how to divide exactly. Elements themselves are plain Python
objects supporting ``+``, ``-``, ``*`` and ``**``: :class:`fractions.Fraction`
for ``QQ``, :class:`~qetale.mpoly.MPoly` for polynomial domains and
:class:`~qetale.ratfun.RatFun` for rational function fields.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, Optional, Tuple

if TYPE_CHECKING:
    from qetale.mpoly import MPoly, PolyRing
    from qetale.ratfun import RatFun


class Domain:
    """Interface shared by all coefficient domains."""

    is_field: bool = False
    #: True when structural zero and semantic zero coincide.
    exact_zero: bool = True

    @property
    def zero(self) -> Any:
        raise NotImplementedError

    @property
    def one(self) -> Any:
        raise NotImplementedError

    def convert(self, value: Any) -> Any:
        raise NotImplementedError

    def is_zero(self, a: Any) -> bool:
        raise NotImplementedError

    def vanishes(self, a: Any) -> bool:
        """Semantic zero test; differs from ``is_zero`` only modulo an ideal."""
        return self.is_zero(a)

    def is_one(self, a: Any) -> bool:
        return a == self.one

    def exquo(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def canonical(self, a: Any) -> Any:
        return a

    def to_str(self, a: Any) -> str:
        return str(a)


class RationalField(Domain):
    """The field of rational numbers."""

    is_field = True

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def convert(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if hasattr(value, "is_constant") and value.is_constant():
            return Fraction(value.constant_value())
        return Fraction(value)

    def is_zero(self, a: Fraction) -> bool:
        return not a

    def exquo(self, a: Fraction, b: Fraction) -> Fraction:
        if not b:
            raise ZeroDivisionError("division by zero in QQ")
        return Fraction(a) / b

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


class PolynomialDomain(Domain):
    """Polynomials of a :class:`PolyRing` used as coefficients."""

    def __init__(self, ring: "PolyRing") -> None:
        self.ring = ring

    @property
    def zero(self) -> "MPoly":
        return self.ring.zero

    @property
    def one(self) -> "MPoly":
        return self.ring.one

    def convert(self, value: Any) -> "MPoly":
        return self.ring.convert(value)

    def is_zero(self, a: "MPoly") -> bool:
        return a.is_zero

    def exquo(self, a: "MPoly", b: "MPoly") -> "MPoly":
        return a.exact_divide(b)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolynomialDomain) and other.ring == self.ring

    def __hash__(self) -> int:
        return hash(("poly", self.ring))

    def __repr__(self) -> str:
        return f"{self.ring!r}"


class RationalFunctionField(Domain):
    """Fractions of a polynomial ring, optionally restricted to a locus.

    With an empty ``modulus`` this is the plain field ``Q(params)``. With a
    modulus ``E`` and an ``avoid`` polynomial, an element counts as zero when
    its numerator vanishes on ``V(E) \\ V(avoid)``; numerators are kept reduced
    modulo a Groebner basis of ``E``.
    """

    is_field = True

    def __init__(
        self,
        ring: "PolyRing",
        modulus: Tuple["MPoly", ...] = (),
        avoid: Optional["MPoly"] = None,
    ) -> None:
        self.ring = ring
        self.modulus = tuple(modulus)
        self.avoid = ring.one if avoid is None else avoid
        self.exact_zero = not self.modulus
        self._vanish_cache: Dict["MPoly", bool] = {}
        self._basis: Optional[Tuple["MPoly", ...]] = None

    @property
    def zero(self) -> "RatFun":
        from qetale.ratfun import RatFun

        return RatFun(self.ring.zero)

    @property
    def one(self) -> "RatFun":
        from qetale.ratfun import RatFun

        return RatFun(self.ring.one)

    def convert(self, value: Any) -> "RatFun":
        from qetale.ratfun import RatFun

        if isinstance(value, RatFun):
            return value
        return RatFun(self.ring.convert(value))

    def is_zero(self, a: "RatFun") -> bool:
        return a.num.is_zero

    def vanishes(self, a: "RatFun") -> bool:
        if a.num.is_zero:
            return True
        if not self.modulus:
            return False
        num = a.num
        cached = self._vanish_cache.get(num)
        if cached is None:
            from qetale.ideals import vanishes_on

            cached = vanishes_on(num, self.modulus, self.avoid)
            self._vanish_cache[num] = cached
        return cached

    def is_one(self, a: "RatFun") -> bool:
        return a.num == a.den

    def exquo(self, a: "RatFun", b: "RatFun") -> "RatFun":
        return a / b

    def modulus_basis(self) -> Tuple["MPoly", ...]:
        if self._basis is None:
            from qetale.ideals import groebner

            self._basis = groebner(self.modulus, self.ring).generators if self.modulus else ()
        return self._basis

    def canonical(self, a: "RatFun") -> "RatFun":
        if not self.modulus or a.num.is_zero:
            return a
        from qetale.ratfun import RatFun
        from qetale.zerodim import normal_form

        num = normal_form(a.num, self.modulus_basis())
        if num == a.num:
            return a
        return RatFun(num, a.den)

    def to_str(self, a: "RatFun") -> str:
        return str(a)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalFunctionField)
            and other.ring == self.ring
            and other.modulus == self.modulus
            and other.avoid == self.avoid
        )

    def __hash__(self) -> int:
        return hash(("frac", self.ring, self.modulus))

    def __repr__(self) -> str:
        if not self.modulus:
            return f"Frac({self.ring!r})"
        return f"Frac({self.ring!r} / {len(self.modulus)} equations)"
