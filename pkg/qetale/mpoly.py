"""Sparse multivariate polynomials over an ordered variable list."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
)

from qetale.domains import QQ, Domain, PolynomialDomain
from qetale.exceptions import DomainError, NotDivisible

if TYPE_CHECKING:
    from qetale.upoly import UPoly

Monomial = Tuple[int, ...]

ORDERS = ("grevlex", "lex")


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Return ``a / b`` or ``None`` when ``b`` does not divide ``a``."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _grevlex_key(m: Monomial) -> Tuple[int, Tuple[int, ...]]:
    return sum(m), tuple(-e for e in reversed(m))


def _lex_key(m: Monomial) -> Monomial:
    return m


class PolyRing:
    """An ordered variable list, a monomial order and a coefficient domain."""

    __slots__ = ("gens", "order", "domain", "key", "_index", "_hash")

    def __init__(self, gens: Iterable[str], order: str = "grevlex", domain: Domain = QQ) -> None:
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise DomainError(f"duplicate variable names in {gens}")
        if order not in ORDERS:
            raise DomainError(f"unknown monomial order {order!r}")
        self.gens = gens
        self.order = order
        self.domain = domain
        self.key: Callable[[Monomial], Any] = _grevlex_key if order == "grevlex" else _lex_key
        self._index = {name: i for i, name in enumerate(gens)}
        self._hash = hash((gens, order, domain))

    @property
    def nvars(self) -> int:
        return len(self.gens)

    @property
    def zero_monomial(self) -> Monomial:
        return (0,) * len(self.gens)

    @property
    def zero(self) -> "MPoly":
        return MPoly(self, {})

    @property
    def one(self) -> "MPoly":
        return MPoly(self, {self.zero_monomial: self.domain.one})

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown variable {name!r} (ring variables: {', '.join(self.gens)})") from None

    def gen(self, name: str) -> "MPoly":
        exps = [0] * len(self.gens)
        exps[self.index(name)] = 1
        return MPoly(self, {tuple(exps): self.domain.one})

    def monomial(self, m: Monomial, coeff: Any = None) -> "MPoly":
        c = self.domain.one if coeff is None else self.domain.convert(coeff)
        if self.domain.is_zero(c):
            return self.zero
        return MPoly(self, {tuple(m): c})

    def constant(self, value: Any) -> "MPoly":
        return self.monomial(self.zero_monomial, value)

    def convert(self, value: Any) -> "MPoly":
        if isinstance(value, MPoly):
            if value.ring == self:
                return value
            return value.set_ring(self)
        return self.constant(value)

    def from_dict(self, terms: Mapping[Monomial, Any]) -> "MPoly":
        dom = self.domain
        clean: Dict[Monomial, Any] = {}
        for m, c in terms.items():
            c = dom.convert(c)
            if not dom.is_zero(c):
                clean[tuple(m)] = c
        return MPoly(self, clean)

    def with_gens(self, gens: Iterable[str]) -> "PolyRing":
        return PolyRing(gens, self.order, self.domain)

    def with_order(self, order: str) -> "PolyRing":
        return PolyRing(self.gens, order, self.domain)

    def with_domain(self, domain: Domain) -> "PolyRing":
        return PolyRing(self.gens, self.order, domain)

    def fresh_name(self, stem: str = "t") -> str:
        """Return a variable name not used by this ring."""
        name = stem
        k = 0
        while name in self._index:
            k += 1
            name = f"{stem}{k}"
        return name

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, PolyRing)
            and other.gens == self.gens
            and other.order == self.order
            and other.domain == self.domain
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PolyRing({list(self.gens)}, {self.order}, {self.domain!r})"


class MPoly:
    """A polynomial as a map from exponent tuples to nonzero coefficients.

    Instances are immutable; arithmetic returns new objects. Iteration order of
    :meth:`sorted_terms` is descending in the ring's monomial order.
    """

    __slots__ = ("ring", "terms", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, Any]) -> None:
        self.ring = ring
        self.terms = terms
        self._sorted: Optional[List[Tuple[Monomial, Any]]] = None
        self._hash: Optional[int] = None

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zm = self.ring.zero_monomial
        return all(m == zm for m in self.terms)

    def constant_value(self) -> Any:
        return self.terms.get(self.ring.zero_monomial, self.ring.domain.zero)

    def sorted_terms(self) -> List[Tuple[Monomial, Any]]:
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    @property
    def LM(self) -> Monomial:
        if not self.terms:
            raise DomainError("zero polynomial has no leading monomial")
        return self.sorted_terms()[0][0]

    @property
    def LC(self) -> Any:
        if not self.terms:
            return self.ring.domain.zero
        return self.sorted_terms()[0][1]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Any]]:
        return iter(self.sorted_terms())

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree(self, var: str) -> int:
        i = self.ring.index(var)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def variables(self) -> Set[int]:
        """Indices of the variables that occur."""
        used: Set[int] = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def variable_names(self) -> List[str]:
        return [self.ring.gens[i] for i in sorted(self.variables())]

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other: Any) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise DomainError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.constant(other)

    @staticmethod
    def _foreign(other: Any) -> bool:
        # containers built on top of MPoly handle mixed arithmetic themselves
        return hasattr(other, "coeffs") or hasattr(other, "rows") or hasattr(other, "den")

    def __add__(self, other: Any) -> "MPoly":
        if self._foreign(other):
            return NotImplemented
        other = self._coerce(other)
        dom = self.ring.domain
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = c
            else:
                v = v + c
                if dom.is_zero(v):
                    del terms[m]
                else:
                    terms[m] = v
        return MPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "MPoly":
        if self._foreign(other):
            return NotImplemented
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        dom = self.ring.domain
        terms: Dict[Monomial, Any] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = terms.get(m)
                terms[m] = c1 * c2 if v is None else v + c1 * c2
        return MPoly(self.ring, {m: c for m, c in terms.items() if not dom.is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"exponent must be a non-negative integer, got {n!r}")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Any) -> "MPoly":
        dom = self.ring.domain
        c = dom.convert(c)
        if dom.is_zero(c):
            return self.ring.zero
        terms = {m: v * c for m, v in self.terms.items()}
        return MPoly(self.ring, {m: v for m, v in terms.items() if not dom.is_zero(v)})

    def mul_term(self, mono: Monomial, c: Any) -> "MPoly":
        dom = self.ring.domain
        return MPoly(
            self.ring,
            {monomial_mul(m, mono): v * c for m, v in self.terms.items() if not dom.is_zero(v * c)},
        )

    def map_coeffs(self, fn: Callable[[Any], Any], ring: Optional[PolyRing] = None) -> "MPoly":
        ring = self.ring if ring is None else ring
        dom = ring.domain
        terms = {m: fn(c) for m, c in self.terms.items()}
        return MPoly(ring, {m: c for m, c in terms.items() if not dom.is_zero(c)})

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.gens, frozenset(self.terms.items())))
        return self._hash

    # -- division ------------------------------------------------------------

    def exact_divide(self, b: "MPoly") -> "MPoly":
        """Return ``q`` with ``self == b * q``.

        Raises:
            ZeroDivisionError: If ``b`` is zero.
            NotDivisible: If the division leaves a remainder.
        """
        b = self._coerce(b)
        if b.is_zero:
            raise ZeroDivisionError("exact_divide by the zero polynomial")
        ring = self.ring
        dom = ring.domain
        key = ring.key
        blm, blc = b.LM, b.LC
        rest = [(m, c) for m, c in b.terms.items() if m != blm]
        r = dict(self.terms)
        q: Dict[Monomial, Any] = {}
        while r:
            m = max(r, key=key)
            qm = monomial_div(m, blm)
            if qm is None:
                raise NotDivisible(f"{self} is not divisible by {b}")
            c = dom.exquo(r.pop(m), blc)
            q[qm] = c
            for bm, bc in rest:
                t = monomial_mul(bm, qm)
                v = r.get(t, dom.zero) - c * bc
                if dom.is_zero(v):
                    r.pop(t, None)
                else:
                    r[t] = v
        return MPoly(ring, q)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.exact_divide(self)
        except NotDivisible:
            return False
        return True

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        dom = self.ring.domain
        lc = self.LC
        if dom.is_one(lc):
            return self
        return MPoly(self.ring, {m: dom.exquo(c, lc) for m, c in self.terms.items()})

    def content_and_primitive(self) -> Tuple[Fraction, "MPoly"]:
        """Split ``self = c * p`` with ``p`` integral, coprime and positive-leading.

        Only meaningful over ``QQ``.
        """
        if not self.terms:
            return Fraction(0), self
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        if self.LC < 0:
            content = -content
        if content == 1:
            return content, self
        return content, MPoly(self.ring, {m: c / content for m, c in self.terms.items()})

    def primitive(self) -> "MPoly":
        return self.content_and_primitive()[1]

    # -- calculus and substitution ------------------------------------------

    def derivative(self, var: str) -> "MPoly":
        i = self.ring.index(var)
        dom = self.ring.domain
        terms: Dict[Monomial, Any] = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                dm = m[:i] + (e - 1,) + m[i + 1 :]
                terms[dm] = c * dom.convert(e)
        return MPoly(self.ring, terms)

    def specialize(self, assignment: Mapping[str, Any]) -> "MPoly":
        """Substitute rational values for some variables.

        Raises:
            DomainError: If the assignment names an unknown variable.
        """
        ring = self.ring
        dom = ring.domain
        slots = [(ring.index(name), dom.convert(value)) for name, value in assignment.items()]
        if not slots:
            return self
        terms: Dict[Monomial, Any] = {}
        for m, c in self.terms.items():
            exps = list(m)
            for i, value in slots:
                e = exps[i]
                if e:
                    c = c * value**e
                    exps[i] = 0
            key = tuple(exps)
            v = terms.get(key)
            terms[key] = c if v is None else v + c
        return MPoly(ring, {m: c for m, c in terms.items() if not dom.is_zero(c)})

    def evaluate(self, point: Mapping[str, Any]) -> Any:
        """Evaluate at a point assigning every occurring variable."""
        value = self.specialize(point)
        if not value.is_constant():
            missing = ", ".join(value.variable_names())
            raise DomainError(f"evaluation point leaves variables unassigned: {missing}")
        return value.constant_value()

    def compose(self, images: Mapping[str, Any], one: Any) -> Any:
        """Evaluate with variables replaced by arbitrary ring elements.

        ``images`` maps every occurring variable to an element supporting
        ``+``, ``*`` and ``**``; ``one`` is that ring's unit.
        """
        total = None
        powers: Dict[Tuple[int, int], Any] = {}
        for m, c in self.terms.items():
            term = one * c
            for i, e in enumerate(m):
                if e:
                    p = powers.get((i, e))
                    if p is None:
                        p = images[self.ring.gens[i]] ** e
                        powers[(i, e)] = p
                    term = term * p
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def set_ring(self, ring: PolyRing) -> "MPoly":
        """Re-embed into another ring by matching variable names."""
        if ring == self.ring:
            return self
        positions = []
        for i, name in enumerate(self.ring.gens):
            positions.append(ring._index.get(name))
        dom = ring.domain
        terms: Dict[Monomial, Any] = {}
        for m, c in self.terms.items():
            exps = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    j = positions[i]
                    if j is None:
                        raise DomainError(
                            f"variable {self.ring.gens[i]!r} does not exist in target ring {ring!r}"
                        )
                    exps[j] = e
            terms[tuple(exps)] = dom.convert(c)
        return MPoly(ring, {m: c for m, c in terms.items() if not dom.is_zero(c)})

    # -- univariate views ----------------------------------------------------

    def to_univariate(self, var: str) -> "UPoly":
        """View as a polynomial in ``var`` with coefficients in the same ring."""
        from qetale.upoly import UPoly

        i = self.ring.index(var)
        buckets: Dict[int, Dict[Monomial, Any]] = {}
        for m, c in self.terms.items():
            e = m[i]
            buckets.setdefault(e, {})[m[:i] + (0,) + m[i + 1 :]] = c
        top = max(buckets) if buckets else -1
        coeffs = [MPoly(self.ring, buckets.get(k, {})) for k in range(top + 1)]
        return UPoly(coeffs, PolynomialDomain(self.ring))

    @classmethod
    def from_univariate(cls, up: "UPoly", var: str) -> "MPoly":
        ring = up.domain.ring
        x = ring.gen(var)
        result = ring.zero
        power = ring.one
        for c in up.coeffs:
            if not c.is_zero:
                result = result + c * power
            power = power * x
        return result

    # -- text ----------------------------------------------------------------

    def __str__(self) -> str:
        from qetale.exprio import print_poly

        return print_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({str(self)!r})"
