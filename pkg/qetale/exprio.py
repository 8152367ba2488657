"""Reading and writing polynomials and system definition files.

Expression grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' uint)?
    base   := name | integer | integer '/' integer | '(' expr ')'

Implicit multiplication is rejected. System files consist of the sections
``params:``, ``vars:``, ``base:``, ``system:`` and ``options:``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from qetale.domains import QQ, PolynomialDomain, RationalFunctionField
from qetale.exceptions import (
    BadExponent,
    DomainError,
    ParseError,
    SystemFileError,
    UnbalancedParentheses,
    UnknownVariable,
)
from qetale.mpoly import Monomial, MPoly, PolyRing
from qetale.upoly import UPoly

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
SECTIONS = ("params", "vars", "base", "system", "options")
_SECTION_RE = re.compile(r"^\s*(params|vars|base|system|options)\s*:(.*)$")
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t]+)"
    r"|(?P<dec>\d*\.\d*)"
    r"|(?P<rat>\d+/\d+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()/])"
)

#: Largest exponent accepted after '^'.
MAX_EXPONENT = 1000
#: Deepest nesting of parentheses and unary signs.
MAX_NESTING = 100

#: Name used for the univariate variable when printing lambda polynomials.
LAMBDA_NAME = "lam"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int, column: int) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column + pos)
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append(Token(kind, m.group(), column + pos))
        pos = m.end()
    tokens.append(Token("end", "", column + len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing, line: int, column: int) -> None:
        self.ring = ring
        self.line = line
        self.tokens = _tokenize(text, line, column)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _error(self, message: str, tok: Optional[Token] = None, cls: type = ParseError) -> ParseError:
        tok = tok or self.tok
        return cls(message, self.line, tok.column)

    def parse(self) -> MPoly:
        if self.tok.kind == "end":
            raise self._error("empty expression")
        result = self.expr()
        if self.tok.kind != "end":
            raise self._stray()
        return result

    def _stray(self) -> ParseError:
        tok = self.tok
        if tok.text == ")":
            return self._error("unbalanced ')'", cls=UnbalancedParentheses)
        if tok.kind in ("name", "int", "rat") or tok.text == "(":
            return self._error("implicit multiplication is not allowed; write '*'")
        if tok.text == "/":
            return self._error("division is not supported; write rationals as a/b literals")
        return self._error(f"unexpected {tok.text!r}")

    def expr(self) -> MPoly:
        acc = self.term()
        while self.tok.text in ("+", "-"):
            op = self._advance().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MPoly:
        acc = self.factor()
        while self.tok.text == "*":
            self._advance()
            acc = acc * self.factor()
        return acc

    def factor(self) -> MPoly:
        self.depth += 1
        try:
            return self._factor()
        finally:
            self.depth -= 1

    def _factor(self) -> MPoly:
        if self.depth > MAX_NESTING:
            raise self._error(f"expression nested deeper than {MAX_NESTING} levels")
        if self.tok.text == "-":
            self._advance()
            return -self.factor()
        if self.tok.text == "+":
            self._advance()
            return self.factor()
        value = self.base()
        if self.tok.text == "^":
            caret = self._advance()
            tok = self.tok
            if tok.kind == "int":
                if len(tok.text) > 6 or int(tok.text) > MAX_EXPONENT:
                    raise self._error(f"exponent {tok.text[:12]} exceeds {MAX_EXPONENT}", tok, BadExponent)
                self._advance()
                return value ** int(tok.text)
            if tok.text == "-":
                raise self._error("negative exponent", tok, BadExponent)
            if tok.kind in ("rat", "dec"):
                raise self._error("fractional exponent", tok, BadExponent)
            if tok.kind == "end":
                raise self._error("missing exponent after '^'", caret, BadExponent)
            raise self._error(f"exponent must be a non-negative integer, got {tok.text!r}", tok, BadExponent)
        return value

    def base(self) -> MPoly:
        tok = self.tok
        if tok.kind == "int":
            self._advance()
            return self.ring.constant(int(tok.text))
        if tok.kind == "rat":
            self._advance()
            num, den = tok.text.split("/")
            if int(den) == 0:
                raise self._error("zero denominator in rational literal", tok)
            return self.ring.constant(Fraction(int(num), int(den)))
        if tok.kind == "dec":
            raise self._error("decimal literals are not supported; write rationals as a/b", tok)
        if tok.kind == "name":
            self._advance()
            if tok.text not in self.ring.gens:
                raise self._error(
                    f"unknown variable {tok.text!r} (declared: {', '.join(self.ring.gens) or 'none'})",
                    tok,
                    UnknownVariable,
                )
            return self.ring.gen(tok.text)
        if tok.text == "(":
            self._advance()
            inner = self.expr()
            if self.tok.kind == "end":
                raise self._error(f"missing ')' for '(' at column {tok.column}", cls=UnbalancedParentheses)
            if self.tok.text != ")":
                raise self._stray()
            self._advance()
            return inner
        if tok.text == ")":
            raise self._error("unbalanced ')'", cls=UnbalancedParentheses)
        if tok.kind == "end":
            raise self._error("unexpected end of expression")
        raise self._error(f"unexpected {tok.text!r}")


def _as_ring(ambient: Union[PolyRing, Sequence[str]]) -> PolyRing:
    return ambient if isinstance(ambient, PolyRing) else PolyRing(ambient)


def parse_poly(
    text: str,
    ambient: Union[PolyRing, Sequence[str]],
    *,
    line: int = 1,
    column: int = 1,
) -> MPoly:
    """Parse ``text`` as a polynomial in the ambient variables.

    Args:
        text: Expression source.
        ambient: A ring or an ordered list of variable names (grevlex).
        line: Line number reported in diagnostics.
        column: Column of the first character of ``text``.

    Raises:
        UnknownVariable: For a name outside ``ambient``.
        BadExponent: For a negative, fractional or missing exponent.
        UnbalancedParentheses: For a missing ``(`` or ``)``.
        ParseError: For every other malformed input.
    """
    return _Parser(text, _as_ring(ambient), line, column).parse()


# -- printing -----------------------------------------------------------------


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m: Monomial, gens: Sequence[str]) -> str:
    parts = []
    for name, e in zip(gens, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _join_terms(terms: Iterable[Tuple[Fraction, str]]) -> str:
    out: List[str] = []
    for c, mono in terms:
        negative = c < 0
        a = -c if negative else c
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out) if out else "0"


def print_poly(f: MPoly) -> str:
    """Canonical text: descending monomial order, explicit ``*`` and ``^``."""
    gens = f.ring.gens
    return _join_terms((Fraction(c), _format_monomial(m, gens)) for m, c in f.sorted_terms())


def upoly_to_mpoly(f: UPoly, ring: PolyRing, var: str) -> MPoly:
    """Embed a UPoly over ``QQ`` or a polynomial domain into ``ring`` with variable ``var``."""
    x = ring.gen(var)
    result = ring.zero
    power = ring.one
    for c in f.coeffs:
        if isinstance(c, MPoly):
            result = result + c.set_ring(ring) * power
        else:
            result = result + power.scale(c)
        power = power * x
    return result


def split_upoly(f: UPoly) -> Tuple[UPoly, MPoly]:
    """Write a UPoly over a rational function field as ``num / D``.

    ``D`` is the least common multiple of the coefficient denominators, so
    the numerator is a UPoly over the polynomial domain of the same ring.
    """
    from qetale.gcd import mv_gcd

    dom = f.domain
    if not isinstance(dom, RationalFunctionField):
        raise DomainError("split_upoly expects rational function coefficients")
    ring = dom.ring
    den = ring.one
    for c in f.coeffs:
        if not c.den.is_constant():
            den = den * c.den.exact_divide(mv_gcd(den, c.den))
    coeffs = [c.num * den.exact_divide(c.den) for c in f.coeffs]
    return UPoly(coeffs, PolynomialDomain(ring)), den


def print_upoly(f: UPoly, var: str = LAMBDA_NAME) -> str:
    """Text for a univariate polynomial over ``QQ``, polynomials or rational functions."""
    dom = f.domain
    if dom == QQ:
        return _join_terms(
            (Fraction(f.coeffs[i]), "" if i == 0 else (var if i == 1 else f"{var}^{i}"))
            for i in range(f.degree, -1, -1)
            if f.coeffs[i]
        )
    if isinstance(dom, RationalFunctionField):
        num, den = split_upoly(f)
        text = print_upoly(num, var)
        if den.is_constant():
            return text
        return f"({text})/({print_poly(den)})"
    params = dom.ring
    name = params.fresh_name(var)
    ring = params.with_gens(params.gens + (name,))
    return print_poly(upoly_to_mpoly(f, ring, name))


def upoly_json(f: UPoly, var: str = LAMBDA_NAME) -> Union[str, Dict[str, str]]:
    """JSON value of a univariate polynomial; rational function data become ``{numerator, denominator}``."""
    if isinstance(f.domain, RationalFunctionField):
        num, den = split_upoly(f)
        return {"numerator": print_upoly(num, var), "denominator": print_poly(den)}
    return print_upoly(f, var)


# -- system files -------------------------------------------------------------


@dataclass(frozen=True)
class SystemFile:
    """A parsed system definition.

    ``base`` lives in the parameter ring, ``system`` in ``params + vars``.
    """

    params: Tuple[str, ...]
    vars: Tuple[str, ...]
    base: Tuple[MPoly, ...]
    system: Tuple[MPoly, ...]
    options: Dict[str, str] = field(default_factory=dict)

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.params + self.vars)

    @property
    def param_ring(self) -> PolyRing:
        return PolyRing(self.params)


def _split_names(text: str, lineno: int, section: str) -> List[str]:
    names = [n for n in re.split(r"[,\s]+", text.strip()) if n]
    for name in names:
        if not NAME_RE.fullmatch(name):
            raise SystemFileError(f"invalid name {name!r} in {section}: section", lineno)
    return names


def parse_system_file(text: str) -> SystemFile:
    """Parse a system definition.

    Example::

        params: p, q
        vars: x
        base:
          4*p^3 + 27*q^2
        system:
          x^3 + p*x + q

    Raises:
        SystemFileError: For structural problems (missing sections, name
            clashes, base equations mentioning fiber variables).
        ParseError: For malformed polynomials, positioned in the file.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    sections: Dict[str, List[Tuple[int, int, str]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        if not line.strip():
            continue
        m = _SECTION_RE.match(line)
        if m is not None:
            current = m.group(1)
            if current in sections:
                raise SystemFileError(f"duplicate section {current}:", lineno)
            sections[current] = []
            rest = m.group(2)
            if rest.strip():
                offset = m.start(2) + len(rest) - len(rest.lstrip())
                sections[current].append((lineno, offset + 1, rest.strip()))
            continue
        if current is None:
            raise SystemFileError("content outside of a section", lineno)
        stripped = line.strip()
        sections[current].append((lineno, len(line) - len(line.lstrip()) + 1, stripped))

    for required in ("vars", "system"):
        if required not in sections:
            raise SystemFileError(f"missing {required}: section")

    def names_of(section: str) -> List[str]:
        out: List[str] = []
        for lineno, _, body in sections.get(section, []):
            out.extend(_split_names(body, lineno, section))
        return out

    params = names_of("params")
    fiber_vars = names_of("vars")
    if not fiber_vars:
        first = sections["vars"][0][0] if sections["vars"] else None
        raise SystemFileError("vars: section declares no variables", first)
    seen: Dict[str, str] = {}
    for section, names in (("params", params), ("vars", fiber_vars)):
        for name in names:
            if name in seen:
                raise SystemFileError(f"{name!r} declared twice (in {seen[name]}: and {section}:)")
            seen[name] = section

    full = PolyRing(tuple(params) + tuple(fiber_vars))
    param_ring = PolyRing(params)

    base: List[MPoly] = []
    for lineno, col, body in sections.get("base", []):
        poly = parse_poly(body, full, line=lineno, column=col)
        stray = [n for n in poly.variable_names() if n in fiber_vars]
        if stray:
            raise SystemFileError(f"base equation mentions fiber variable(s) {', '.join(stray)}", lineno)
        base.append(poly.set_ring(param_ring))

    system = [parse_poly(body, full, line=lineno, column=col) for lineno, col, body in sections["system"]]
    if not system:
        raise SystemFileError("system: section is empty")

    options: Dict[str, str] = {}
    for lineno, _, body in sections.get("options", []):
        key, sep, value = body.partition("=")
        if not sep:
            key, sep, value = body.partition(":")
        if not sep or not key.strip():
            raise SystemFileError(f"option line {body!r} is not 'key = value'", lineno)
        options[key.strip()] = value.strip()

    return SystemFile(tuple(params), tuple(fiber_vars), tuple(base), tuple(system), options)


def parse_point(text: str) -> Dict[str, Fraction]:
    """Parse ``name=rational`` pairs separated by commas, e.g. ``p=-3,q=2``.

    Raises:
        ParseError: For a malformed pair or value.
    """
    point: Dict[str, Fraction] = {}
    if not text.strip():
        return point
    col = 1
    for chunk in text.split(","):
        name, sep, value = chunk.partition("=")
        name = name.strip()
        if not sep or not NAME_RE.fullmatch(name):
            raise ParseError(f"expected name=value, got {chunk.strip()!r}", 1, col)
        try:
            point[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"invalid rational {value.strip()!r} for {name}", 1, col + len(chunk) - len(value)) from None
        col += len(chunk) + 1
    return point


def format_rational(c: Any) -> str:
    return _format_rational(Fraction(c))
