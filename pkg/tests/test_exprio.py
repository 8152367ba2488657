"""Expression parsing, canonical printing and system files."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qetale.domains import PolynomialDomain, RationalFunctionField
from qetale.exceptions import BadExponent, ParseError, SystemFileError, UnbalancedParentheses, UnknownVariable
from qetale.exprio import MAX_EXPONENT, MAX_NESTING, parse_point, parse_poly, parse_system_file, print_poly, print_upoly, upoly_json
from qetale.mpoly import PolyRing
from qetale.ratfun import RatFun
from qetale.upoly import UPoly

R = PolyRing(["x", "y", "z"])


class TestParse:
    def test_precedence_and_powers(self):
        f = parse_poly("-x^2 + 2*(y - 1)^2*z - 1/3", R)
        x, y, z = R.gen("x"), R.gen("y"), R.gen("z")
        assert f == -(x**2) + (y - 1) ** 2 * z * 2 - Fraction(1, 3)

    def test_unary_minus_binds_looser_than_power(self):
        assert parse_poly("-x^2", R) == -(R.gen("x") ** 2)

    @pytest.mark.parametrize(
        "text,error,column",
        [
            ("x + w", UnknownVariable, 5),
            ("x^-1", BadExponent, 3),
            ("x^(1/2)", BadExponent, 3),
            ("x^", BadExponent, 2),
            ("(x + y", UnbalancedParentheses, 7),
            ("x + y)", UnbalancedParentheses, 6),
            ("2 x", ParseError, 3),
            ("x / y", ParseError, 3),
            ("", ParseError, 1),
        ],
        ids=["unknown", "negative-exp", "paren-exp", "missing-exp", "open", "close", "implicit", "division", "empty"],
    )
    def test_positioned_errors(self, text, error, column):
        with pytest.raises(error) as info:
            parse_poly(text, R)
        assert info.value.line == 1
        assert info.value.column == column

    def test_zero_denominator_literal(self):
        with pytest.raises(ParseError):
            parse_poly("1/0*x", R)

    @pytest.mark.parametrize("text", ["x^1.5", "x^3/2", "y*x^.5"], ids=["decimal", "rational", "leading-dot"])
    def test_fractional_exponent(self, text):
        with pytest.raises(BadExponent, match="fractional exponent"):
            parse_poly(text, R)

    def test_decimal_literal(self):
        with pytest.raises(ParseError, match="decimal") as info:
            parse_poly("x + 0.25", R)
        assert not isinstance(info.value, BadExponent)
        assert info.value.column == 5

    def test_exponent_limit(self):
        assert parse_poly(f"x^{MAX_EXPONENT}", R) == R.gen("x") ** MAX_EXPONENT
        for text in (f"x^{MAX_EXPONENT + 1}", "x^99999999", "x^" + "9" * 5000):
            with pytest.raises(BadExponent, match="exceeds"):
                parse_poly(text, R)

    @pytest.mark.parametrize("opening,closing", [("(", ")"), ("-", ""), ("-(", ")")], ids=["parens", "signs", "mixed"])
    def test_deep_nesting_is_a_parse_error(self, opening, closing):
        parse_poly(opening * (MAX_NESTING // 2) + "x" + closing * (MAX_NESTING // 2), R)
        with pytest.raises(ParseError, match="nested deeper"):
            parse_poly(opening * 5000 + "x" + closing * 5000, R)


class TestPrint:
    def test_canonical_form(self):
        f = parse_poly("1/2 - 3*x*y + x^2 + y^3", R)
        assert print_poly(f) == "y^3 + x^2 - 3*x*y + 1/2"

    def test_zero(self):
        assert print_poly(R.zero) == "0"

    @settings(max_examples=1000, deadline=None)
    @given(
        st.dictionaries(
            st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
            st.fractions(min_value=-9, max_value=9, max_denominator=7),
            max_size=5,
        )
    )
    def test_printed_text_reparses(self, terms):
        f = R.from_dict(terms)
        assert parse_poly(print_poly(f), R) == f

    def test_upoly_over_parameters(self):
        params = PolyRing(["p", "q"])
        dom = PolynomialDomain(params)
        f = UPoly([params.gen("q"), params.gen("p"), params.zero, params.one], dom)
        assert print_upoly(f) == "lam^3 + p*lam + q"
        assert print_upoly(f, "x") == "x^3 + p*x + q"

    def test_upoly_over_fraction_field_splits_denominator(self):
        params = PolyRing(["y"])
        fld = RationalFunctionField(params)
        y = params.gen("y")
        f = UPoly([RatFun(params.one, y), RatFun(params.one)], fld)
        assert upoly_json(f) == {"numerator": "y*lam + 1", "denominator": "y"}


SYSTEM = """
# comment line
params: p, q
vars: x
base:
  4*p^3 + 27*q^2   # discriminant
system:
  x^3 + p*x + q
options:
  max_depth = 4
"""


class TestSystemFile:
    def test_sections(self):
        sf = parse_system_file(SYSTEM)
        assert sf.params == ("p", "q")
        assert sf.vars == ("x",)
        assert print_poly(sf.base[0]) == "4*p^3 + 27*q^2"
        assert sf.base[0].ring == sf.param_ring
        assert print_poly(sf.system[0]) == "x^3 + p*x + q"
        assert sf.options == {"max_depth": "4"}

    def test_inline_section_content(self):
        sf = parse_system_file("vars: x, y\nsystem: x*y - 1\n  x - y\n")
        assert sf.params == ()
        assert len(sf.system) == 2

    @pytest.mark.parametrize(
        "text,line",
        [
            ("params: p\nsystem:\n  x\n", None),
            ("vars: x\nvars: y\nsystem:\n  x\n", 2),
            ("vars: x\n  junk\n", None),
            ("x^2\nvars: x\nsystem:\n  x\n", 1),
            ("params: x\nvars: x\nsystem:\n  x\n", None),
            ("params: p\nvars: x\nbase:\n  p*x\nsystem:\n  x\n", 4),
        ],
        ids=["missing-vars", "duplicate-section", "missing-system", "outside-section", "name-clash", "base-with-var"],
    )
    def test_structural_errors(self, text, line):
        with pytest.raises(SystemFileError) as info:
            parse_system_file(text)
        if line is not None:
            assert info.value.line == line

    def test_parse_errors_are_positioned_in_the_file(self):
        with pytest.raises(UnknownVariable) as info:
            parse_system_file("params: p\nvars: x\nsystem:\n  x^2 + w\n")
        assert info.value.line == 4
        assert info.value.column == 9


class TestPoint:
    def test_rationals(self):
        assert parse_point("p=-3, q=2/5") == {"p": Fraction(-3), "q": Fraction(2, 5)}

    def test_empty(self):
        assert parse_point("  ") == {}

    @pytest.mark.parametrize("text", ["p", "p=", "p=1/0", "3=1", "p=x"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_point(text)
