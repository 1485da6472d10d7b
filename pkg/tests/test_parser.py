from fractions import Fraction

import pytest

from dualbilliards.core.errors import PolynomialSyntaxError
from dualbilliards.core.exactpoly import XY, MultiPoly
from dualbilliards.core.parser import parse_polynomial


def test_grammar_example():
    p = parse_polynomial("x^2 + y^2 - 1/4*z^2")
    assert p.terms == {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): Fraction(-1, 4)}


def test_parentheses_and_unary_minus():
    assert parse_polynomial("-(x - y)^2") == parse_polynomial("-x^2 + 2*x*y - y^2")
    assert parse_polynomial("--x") == MultiPoly.var("x")


def test_rational_coefficients():
    assert parse_polynomial("6/4").constant_value() == Fraction(3, 2)


def test_variables_restrict_the_alphabet():
    assert parse_polynomial("x*y", XY).variables == XY
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x*z", XY)


@pytest.mark.parametrize(
    "text, position",
    [
        ("x^3+y^3+w^3", 8),
        ("2x", 1),
        ("x + ", 4),
        ("x $ y", 2),
        ("1/0", 2),
        ("(x + y", 6),
        ("", 0),
    ],
)
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text)
    assert info.value.position == position


def test_syntax_error_is_a_value_error():
    with pytest.raises(ValueError):
        parse_polynomial("x^y")
