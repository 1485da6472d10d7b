from fractions import Fraction

import pytest
import sympy

from dualbilliards.core.exactpoly import XY, MultiPoly, PCoeff
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.core.series import TruncatedSeries, compose_series


def poly(text):
    return parse_polynomial(text, XY)


def test_geometric_series_truncates():
    s = TruncatedSeries.geometric(poly("x"))
    assert [str(c) for c in s.coefficients] == ["1", "x", "x^2", "x^3"]
    assert s.order == 3


def test_product_discards_high_powers():
    one_plus = TruncatedSeries([poly("1"), poly("1")])
    cube = one_plus ** 5
    assert [c.constant_value() for c in cube.coefficients] == [1, 5, 10, 10]


def test_binomial_with_rational_exponent():
    s = TruncatedSeries.binomial(poly("1"), Fraction(1, 2))
    expected = sympy.series(sympy.sqrt(1 + sympy.Symbol("m")), sympy.Symbol("m"), 0, 4).removeO()
    m = sympy.Symbol("m")
    for j in range(4):
        c = expected.coeff(m, j)
        assert s.coefficient(j).constant_value() == Fraction(int(c.p), int(c.q))


def test_binomial_with_formal_exponent():
    s = TruncatedSeries.binomial(poly("1"), PCoeff.p())
    second = s.coefficient(2).constant_value()
    assert isinstance(second, PCoeff)
    assert second(5) == 10
    assert second(Fraction(1, 2)) == Fraction(-1, 8)


def test_geometric_times_one_minus_is_one():
    C = poly("x*y + 2")
    one_minus = TruncatedSeries([poly("1"), -C])
    product = one_minus * TruncatedSeries.geometric(C)
    assert product == TruncatedSeries.constant(poly("1"))


def test_mismatched_orders_are_rejected():
    with pytest.raises(ValueError, match="truncation order mismatch"):
        TruncatedSeries.geometric(poly("x"), 2) + TruncatedSeries.geometric(poly("x"), 3)


def test_reflect_flips_odd_coefficients():
    s = TruncatedSeries.geometric(poly("y")).reflect()
    assert [str(c) for c in s.coefficients] == ["1", "-y", "y^2", "-y^3"]


def test_compose_series_matches_direct_substitution():
    g = poly("x^2 - 3*y")
    arg_x = TruncatedSeries([poly("x"), poly("1")])
    arg_y = TruncatedSeries([poly("y"), poly("x")])
    one = TruncatedSeries.constant(poly("1"))
    result = compose_series(g, arg_x, arg_y, one)
    # (x + mu)^2 - 3 (y + mu x)
    assert [str(c) for c in result.coefficients] == ["x^2 - 3*y", "-x", "1", "0"]


def test_compose_series_needs_bivariate_g():
    s = TruncatedSeries.constant(poly("x"))
    with pytest.raises(ValueError):
        compose_series(MultiPoly.var("x"), s, s, s)
