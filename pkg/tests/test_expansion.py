import random
from fractions import Fraction

import pytest
import sympy

from dualbilliards.core.errors import DegenerateInputError
from dualbilliards.core.exactpoly import XY, PCoeff, divide_remainder
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.core.projgeom import Curvature
from dualbilliards.services.expansion import (
    AffineCurveData,
    conservation_chain_check,
    cube_identity_check,
    expansion_difference,
    h_operator,
    lie_u,
    metric_factor,
    metric_identity_check,
    mu3_extract,
    rotation_term,
    sample_curve,
    terms_expression,
    third_order_identity_check,
)
from dualbilliards.services.identity_suite import random_poly


def g(text):
    return parse_polynomial(text, XY)


def test_h_operator_examples():
    assert h_operator(g("x*y")) == g("-2*x*y")
    assert h_operator(g("x^2 + y^2 - 1")) == g("8*x^2 + 8*y^2")
    assert h_operator(g("x - 3*y + 1")).is_zero()


def test_h_operator_matches_sympy():
    x, y = sympy.symbols("x y")
    expr = x**3 - 2 * x * y**2 + y - 5
    ours = h_operator(g("x^3 - 2*x*y^2 + y - 5"))
    theirs = sympy.expand(
        sympy.diff(expr, x, 2) * sympy.diff(expr, y) ** 2
        - 2 * sympy.diff(expr, x, y) * sympy.diff(expr, x) * sympy.diff(expr, y)
        + sympy.diff(expr, y, 2) * sympy.diff(expr, x) ** 2
    )
    assert sympy.expand(sympy.sympify(str(ours).replace("^", "**")) - theirs) == 0


def test_lie_u_kills_the_curve():
    curve = g("x^3 + x*y - 2")
    assert lie_u(curve, curve).is_zero()


@pytest.mark.parametrize("seed", range(50))
def test_third_order_identity(seed):
    rng = random.Random(seed)
    assert third_order_identity_check(random_poly(rng, XY, 5))


@pytest.mark.parametrize("seed", range(50))
def test_cube_identity(seed):
    rng = random.Random(1000 + seed)
    f = random_poly(rng, XY, 3)
    r = random_poly(rng, XY, 3, min_degree=0)
    assert cube_identity_check(f, r)


@pytest.mark.parametrize("K", list(Curvature))
def test_metric_identity(K):
    rng = random.Random(int(K) + 5)
    for _ in range(10):
        assert metric_identity_check(random_poly(rng, XY, 5), K)


def test_rotation_term_of_a_circle_vanishes():
    assert rotation_term(g("x^2 + y^2 - 1/4")).is_zero()


@pytest.mark.parametrize("K", list(Curvature))
def test_circle_mu3_vanishes(K):
    report = mu3_extract(AffineCurveData(g("x^2 + y^2 - 1/4"), K, Fraction(2)))
    assert report.mu3_coeff.is_zero()
    assert report.terms_expr.is_zero()
    assert report.residual_mod_g.is_zero()
    assert report.proportionality is None
    assert report.passed


@pytest.mark.parametrize("K", list(Curvature))
def test_even_coefficients_and_mu1(K):
    data = AffineCurveData(g("x^3 - x*y + 2*y^2 - 1"), K)
    series = expansion_difference(data)
    assert series.coefficient(0).is_zero()
    assert series.coefficient(2).is_zero()
    assert series.coefficient(1) == rotation_term(data.g) * data.g * (PCoeff.p() * -2)


@pytest.mark.parametrize("K", list(Curvature))
def test_mu3_is_a_third_of_squared_metric_times_terms(K):
    curve = g("x^2 + 2*y^2 - 1")
    report = mu3_extract(AffineCurveData(curve, K))
    assert report.even_coefficients_vanish
    assert report.mu1_matches
    assert report.proportionality == Fraction(1, 3)
    assert report.metric_power == 2
    assert report.passed
    S = metric_factor(K)
    exact = report.mu3_coeff - S**2 * report.terms_expr * Fraction(1, 3)
    assert divide_remainder(exact, curve)[1].is_zero()


def test_mu3_with_numeric_p():
    report = mu3_extract(AffineCurveData(g("y - x^2"), Curvature.SPHERE, Fraction(3)))
    assert report.passed
    assert report.proportionality == Fraction(1, 3)


def test_line_has_no_mu3_obstruction():
    report = mu3_extract(AffineCurveData(g("x - 1/2"), Curvature.SPHERE))
    assert report.terms_expr.is_zero()
    assert report.passed


def test_terms_expression_at_p_two_drops_the_rotation_part():
    curve = g("x^3 + y^2 - 1")
    terms = terms_expression(curve, Curvature.SPHERE, Fraction(2))
    assert terms == metric_factor(Curvature.SPHERE) * lie_u(h_operator(curve), curve)


def test_affine_data_validation():
    with pytest.raises(ValueError):
        AffineCurveData(g("0"), Curvature.SPHERE)
    with pytest.raises(ValueError):
        AffineCurveData(parse_polynomial("x + z"), Curvature.SPHERE)


@pytest.mark.parametrize("K", list(Curvature))
def test_chain_on_a_circle_is_constant(K):
    report = conservation_chain_check(AffineCurveData(g("x^2 + y^2 - 1/4"), K, Fraction(2)))
    assert report.exponent == 0
    assert report.identity_holds
    assert report.obstruction_vanishes_on_curve
    assert report.samples > 0
    assert report.constant == pytest.approx(8 * 0.25)
    assert report.passed


@pytest.mark.parametrize("p", [Fraction(0), Fraction(2, 3), Fraction(4), Fraction(6)])
def test_chain_identity_for_several_exponents(p):
    rng = random.Random(31)
    for K in Curvature:
        report = conservation_chain_check(AffineCurveData(random_poly(rng, XY, 3), K, p))
        assert report.identity_holds


def test_chain_rejects_fractional_exponent():
    with pytest.raises(DegenerateInputError):
        conservation_chain_check(AffineCurveData(g("x^2 + y^2 - 1"), Curvature.SPHERE, Fraction(1)))
    with pytest.raises(DegenerateInputError):
        conservation_chain_check(AffineCurveData(g("x^2 + y^2 - 1"), Curvature.SPHERE))


def test_sample_curve_finds_points_on_the_curve():
    curve = g("x^2 + 4*y^2 - 1")
    points = sample_curve(curve)
    assert points
    for x0, y0 in points:
        assert abs(curve.evaluate([x0, y0])) < 1e-9
