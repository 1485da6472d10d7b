"""
Exact polynomial arithmetic, checked against sympy as an independent oracle.
"""

import random
from fractions import Fraction

import pytest
import sympy

from dualbilliards.core.exactpoly import (
    DEGREE_OF_ZERO,
    XY,
    XYZ,
    MultiPoly,
    PCoeff,
    bareiss_determinant,
    dehomogenize,
    divide_remainder,
    homogenize,
    is_divisible,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.services.identity_suite import random_poly

X, Y, Z = sympy.symbols("x y z")


def to_sympy(poly):
    symbols = [sympy.Symbol(v) for v in poly.variables]
    total = sympy.Integer(0)
    for exps, coeff in poly.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for s, e in zip(symbols, exps):
            term *= s**e
        total += term
    return sympy.expand(total)


def poly(text, variables=XYZ):
    return parse_polynomial(text, variables)


def test_zero_polynomial_has_sentinel_degree():
    zero = MultiPoly.zero()
    assert zero.is_zero()
    assert zero.degree() == DEGREE_OF_ZERO
    assert (poly("x") - poly("x")).terms == {}


def test_coefficients_stay_reduced():
    p = MultiPoly(XYZ, {(1, 0, 0): Fraction(6, 4), (0, 1, 0): 0})
    assert p.terms == {(1, 0, 0): Fraction(3, 2)}
    assert p.terms[(1, 0, 0)].denominator == 2


def test_arity_mismatch_is_rejected():
    with pytest.raises(ValueError):
        MultiPoly(XYZ, {(1, 0): 1})
    with pytest.raises(ValueError):
        poly("x") + poly("x", XY)


def test_add_and_mul():
    a = poly("x + y")
    assert str(a + poly("-y")) == "x"
    assert a * a == poly("x^2 + 2*x*y + y^2")
    assert str(poly("3*x^2 - 1/2*y*z")) == "3*x^2 - 1/2*y*z"


@pytest.mark.parametrize("seed", range(10))
def test_product_matches_sympy(seed):
    rng = random.Random(seed)
    a = random_poly(rng, XYZ, 4)
    b = random_poly(rng, XYZ, 4)
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


def test_diff():
    assert poly("x^3*y").diff("x") == poly("3*x^2*y")
    assert poly("5").diff("z").is_zero()
    with pytest.raises(ValueError):
        poly("x").diff("w")


def test_homogenize_round_trip():
    f = poly("x^2 - y + 3", XY)
    F = homogenize(f, 2)
    assert F == poly("x^2 - y*z + 3*z^2")
    assert dehomogenize(F) == f
    with pytest.raises(ValueError):
        homogenize(f, 1)


def test_divide_remainder_circle():
    f = poly("x^2 + y^2 - 1", XY)
    q, r = divide_remainder(poly("x^4", XY), f)
    assert r == poly("y^4 - 2*y^2 + 1", XY)
    assert q * f + r == poly("x^4", XY)


def test_divide_by_zero_rejected():
    with pytest.raises(ValueError):
        divide_remainder(poly("x"), MultiPoly.zero())


@pytest.mark.parametrize("seed", range(8))
def test_division_identity(seed):
    rng = random.Random(100 + seed)
    a = random_poly(rng, XY, 5)
    f = random_poly(rng, XY, 3)
    q, r = divide_remainder(a, f)
    assert q * f + r == a
    lead = f.leading_term()[0]
    assert all(any(e < l for e, l in zip(exps, lead)) for exps in r.terms)


def test_is_divisible():
    f = poly("x - y")
    assert is_divisible(poly("x^3 - y^3"), f)
    assert not is_divisible(poly("x^3 + y^3 + z"), f)


def test_resultant_examples():
    x_y = ("x", "y")
    assert resultant(poly("x^2 - y", x_y), poly("x - y", x_y), "x") == poly("y^2 - y", x_y)
    assert resultant(poly("x - 1", x_y), poly("x + 1", x_y), "x") == MultiPoly.constant(2, x_y)


@pytest.mark.parametrize("seed", range(6))
def test_resultant_matches_sympy(seed):
    rng = random.Random(200 + seed)
    a = random_poly(rng, XY, 3, terms=4)
    b = random_poly(rng, XY, 3, terms=4)
    if a.degree_in("x") == 0 and b.degree_in("x") == 0:
        pytest.skip("both inputs constant in x")
    ours = to_sympy(resultant(a, b, "x"))
    theirs = sympy.expand(sympy.resultant(to_sympy(a), to_sympy(b), X))
    assert sympy.expand(ours - theirs) == 0


def test_bareiss_matches_sympy_determinant():
    rows = [["x", "y", "1"], ["2", "x*y", "z"], ["z", "3", "x - y"]]
    matrix = [[poly(t) for t in row] for row in rows]
    expected = sympy.Matrix([[sympy.sympify(t.replace("^", "**")) for t in row] for row in rows]).det()
    assert sympy.expand(to_sympy(bareiss_determinant(matrix)) - expected) == 0


def test_squarefree_decomposition():
    u = poly("(x - 1)^3 * (x + 2)^2 * (x - 5)", XY)
    factors = squarefree_decomposition(u)
    assert factors == [
        (poly("x - 5", XY), 1),
        (poly("x + 2", XY), 2),
        (poly("x - 1", XY), 3),
    ]
    assert squarefree_part(u) == poly("(x - 1)*(x + 2)*(x - 5)", XY)


def test_squarefree_rejects_bivariate():
    with pytest.raises(ValueError):
        squarefree_decomposition(poly("x*y", XY))


def test_formal_parameter_coefficients():
    p = PCoeff.p()
    g = poly("x^2", XY) * p + poly("y", XY)
    assert g.has_formal_p()
    assert g.eval_p(3) == poly("3*x^2 + y", XY)
    assert g.evaluate([2.0, 1.0], p=Fraction(1, 2)) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        g.evaluate([2.0, 1.0])


def test_compose_substitutes_forms():
    F = poly("x^2 + y*z")
    images = [poly("x + y"), poly("y"), poly("2*z")]
    assert F.compose(images) == poly("x^2 + 2*x*y + y^2 + 2*y*z")
