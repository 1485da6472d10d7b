"""
Hessian obstruction for polynomial integrability.

The dual curve {F = 0} either is a conic, or it is singular and every singular and
inflection point lies on the absolute x^2 + y^2 + K z^2 = 0. The divisibility solver
checks Q^3 Hess(F)^k = c (x^2 + y^2 + K z^2)^alpha modulo F.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from dualbilliards.core.errors import DegenerateInputError, NumericalFailure
from dualbilliards.core.exactpoly import (
    XY,
    XYZ,
    MultiPoly,
    dehomogenize,
    divide_remainder,
)
from dualbilliards.core.projgeom import (
    Curvature,
    ProjPoint,
    absolute_form,
    absolute_residual,
)
from dualbilliards.services.expansion import h_operator, metric_factor, scalar_ratio
from dualbilliards.services.intersections import (
    CurvePoint,
    intersect_curves,
    point_residual,
)

POINT_TOL = 1e-8
ABSOLUTE_TOL = 1e-8
CLUSTER_TOL = 1e-7


class Verdict(str, Enum):
    PASS_DEGREE_2 = "PASS_DEGREE_2"
    PASS_SINGULAR_ALL_ON_ABSOLUTE = "PASS_SINGULAR_ALL_ON_ABSOLUTE"
    FAIL_SMOOTH_HIGH_DEGREE = "FAIL_SMOOTH_HIGH_DEGREE"
    FAIL_POINT_OFF_ABSOLUTE = "FAIL_POINT_OFF_ABSOLUTE"

    @property
    def passed(self):
        return self.value.startswith("PASS")


def hessian3(F):
    """det of the 3x3 matrix of second partials."""
    if len(F.variables) != 3:
        raise ValueError(f"Hessian needs three variables, got {F.variables}")
    x, y, z = F.variables
    first = [F.diff(v) for v in (x, y, z)]
    m = [[first[i].diff(v) for v in (x, y, z)] for i in range(3)]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _check_curve(F):
    if F.variables != XYZ:
        raise ValueError(f"expected a polynomial in {XYZ}, got {F.variables}")
    if F.is_zero() or not F.is_homogeneous():
        raise ValueError(f"{F} is not a nonzero homogeneous polynomial")
    if F.degree() < 2:
        raise ValueError(f"curve degree must be at least 2, got {F.degree()}")


def _assert_on_curve(F, points, tol):
    for cp in points:
        residual = point_residual(F, cp.point)
        if residual >= tol:
            raise NumericalFailure(
                f"point {cp.point} misses the curve by {residual:.3g} (tolerance {tol:g})"
            )


def singular_points(F, tol=POINT_TOL):
    """
    Common zeros of F_x, F_y, F_z.

    Two generic combinations of the partials are intersected and the candidates are
    filtered by the residual of every partial. The multiplicity reported is the
    intersection number of the two combinations, i.e. the Milnor number of the point.
    """
    _check_curve(F)
    Fx, Fy, Fz = (F.diff(v) for v in XYZ)
    G1 = Fx * 2 - Fy + Fz * 3
    G2 = Fx + Fy * 3 - Fz * 2
    if G1.is_zero() or G2.is_zero():
        raise DegenerateInputError(f"{F} is a cone over a point: the gradient is degenerate")
    singular = []
    for cp in intersect_curves(G1, G2):
        residual = max(point_residual(partial, cp.point) for partial in (Fx, Fy, Fz) if not partial.is_zero())
        if residual < tol:
            singular.append(cp)
    _assert_on_curve(F, singular, tol)
    logging.debug(f"{len(singular)} singular point(s) on {F}")
    return singular


def hessian_intersections(F):
    """All of V(F) and V(Hess F) with multiplicities; they add up to 3d(d-2)."""
    _check_curve(F)
    hess = hessian3(F)
    if hess.is_zero():
        raise DegenerateInputError("Hess(F) vanishes identically: the curve is a line component")
    if hess.is_constant():
        return []
    return intersect_curves(F, hess)


def inflection_points(F, tol=POINT_TOL, singular=None):
    _check_curve(F)
    if F.degree() == 2:
        if hessian3(F).is_zero():
            raise DegenerateInputError("Hess(F) vanishes identically: the conic is degenerate")
        return []
    if singular is None:
        singular = singular_points(F, tol)
    flexes = [
        cp
        for cp in hessian_intersections(F)
        if not any(cp.point.equals(s.point, CLUSTER_TOL) for s in singular)
    ]
    _assert_on_curve(F, flexes, tol)
    return flexes


@dataclass(frozen=True)
class ObstructionProblem:
    F: MultiPoly
    Q: MultiPoly = field(default_factory=lambda: MultiPoly.constant(1))
    k: int = 1
    K: Curvature = Curvature.SPHERE

    def __post_init__(self):
        _check_curve(self.F)
        if self.Q.variables != XYZ or self.Q.is_zero() or not self.Q.is_homogeneous():
            raise ValueError(f"Q = {self.Q} must be a nonzero homogeneous polynomial")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if divide_remainder(self.Q, self.F)[1].is_zero():
            raise ValueError("Q must not be divisible by F")

    @property
    def d(self):
        return self.F.degree()

    @property
    def n(self):
        return self.k * self.d + self.Q.degree()

    @property
    def p(self):
        return Fraction(self.n, self.k)

    @property
    def alpha(self):
        """3n/2 - 3k; None when n is odd."""
        if self.n % 2:
            return None
        return 3 * self.n // 2 - 3 * self.k


@dataclass
class HessIdentity:
    c: Optional[Fraction]
    R: Optional[MultiPoly]
    residual: MultiPoly
    alpha: int
    homogeneous_c: Optional[Fraction] = None

    @property
    def solved(self):
        return self.c is not None

    def to_json(self):
        return {
            "c": None if self.c is None else str(self.c),
            "R": None if self.R is None else str(self.R),
            "residual": str(self.residual),
            "alpha": self.alpha,
            "homogeneous_c": None if self.homogeneous_c is None else str(self.homogeneous_c),
        }


def _point_entry(cp, K):
    return {
        "point": cp.point.to_json(),
        "residual": absolute_residual(cp.point, K),
        "multiplicity": cp.multiplicity,
    }


@dataclass
class ObstructionReport:
    verdict: Verdict
    d: int
    k: int
    alpha: Optional[int]
    K: Curvature
    singular_points: List[CurvePoint] = field(default_factory=list)
    inflection_points: List[CurvePoint] = field(default_factory=list)
    offending_point: Optional[ProjPoint] = None
    hess_identity: Optional[HessIdentity] = None

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "d": self.d,
            "k": self.k,
            "alpha": self.alpha,
            "curvature": self.K.label,
            "c": None if self.hess_identity is None or self.hess_identity.c is None else str(self.hess_identity.c),
            "hess_identity": None if self.hess_identity is None else self.hess_identity.to_json(),
            "singular": [_point_entry(cp, self.K) for cp in self.singular_points],
            "inflections": [_point_entry(cp, self.K) for cp in self.inflection_points],
            "offending_point": None if self.offending_point is None else self.offending_point.to_json(),
        }


def theorem_main_verdict(prob, absolute_tol=ABSOLUTE_TOL, point_tol=POINT_TOL):
    report = ObstructionReport(
        verdict=Verdict.PASS_DEGREE_2, d=prob.d, k=prob.k, alpha=prob.alpha, K=prob.K
    )
    if prob.d == 2:
        return report

    singular = singular_points(prob.F, point_tol)
    flexes = inflection_points(prob.F, point_tol, singular)
    report.singular_points = singular
    report.inflection_points = flexes
    off = [
        cp.point
        for cp in singular + flexes
        if absolute_residual(cp.point, prob.K) >= absolute_tol
    ]
    if not singular:
        report.verdict = Verdict.FAIL_SMOOTH_HIGH_DEGREE
        # witness only: a smooth curve of degree > 2 fails regardless of its flexes
        report.offending_point = off[0] if off else None
    elif off:
        report.verdict = Verdict.FAIL_POINT_OFF_ABSOLUTE
        report.offending_point = off[0]
    else:
        report.verdict = Verdict.PASS_SINGULAR_ALL_ON_ABSOLUTE
    logging.info(f"verdict for d={prob.d}: {report.verdict.value}")
    return report


def _solve_scalar(lhs, rhs, modulus, alpha):
    """c with lhs - c * rhs divisible by modulus, via exact remainders."""
    r0 = divide_remainder(lhs, modulus)[1]
    r1 = divide_remainder(rhs, modulus)[1]
    if r1.is_zero():
        if r0.is_zero():
            c = Fraction(0)
        else:
            return HessIdentity(None, None, r0, alpha)
    elif r0.is_zero():
        c = Fraction(0)
    else:
        c = scalar_ratio(r0, r1)
    if c is None:
        keys = set(r0.terms) | set(r1.terms)
        num = sum((r0.terms.get(e, 0) * r1.terms.get(e, 0) for e in keys), Fraction(0))
        den = sum((r1.terms.get(e, 0) ** 2 for e in keys), Fraction(0))
        best = num / den
        return HessIdentity(None, None, r0 - r1 * best, alpha)
    quotient, remainder = divide_remainder(lhs - rhs * c, modulus)
    if not remainder.is_zero():
        raise ArithmeticError("remainder comparison and exact division disagree")
    return HessIdentity(c, quotient, remainder, alpha)


def _alpha_or_raise(prob):
    alpha = prob.alpha
    if alpha is None:
        raise DegenerateInputError(f"n = {prob.n} is odd: alpha = 3n/2 - 3k is not an integer")
    if alpha < 0:
        raise DegenerateInputError(f"alpha = {alpha} is negative")
    return alpha


def hess_divisibility(prob):
    """Solves Q^3 Hess(F)^k - c (x^2 + y^2 + K z^2)^alpha = F R for the scalar c."""
    alpha = _alpha_or_raise(prob)
    lhs = prob.Q**3 * hessian3(prob.F) ** prob.k
    result = _solve_scalar(lhs, absolute_form(prob.K) ** alpha, prob.F, alpha)
    if result.solved and result.c != 0 and 3 * prob.Q.degree() + 3 * prob.k * (prob.d - 2) != 2 * alpha:
        raise ArithmeticError("degree bookkeeping of the Hessian identity is off")
    result.homogeneous_c = result.c
    return result


def affine_divisibility(prob):
    """
    The chart z = 1 version: q^3 H(f)^k - c1^k (x^2 + y^2 + K)^alpha = f r1.

    The constant relates to the homogeneous one by c = (-1)^k (d-1)^(2k) c1^k.
    """
    alpha = _alpha_or_raise(prob)
    f = dehomogenize(prob.F)
    q = dehomogenize(prob.Q)
    lhs = q**3 * h_operator(f) ** prob.k
    result = _solve_scalar(lhs, metric_factor(prob.K, XY) ** alpha, f, alpha)
    if result.solved:
        result.homogeneous_c = (-1) ** prob.k * Fraction(prob.d - 1) ** (2 * prob.k) * result.c
    return result


def hf_identity_check(F):
    """z^2 Hess(F) = (d-1)^2 (d/(d-1) F (F_xx F_yy - F_xy^2) - H(F)), H taken in x, y."""
    _check_curve(F)
    d = F.degree()
    Fxx = F.diff("x").diff("x")
    Fyy = F.diff("y").diff("y")
    Fxy = F.diff("x").diff("y")
    z = MultiPoly.var("z")
    lhs = z * z * hessian3(F)
    rhs = (F * (Fxx * Fyy - Fxy * Fxy) * Fraction(d, d - 1) - h_operator(F)) * (d - 1) ** 2
    return lhs == rhs
