"""
Birkhoff billiards inside cone-cut domains on the unit sphere and the hyperboloid.

Points and velocities are ambient numpy vectors; <a, b>_K = a1 b1 + a2 b2 + K a3 b3 and
the surface is <r, r>_K = K (upper sheet r3 > 0 when K = -1). The domain is the part of
the surface where interior_sign * C < 0 for a homogeneous cone polynomial C.
"""

import csv
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import brentq, newton

from dualbilliards.core.errors import NumericalFailure
from dualbilliards.core.exactpoly import XYZ, MultiPoly
from dualbilliards.core.projgeom import (
    Curvature,
    evaluate_gradient,
    minkowski_form,
    radial_projection,
    tangent_w,
    wedge,
)

ORBIT_HEADER = ["bounce", "r1", "r2", "r3", "v1", "v2", "v3", "M1", "M2", "M3", "psi_residual"]
QUADRATIC_MONOMIALS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))


@dataclass(frozen=True)
class BilliardSettings:
    scan_points: int = 256
    refine_rounds: int = 2
    t_eps: float = 1e-7
    t_max_sphere: float = np.pi
    t_max_hyperboloid: float = 12.0
    hit_tol: float = 1e-12
    state_tol: float = 1e-10
    boundary_tol: float = 1e-9
    fd_step: float = 1e-3

    def t_max(self, K):
        return self.t_max_sphere if int(K) == 1 else self.t_max_hyperboloid


DEFAULT_SETTINGS = BilliardSettings()


class NumericPoly:
    """Vectorised float evaluation of a MultiPoly over (x, y, z)."""

    def __init__(self, poly):
        if poly.has_formal_p():
            raise ValueError("numeric evaluation needs rational coefficients")
        items = sorted(poly.terms.items())
        self.exps = np.array([e for e, _ in items], dtype=int).reshape(-1, len(poly.variables))
        self.coeffs = np.array([float(c) for _, c in items])

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        if not len(self.coeffs):
            return np.zeros(points.shape[:-1])
        monomials = np.prod(points[..., None, :] ** self.exps, axis=-1)
        return monomials @ self.coeffs


@dataclass
class ConeBoundary:
    C: MultiPoly
    K: Curvature = Curvature.SPHERE
    interior_sign: int = 1
    _value: NumericPoly = field(init=False, repr=False)
    _grad: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.C.variables != XYZ or not self.C.is_homogeneous() or self.C.degree() < 1:
            raise ValueError(f"boundary cone must be a homogeneous polynomial in {XYZ}")
        if self.interior_sign not in (1, -1):
            raise ValueError("interior_sign must be +1 or -1")
        self.K = Curvature(self.K)
        self._value = NumericPoly(self.C)
        self._grad = tuple(NumericPoly(self.C.diff(v)) for v in XYZ)

    def signed(self, points):
        """Negative inside the domain, zero on the boundary."""
        return self.interior_sign * self._value(points)

    def gradient(self, r):
        return self.interior_sign * np.array([g(r) for g in self._grad], dtype=float)


@dataclass
class BilliardState:
    r: np.ndarray
    v: np.ndarray

    def reversed(self):
        return BilliardState(self.r.copy(), -self.v)


@dataclass
class Orbit:
    bounces: List[BilliardState]
    momenta: List[np.ndarray]
    integral_residuals: List[float]
    flight_times: List[float]

    def max_residual(self):
        return max(self.integral_residuals, default=0.0)


def metric(K):
    return np.diag([1.0, 1.0, float(int(K))])


def reproject(state, K):
    """Pulls r back onto the surface and v back onto the unit tangent space at r."""
    r, v = np.asarray(state.r, dtype=float), np.asarray(state.v, dtype=float)
    r = r / np.sqrt(int(K) * minkowski_form(r, r, K))
    v = v - minkowski_form(v, r, K) / minkowski_form(r, r, K) * r
    v = v / np.sqrt(minkowski_form(v, v, K))
    return BilliardState(r, v)


def check_state(state, K, tol=DEFAULT_SETTINGS.state_tol):
    r, v = state.r, state.v
    defects = {
        "constraint": abs(minkowski_form(r, r, K) - int(K)),
        "tangency": abs(minkowski_form(r, v, K)),
        "unit speed": abs(minkowski_form(v, v, K) - 1),
    }
    for name, defect in defects.items():
        if defect > tol:
            raise NumericalFailure(f"state invariant '{name}' violated by {defect:.3g} at r={r}")
    if int(K) == -1 and r[2] <= 0:
        raise NumericalFailure(f"point {r} left the upper sheet")


def geodesic(state, t, K):
    if int(K) == 1:
        c, s = np.cos(t), np.sin(t)
        return BilliardState(state.r * c + state.v * s, -state.r * s + state.v * c)
    c, s = np.cosh(t), np.sinh(t)
    return BilliardState(state.r * c + state.v * s, state.r * s + state.v * c)


def _geodesic_points(state, ts, K):
    ts = np.asarray(ts, dtype=float)[:, None]
    if int(K) == 1:
        return state.r * np.cos(ts) + state.v * np.sin(ts)
    return state.r * np.cosh(ts) + state.v * np.sinh(ts)


def unit_normal(boundary, r):
    """Outward unit normal to the boundary curve inside T_r of the surface."""
    K = boundary.K
    g = metric(K) @ boundary.gradient(r)
    n = g - minkowski_form(g, r, K) / minkowski_form(r, r, K) * r
    size = minkowski_form(n, n, K)
    if size <= 1e-24:
        raise NumericalFailure(f"projected boundary normal vanishes at {r}")
    return n / np.sqrt(size)


def boundary_tangent(boundary, r):
    n = unit_normal(boundary, r)
    t = wedge(r, n)
    return t if int(boundary.K) == 1 else metric(boundary.K) @ t


def reflect(hit, boundary):
    n = unit_normal(boundary, hit.r)
    v = hit.v - 2 * minkowski_form(hit.v, n, boundary.K) * n
    return BilliardState(hit.r.copy(), v)


def _first_crossing(state, boundary, lo, hi, points):
    ts = np.linspace(lo, hi, points + 1)
    values = boundary.signed(_geodesic_points(state, ts, boundary.K))
    outside = np.nonzero(values >= 0)[0]
    if not len(outside):
        return None
    i = outside[0]
    if i == 0:
        return ts[0], ts[0]
    return ts[i - 1], ts[i]


def next_hit(state, boundary, settings=DEFAULT_SETTINGS):
    """First boundary crossing of the geodesic through ``state``, polished with brentq."""
    K = boundary.K
    start = float(boundary.signed(state.r))
    if start > settings.boundary_tol:
        raise NumericalFailure(f"start point {state.r} lies outside the domain")
    t_eps = settings.t_eps
    if start >= -settings.boundary_tol:
        entry = float(boundary.signed(geodesic(state, t_eps, K).r))
        if entry >= -settings.hit_tol:
            raise NumericalFailure(
                f"geodesic from boundary point {state.r} does not enter the domain"
            )

    lo, hi = t_eps, settings.t_max(K)
    bracket = _first_crossing(state, boundary, lo, hi, settings.scan_points)
    if bracket is None:
        raise NumericalFailure(f"no boundary crossing within t_max = {hi:g}")
    for _ in range(settings.refine_rounds):
        # a finer scan of the prefix catches chords that leave and re-enter within one cell
        bracket = _first_crossing(state, boundary, lo, bracket[1], settings.scan_points)
    lo, hi = bracket
    if lo == hi:
        raise NumericalFailure(f"geodesic from {state.r} leaves the domain immediately")

    def along(t):
        return float(boundary.signed(geodesic(state, t, K).r))

    t_hit = brentq(along, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    hit = reproject(geodesic(state, t_hit, K), K)
    residual = abs(float(boundary.signed(hit.r)))
    if residual > settings.hit_tol:
        raise NumericalFailure(f"boundary hit polished only to |C| = {residual:.3g}")
    return t_hit, hit


def _psi_value(psi, M):
    return float(psi.evaluate(list(M)))


def run_orbit(start, boundary, bounces, psi=None, settings=DEFAULT_SETTINGS):
    if bounces < 1:
        raise ValueError(f"bounce count must be at least 1, got {bounces}")
    K = boundary.K
    check_state(start, K, settings.state_tol)
    state = start
    orbit = Orbit([], [], [], [])
    reference = None
    for i in range(bounces):
        launch_momentum = wedge(state.r, state.v)
        t_hit, hit = next_hit(state, boundary, settings)
        drift = float(np.max(np.abs(wedge(hit.r, hit.v) - launch_momentum)))
        if drift > settings.state_tol * max(1.0, float(np.max(np.abs(launch_momentum)))):
            raise NumericalFailure(f"momentum drifted by {drift:.3g} during flight {i}")
        state = reflect(hit, boundary)
        check_state(state, K, settings.state_tol)
        M = wedge(state.r, state.v)
        orbit.bounces.append(state)
        orbit.momenta.append(M)
        orbit.flight_times.append(t_hit)
        if psi is not None:
            value = _psi_value(psi, M)
            if reference is None:
                reference = value
            orbit.integral_residuals.append(abs(value - reference))
    logging.info(
        f"orbit of {bounces} bounces on the {K.label}, max residual {orbit.max_residual():.3g}"
    )
    return orbit


def tangent_basis(r, K):
    """Two metric-orthonormal vectors spanning the tangent plane at r."""
    basis = []
    for candidate in np.eye(3):
        w = candidate - minkowski_form(candidate, r, K) / minkowski_form(r, r, K) * r
        for b in basis:
            w = w - minkowski_form(w, b, K) * b
        size = minkowski_form(w, w, K)
        if size > 1e-8:
            basis.append(w / np.sqrt(size))
        if len(basis) == 2:
            return basis
    raise NumericalFailure(f"could not build a tangent frame at {r}")


def interior_point(boundary):
    """The most interior of the coordinate points of the surface (symmetry point of a diagonal cone)."""
    if int(boundary.K) == 1:
        candidates = [np.array(p, dtype=float) for p in ((0, 0, 1), (0, 0, -1), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))]
    else:
        candidates = [np.array([0.0, 0.0, 1.0])]
    values = [float(boundary.signed(c)) for c in candidates]
    best = int(np.argmin(values))
    if values[best] >= 0:
        raise NumericalFailure(
            f"the cone {boundary.C} cuts no domain around the coordinate points of the {boundary.K.label}"
        )
    return candidates[best]


def _direction(r, K, angle):
    e, f = tangent_basis(r, K)
    return np.cos(angle) * e + np.sin(angle) * f


def launch_state(boundary, seed=0, center=None, settings=DEFAULT_SETTINGS):
    """A start state offset from the symmetry point along a seeded random direction."""
    K = boundary.K
    rng = np.random.default_rng(seed)
    center = interior_point(boundary) if center is None else np.asarray(center, dtype=float)
    toward = BilliardState(center, _direction(center, K, rng.uniform(0, 2 * np.pi)))
    reach, _ = next_hit(toward, boundary, settings)
    moved = reproject(geodesic(toward, rng.uniform(0.2, 0.5) * reach, K), K)
    start = reproject(BilliardState(moved.r, _direction(moved.r, K, rng.uniform(0, 2 * np.pi))), K)
    check_state(start, K, settings.state_tol)
    return start


def sample_boundary(boundary, samples, center=None, settings=DEFAULT_SETTINGS):
    """Boundary points with unit tangents, found by shooting geodesics from an interior point."""
    K = boundary.K
    center = interior_point(boundary) if center is None else np.asarray(center, dtype=float)
    out = []
    for angle in np.linspace(0, 2 * np.pi, samples, endpoint=False):
        _, hit = next_hit(BilliardState(center, _direction(center, K, angle)), boundary, settings)
        out.append((hit.r, boundary_tangent(boundary, hit.r)))
    return out


def _curve_point(boundary, r, t, n, s):
    """Point of the boundary curve near r, at offset s along t, by radial projection."""
    K = boundary.K
    base = r + s * t

    def on_cone(lam):
        return float(boundary.signed(base + lam * n))

    def slope(lam):
        return float(boundary.gradient(base + lam * n) @ n)

    try:
        lam = newton(on_cone, 0.0, fprime=slope, tol=1e-16, maxiter=50)
    except (RuntimeError, ZeroDivisionError) as e:
        raise NumericalFailure(f"boundary projection failed near {r}: {e}") from e
    q = base + lam * n
    return q / np.sqrt(int(K) * minkowski_form(q, q, K))


def geodesic_curvature(boundary, r, settings=DEFAULT_SETTINGS):
    """Curvature of the boundary toward the interior, by Richardson-extrapolated central differences."""
    K = boundary.K
    r = np.asarray(r, dtype=float)
    n_out = unit_normal(boundary, r)
    t = boundary_tangent(boundary, r)
    c0 = _curve_point(boundary, r, t, n_out, 0.0)

    def differences(h):
        plus = _curve_point(boundary, r, t, n_out, h)
        minus = _curve_point(boundary, r, t, n_out, -h)
        return (plus - minus) / (2 * h), (plus - 2 * c0 + minus) / (h * h)

    h = settings.fd_step
    d1_coarse, d2_coarse = differences(h)
    d1_fine, d2_fine = differences(h / 2)
    d1 = (4 * d1_fine - d1_coarse) / 3
    d2 = (4 * d2_fine - d2_coarse) / 3
    return -minkowski_form(d2, n_out, K) / minkowski_form(d1, d1, K)


def outer_billiard_chord(r, t, n, k, eps, K):
    """M, P-, P+, M-, M+ for the chord r ^ (t -+ eps k n) of the dual construction."""
    M = wedge(r, t)
    P_minus = wedge(r, t - eps * k * n)
    P_plus = wedge(r, t + eps * k * n)
    return M, P_minus, P_plus, radial_projection(P_minus, K), radial_projection(P_plus, K)


def midpoint_remark_check(boundary, samples, eps, settings=DEFAULT_SETTINGS):
    """Max over boundary samples of the midpoint and equidistance defects of the dual chord."""
    K = boundary.K
    worst = 0.0
    for r, t in sample_boundary(boundary, samples, settings=settings):
        k = geodesic_curvature(boundary, r, settings)
        if abs(k) < 1e-8:
            raise NumericalFailure(f"boundary is geodesic at {r}: the midpoint construction degenerates")
        n_in = -unit_normal(boundary, r)
        M, P_minus, P_plus, M_minus, M_plus = outer_billiard_chord(r, t, n_in, k, eps, K)
        midpoint = radial_projection(P_minus + P_plus, K)
        residual = float(np.linalg.norm(midpoint - M)) + abs(
            minkowski_form(M_minus, M, K) - minkowski_form(M, M_plus, K)
        )
        worst = max(worst, residual)
    return worst


def theorem_pm_check(boundary, psi, F_dual, epsilons, samples=200, settings=DEFAULT_SETTINGS):
    """max |Psi(M - eps w) - Psi(M + eps w)| over dual-curve samples M and the given eps."""
    K = boundary.K
    worst = 0.0
    psi_eval = NumericPoly(psi)
    for r, t in sample_boundary(boundary, samples, settings=settings):
        M = wedge(r, t)
        scale = psi.max_abs_coefficient() or 1.0
        if abs(float(psi_eval(M))) > 1e-9 * scale:
            raise ValueError(f"Psi does not vanish on the dual curve at {M}")
        w = tangent_w(evaluate_gradient(F_dual, M), M, K)
        for eps in epsilons:
            deviation = abs(float(psi_eval(M - eps * w)) - float(psi_eval(M + eps * w)))
            worst = max(worst, deviation)
    return worst


def quadratic_features(momenta):
    momenta = np.atleast_2d(np.asarray(momenta, dtype=float))
    return np.stack(
        [np.prod(momenta ** np.array(e), axis=1) for e in QUADRATIC_MONOMIALS], axis=1
    )


def quadratic_form(coefficients):
    terms = {e: c for e, c in zip(QUADRATIC_MONOMIALS, coefficients)}
    return MultiPoly(XYZ, terms)


def fit_quadratic_integral(orbit, boundary, settings=DEFAULT_SETTINGS):
    """
    Least-squares quadratic form conserved along the orbit and vanishing on the dual curve.

    Coefficients follow QUADRATIC_MONOMIALS, scaled to unit norm with the largest entry positive.
    """
    features = quadratic_features(orbit.momenta)
    _, singular_values, vt = np.linalg.svd(features[1:] - features[0])
    a, b = vt[-1], vt[-2]
    logging.debug(f"conserved-quadratic singular values: {singular_values}")
    r, t = sample_boundary(boundary, 1, settings=settings)[0]
    anchor = quadratic_features(wedge(r, t))[0]
    coefficients = (anchor @ b) * a - (anchor @ a) * b
    coefficients = coefficients / np.linalg.norm(coefficients)
    if coefficients[np.argmax(np.abs(coefficients))] < 0:
        coefficients = -coefficients
    return coefficients


def write_orbit_csv(orbit, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(ORBIT_HEADER)
    for i, (state, M) in enumerate(zip(orbit.bounces, orbit.momenta)):
        residual = orbit.integral_residuals[i] if orbit.integral_residuals else None
        row = [str(i + 1)]
        row += ["%.17g" % value for value in (*state.r, *state.v, *M)]
        row.append("" if residual is None else "%.17g" % residual)
        writer.writerow(row)
