import io

import numpy as np
import pytest

from dualbilliards.core.errors import NumericalFailure
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.core.projgeom import Curvature, dual_conic, minkowski_form, wedge
from dualbilliards.services.dynamics import (
    ORBIT_HEADER,
    BilliardState,
    ConeBoundary,
    check_state,
    fit_quadratic_integral,
    geodesic,
    geodesic_curvature,
    interior_point,
    launch_state,
    midpoint_remark_check,
    next_hit,
    outer_billiard_chord,
    reflect,
    run_orbit,
    sample_boundary,
    theorem_pm_check,
    unit_normal,
    write_orbit_csv,
)

CAP = "x^2 + y^2 - 1/4*z^2"
CONIC = "x^2 + 2*y^2 - 3*z^2"
# on the hyperboloid the cone must sit inside the light cone to cut a bounded table
CONICS = {
    Curvature.SPHERE: ((1, 2, -3), CONIC),
    Curvature.HYPERBOLOID: ((4, 8, -3), "4*x^2 + 8*y^2 - 3*z^2"),
}
POLE = np.array([0.0, 0.0, 1.0])


def boundary(text, K=Curvature.SPHERE):
    return ConeBoundary(parse_polynomial(text), K)


def pole_state():
    return BilliardState(POLE.copy(), np.array([1.0, 0.0, 0.0]))


@pytest.mark.parametrize("K", list(Curvature))
def test_geodesic_stays_on_surface(K):
    state = pole_state()
    for t in (0.3, 1.7, 2.9):
        moved = geodesic(state, t, K)
        check_state(moved, K)


def test_cap_hit_time_and_curvature_on_sphere():
    cap = boundary(CAP)
    t_hit, hit = next_hit(pole_state(), cap)
    assert t_hit == pytest.approx(np.arctan(0.5), abs=1e-12)
    assert abs(cap.signed(hit.r)) < 1e-12
    assert geodesic_curvature(cap, hit.r) == pytest.approx(2.0, abs=1e-6)


def test_circle_hit_time_and_curvature_on_hyperboloid():
    circle = boundary(CAP, Curvature.HYPERBOLOID)
    t_hit, hit = next_hit(pole_state(), circle)
    assert t_hit == pytest.approx(np.arctanh(0.5), abs=1e-12)
    assert geodesic_curvature(circle, hit.r) == pytest.approx(2.0, abs=1e-6)


def test_great_circle_is_a_geodesic():
    equator = boundary("z")
    r = np.array([1.0, 0.0, 0.0])
    assert geodesic_curvature(equator, r) == pytest.approx(0.0, abs=1e-6)


def test_normal_points_out_of_the_domain():
    cap = boundary(CAP)
    _, hit = next_hit(pole_state(), cap)
    n = unit_normal(cap, hit.r)
    assert minkowski_form(n, hit.r, Curvature.SPHERE) == pytest.approx(0.0, abs=1e-12)
    assert cap.signed(hit.r + 1e-4 * n) > 0


@pytest.mark.parametrize("K", list(Curvature))
def test_reflection_keeps_unit_speed_and_turns_inward(K):
    circle = boundary(CAP, K)
    state = BilliardState(POLE.copy(), np.array([0.6, 0.8, 0.0]))
    _, hit = next_hit(state, circle)
    bounced = reflect(hit, circle)
    check_state(bounced, K)
    n = unit_normal(circle, hit.r)
    assert minkowski_form(hit.v, n, K) > 0
    assert minkowski_form(bounced.v, n, K) == pytest.approx(-minkowski_form(hit.v, n, K))


def test_start_outside_the_domain_fails():
    cap = boundary(CAP)
    outside = BilliardState(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    with pytest.raises(NumericalFailure):
        next_hit(outside, cap)


def test_cone_without_real_domain_fails():
    with pytest.raises(NumericalFailure):
        interior_point(boundary("x^2 + 2*y^2 + 3*z^2"))


def test_interior_point_of_the_conic_table():
    assert np.allclose(interior_point(boundary(CONIC)), POLE)


def test_zero_bounces_rejected():
    with pytest.raises(ValueError):
        run_orbit(pole_state(), boundary(CAP), 0)


def test_launch_state_is_seeded():
    cap = boundary(CAP)
    a, b = launch_state(cap, seed=3), launch_state(cap, seed=3)
    assert np.array_equal(a.r, b.r) and np.array_equal(a.v, b.v)
    check_state(a, Curvature.SPHERE)
    assert cap.signed(a.r) < 0


@pytest.mark.parametrize("K", list(Curvature))
def test_momentum_is_constant_along_a_flight(K):
    circle = boundary(CAP, K)
    start = launch_state(circle, seed=1)
    _, hit = next_hit(start, circle)
    assert np.allclose(wedge(start.r, start.v), wedge(hit.r, hit.v), atol=1e-12)


@pytest.mark.parametrize("K", list(Curvature))
def test_conic_table_conserves_the_dual_conic(K):
    coefficients, cone = CONICS[K]
    table = boundary(cone, K)
    psi = dual_conic(*coefficients)
    orbit = run_orbit(launch_state(table, seed=0), table, 1000, psi=psi)
    assert len(orbit.bounces) == 1000
    assert orbit.max_residual() < 1e-8


def test_fit_recovers_the_dual_conic():
    table = boundary(CONIC)
    orbit = run_orbit(launch_state(table, seed=2), table, 300)
    coefficients = fit_quadratic_integral(orbit, table)
    expected = np.array([6.0, 3.0, -2.0, 0.0, 0.0, 0.0]) / 7.0
    assert np.allclose(coefficients, expected, atol=1e-6)


@pytest.mark.slow
def test_cap_conserves_angular_momentum_over_long_runs():
    cap = boundary(CAP)
    orbit = run_orbit(launch_state(cap, seed=0), cap, 10_000, psi=parse_polynomial("z"))
    assert orbit.max_residual() < 1e-9


def test_sample_boundary_returns_unit_tangents():
    table = boundary(CONIC)
    for r, t in sample_boundary(table, 12):
        assert abs(table.signed(r)) < 1e-12
        assert minkowski_form(t, t, Curvature.SPHERE) == pytest.approx(1.0)
        assert minkowski_form(t, unit_normal(table, r), Curvature.SPHERE) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("K", list(Curvature))
def test_chord_midpoint(K):
    circle = boundary(CAP, K)
    r, t = sample_boundary(circle, 1)[0]
    n_in = -unit_normal(circle, r)
    k = geodesic_curvature(circle, r)
    M, P_minus, P_plus, _, _ = outer_billiard_chord(r, t, n_in, k, 1e-3, K)
    assert np.allclose(P_minus + P_plus, 2 * M, atol=1e-12)


@pytest.mark.parametrize("K", list(Curvature))
def test_tangent_point_is_midpoint_of_dual_chord(K):
    table = boundary(CONICS[K][1], K)
    assert midpoint_remark_check(table, 100, 1e-3) < 1e-9


@pytest.mark.parametrize("K", list(Curvature))
def test_dual_conic_satisfies_the_symmetry_identity(K):
    coefficients, cone = CONICS[K]
    table = boundary(cone, K)
    F_dual = dual_conic(*coefficients)
    assert theorem_pm_check(table, F_dual, F_dual, [0.1, 0.01], samples=200) < 1e-10


def test_negative_control_deviates_at_third_order():
    table = boundary(CONIC)
    F_dual = dual_conic(1, 2, -3)
    psi = F_dual * parse_polynomial("x + 2*y + 3*z") ** 2
    coarse = theorem_pm_check(table, psi, F_dual, [0.1], samples=50)
    fine = theorem_pm_check(table, psi, F_dual, [0.01], samples=50)
    assert np.log10(coarse / fine) == pytest.approx(3.0, abs=0.2)


def test_psi_must_vanish_on_the_dual_curve():
    table = boundary(CONIC)
    with pytest.raises(ValueError):
        theorem_pm_check(table, parse_polynomial("x^2 + y^2 + z^2"), dual_conic(1, 2, -3), [0.1], samples=4)


def test_orbit_csv_layout():
    cap = boundary(CAP)
    orbit = run_orbit(launch_state(cap), cap, 5, psi=parse_polynomial("z"))
    buffer = io.StringIO()
    write_orbit_csv(orbit, buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == ",".join(ORBIT_HEADER)
    assert len(lines) == 6
    assert lines[1].split(",")[0] == "1"
    assert float(lines[1].split(",")[-1]) == 0.0
