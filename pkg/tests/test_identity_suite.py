import random
from fractions import Fraction

import pytest

from dualbilliards.core.exactpoly import XY, XYZ
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.core.projgeom import Curvature
from dualbilliards.core.state import BatchState
from dualbilliards.services.identity_suite import (
    MAX_DEGREE,
    SELECTORS,
    generate_cases,
    random_form,
    random_poly,
    run_case,
)
from dualbilliards.services.utils import run_parallel_cases


def test_random_poly_respects_degree_bounds():
    rng = random.Random(0)
    for _ in range(100):
        p = random_poly(rng, XY, 4)
        assert 1 <= p.degree() <= 4


def test_random_form_is_homogeneous():
    rng = random.Random(1)
    for degree in range(2, 6):
        form = random_form(rng, degree)
        assert form.variables == XYZ
        assert form.is_homogeneous() and form.degree() == degree


def test_cases_are_deterministic():
    first = [str(c.g) for c in generate_cases("third", 10, seed=4)]
    second = [str(c.g) for c in generate_cases("third", 10, seed=4)]
    other = [str(c.g) for c in generate_cases("third", 10, seed=5)]
    assert first == second
    assert first != other


def test_cases_alternate_curvature():
    cases = generate_cases("lieu", 4)
    assert [c.K for c in cases] == [Curvature.SPHERE, Curvature.HYPERBOLOID] * 2


def test_unknown_selector():
    with pytest.raises(ValueError):
        generate_cases("bogus", 3)


def test_chain_defaults_to_p_two():
    assert all(c.p == Fraction(2) for c in generate_cases("chain", 2))
    assert all(c.p is None for c in generate_cases("mu3", 2))


@pytest.mark.parametrize("which", ["cube", "hf", "lieu", "third"])
def test_exact_selectors_pass(which):
    for case in generate_cases(which, 12, seed=9):
        result = run_case(case)
        assert result["passed"], result
        assert case.g.degree() <= MAX_DEGREE[which]


def test_mu3_with_a_fixed_circle():
    circle = parse_polynomial("x^2 + y^2 - 1/4", XY)
    results = [run_case(c) for c in generate_cases("mu3", 2, g=circle, p=Fraction(2))]
    assert all(r["passed"] for r in results)
    assert {r["curvature"] for r in results} == {"sphere", "hyperboloid"}
    assert all(r["residual_mod_g"] == "0" for r in results)


def test_mu3_random_cases_with_formal_p():
    for case in generate_cases("mu3", 4, seed=2):
        result = run_case(case)
        assert result["even_coefficients_vanish"]
        assert result["mu1_matches"]
        assert result["passed"]


def test_chain_random_cases():
    for case in generate_cases("chain", 6, seed=3, p=Fraction(0)):
        assert run_case(case)["identity_holds"]


def test_parallel_runs_keep_input_order():
    cases = generate_cases("third", 16, seed=11)
    serial = run_parallel_cases(cases, run_case, BatchState(), "third", jobs=1)
    threaded = run_parallel_cases(cases, run_case, BatchState(), "third", jobs=4)
    assert serial == threaded
    assert [r["case"] for r in serial] == list(range(16))


def test_failures_are_recorded_not_raised():
    state = BatchState()

    def explode(case):
        raise RuntimeError(f"boom {case}")

    results = run_parallel_cases([1, 2], explode, state, "demo")
    assert results == [{"passed": False, "error": "boom 1"}, {"passed": False, "error": "boom 2"}]
    snapshot = state.get_snapshot()
    assert not snapshot["success"]
    assert [f["case"] for f in snapshot["failures"]] == ["demo#0", "demo#1"]


def test_selectors_cover_the_suite():
    assert set(SELECTORS) == set(MAX_DEGREE)
