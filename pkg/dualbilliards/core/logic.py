import os
import io
import logging

import numpy as np
from dotenv import load_dotenv

from dualbilliards.core.errors import DegenerateInputError
from dualbilliards.core.exactpoly import MultiPoly
from dualbilliards.core.projgeom import dual_conic
from dualbilliards.core.state import BatchState
from dualbilliards.services.dynamics import (
    BilliardSettings,
    ConeBoundary,
    launch_state,
    midpoint_remark_check,
    run_orbit,
    theorem_pm_check,
    write_orbit_csv,
)
from dualbilliards.services.identity_suite import generate_cases, run_case
from dualbilliards.services.obstruction import (
    ObstructionProblem,
    hess_divisibility,
    theorem_main_verdict,
)
from dualbilliards.services.utils import run_parallel_cases

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_FAIL = 3
EXIT_NUMERIC = 4


class Config:
    """Central configuration: ambient settings from the environment, numerical defaults."""

    def __init__(self):
        load_dotenv()
        self.log_level = os.environ.get("LOG_LEVEL", "INFO")
        # numerical defaults, each surfaced as a CLI flag
        self.point_tol = 1e-8
        self.absolute_tol = 1e-8
        self.hit_tol = 1e-12
        self.state_tol = 1e-10
        self.fd_step = 1e-3
        self.scan_points = 256
        self.refine_rounds = 2
        self.t_max_sphere = float(np.pi)
        self.t_max_hyperboloid = 12.0
        self.jobs = 1
        self.seed = 0

    def billiard_settings(self, **overrides):
        values = {
            "scan_points": self.scan_points,
            "refine_rounds": self.refine_rounds,
            "hit_tol": self.hit_tol,
            "state_tol": self.state_tol,
            "fd_step": self.fd_step,
            "t_max_sphere": self.t_max_sphere,
            "t_max_hyperboloid": self.t_max_hyperboloid,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return BilliardSettings(**values)


config = Config()
batch_state = BatchState()


def default_k(F, Q):
    """Smallest k >= 1 making n = k deg F + deg Q even."""
    d, e = F.degree(), Q.degree()
    return 1 if (d + e) % 2 == 0 else (2 if e % 2 == 0 else None)


def run_check(F, Q=None, k=None, K=1, absolute_tol=None, point_tol=None):
    """Verdict plus divisibility identity; returns (exit code, report dict)."""
    Q = Q if Q is not None else MultiPoly.constant(1)
    if k is None:
        k = default_k(F, Q)
        if k is None:
            raise DegenerateInputError(
                f"n = k*{F.degree()} + {Q.degree()} is odd for every k: alpha is never an integer"
            )
    prob = ObstructionProblem(F, Q, k, K)
    report = theorem_main_verdict(
        prob,
        absolute_tol=absolute_tol or config.absolute_tol,
        point_tol=point_tol or config.point_tol,
    )
    if prob.alpha is not None and prob.alpha >= 0:
        report.hess_identity = hess_divisibility(prob)
    code = EXIT_OK if report.verdict.passed else EXIT_FAIL
    return code, report.to_json()


def run_verify(which, cases, seed=0, g=None, p=None, jobs=1):
    """Runs one identity batch; returns (exit code, summary dict)."""
    batch_state.start_batch(which, seed)
    try:
        batch = generate_cases(which, cases, seed=seed, g=g, p=p)
        results = run_parallel_cases(batch, run_case, batch_state, which, jobs)
    finally:
        snapshot = batch_state.get_snapshot()
        message = (
            "✅ All identities hold"
            if snapshot["success"]
            else f"❌️ Completed with {len(snapshot['failures'])} failures"
        )
        logging.info("========== " + message + " ==========")
        batch_state.finish_batch()
    passed = all(r and r.get("passed") for r in results)
    summary = {
        "which": which,
        "seed": seed,
        "cases": len(results),
        "passed": sum(1 for r in results if r and r.get("passed")),
        "results": results,
    }
    return (EXIT_OK if passed else EXIT_FAIL), summary


def run_simulate(C, K, bounces, psi=None, seed=0, settings=None, interior_sign=1, start=None):
    """Orbit CSV text and max |Psi| drift; returns (exit code, csv text, max residual)."""
    if bounces < 1:
        raise ValueError(f"bounce count must be at least 1, got {bounces}")
    settings = settings or config.billiard_settings()
    boundary = ConeBoundary(C, K, interior_sign)
    state = start if start is not None else launch_state(boundary, seed=seed, settings=settings)
    orbit = run_orbit(state, boundary, bounces, psi=psi, settings=settings)
    buffer = io.StringIO()
    write_orbit_csv(orbit, buffer)
    residual = orbit.max_residual() if psi is not None else None
    return EXIT_OK, buffer.getvalue(), residual


def run_certify(C, K, F_dual, psi=None, epsilons=(0.1, 0.01), samples=200, midpoint_eps=1e-3, tol=1e-9, settings=None):
    """Both numeric certificates of the dual construction on a cone boundary."""
    settings = settings or config.billiard_settings()
    boundary = ConeBoundary(C, K)
    psi = psi if psi is not None else F_dual
    deviation = theorem_pm_check(boundary, psi, F_dual, list(epsilons), samples, settings)
    midpoint = midpoint_remark_check(boundary, min(samples, 100), midpoint_eps, settings)
    summary = {
        "curvature": boundary.K.label,
        "epsilons": [float(e) for e in epsilons],
        "samples": samples,
        "pm_deviation": deviation,
        "midpoint_residual": midpoint,
        "tol": tol,
        "passed": deviation < tol and midpoint < tol,
    }
    logging.info(f"certify: deviation {deviation:.3g}, midpoint residual {midpoint:.3g}")
    return (EXIT_OK if summary["passed"] else EXIT_FAIL), summary


def diagonal_dual(C):
    """Dual conic of a diagonal quadratic cone a1 x^2 + a2 y^2 + a3 z^2, else None."""
    squares = ((2, 0, 0), (0, 2, 0), (0, 0, 2))
    if C.degree() != 2 or set(C.terms) - set(squares):
        return None
    a1, a2, a3 = (C.terms.get(e, 0) for e in squares)
    if not (a1 and a2 and a3):
        return None
    return dual_conic(a1, a2, a3)
