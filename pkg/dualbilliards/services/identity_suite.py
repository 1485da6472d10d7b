"""Seeded random inputs for the exact identity checks behind `verify`."""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from dualbilliards.core.exactpoly import XY, XYZ, MultiPoly, PCoeff
from dualbilliards.core.projgeom import Curvature
from dualbilliards.services.expansion import (
    AffineCurveData,
    conservation_chain_check,
    cube_identity_check,
    metric_identity_check,
    mu3_extract,
    third_order_identity_check,
)
from dualbilliards.services.obstruction import hf_identity_check

SELECTORS = ("cube", "hf", "lieu", "third", "mu3", "chain")
MAX_DEGREE = {"cube": 3, "hf": 5, "lieu": 5, "third": 5, "mu3": 3, "chain": 3}


def _coefficient(rng):
    numerator = rng.choice([n for n in range(-5, 6) if n])
    return Fraction(numerator, rng.choice((1, 1, 2, 3)))


def random_poly(rng, variables, max_degree, terms=5, min_degree=1):
    """Random polynomial with a guaranteed term of degree in [min_degree, max_degree]."""
    n = len(variables)
    top = rng.randint(min_degree, max_degree)
    poly = MultiPoly.zero(variables)
    while poly.is_zero() or poly.degree() < min_degree:
        exps = _random_exponents(rng, n, top)
        poly = MultiPoly(variables, {exps: _coefficient(rng)})
        for _ in range(terms - 1):
            degree = rng.randint(0, top)
            poly = poly + MultiPoly(variables, {_random_exponents(rng, n, degree): _coefficient(rng)})
    return poly


def random_form(rng, degree, terms=6):
    """Random homogeneous polynomial of the given degree in (x, y, z)."""
    poly = MultiPoly.zero(XYZ)
    while poly.is_zero():
        for _ in range(terms):
            poly = poly + MultiPoly(XYZ, {_random_exponents(rng, 3, degree): _coefficient(rng)})
    return poly


def _random_exponents(rng, n, degree):
    cuts = sorted(rng.randint(0, degree) for _ in range(n - 1))
    bounds = [0] + cuts + [degree]
    return tuple(bounds[i + 1] - bounds[i] for i in range(n))


@dataclass(frozen=True)
class IdentityCase:
    which: str
    index: int
    g: MultiPoly
    r: Optional[MultiPoly] = None
    K: Curvature = Curvature.SPHERE
    p: Optional[Fraction] = None


def generate_cases(which, cases, seed=0, g=None, p=None):
    """Deterministic case list; a user-supplied g replaces the random ones."""
    if which not in SELECTORS:
        raise ValueError(f"unknown identity selector {which!r}; choose from {', '.join(SELECTORS)}")
    rng = random.Random(seed)
    out = []
    for index in range(cases):
        K = Curvature.SPHERE if index % 2 == 0 else Curvature.HYPERBOLOID
        if which == "hf":
            poly = g if g is not None else random_form(rng, rng.randint(2, MAX_DEGREE["hf"]))
            out.append(IdentityCase(which, index, poly, K=K))
            continue
        poly = g if g is not None else random_poly(rng, XY, MAX_DEGREE[which])
        r = random_poly(rng, XY, MAX_DEGREE["cube"], min_degree=0) if which == "cube" else None
        if which == "chain":
            case_p = Fraction(2) if p is None else Fraction(p)
        else:
            case_p = None if p is None else Fraction(p)
        out.append(IdentityCase(which, index, poly, r=r, K=K, p=case_p))
    return out


def run_case(case):
    """Evaluates one identity case; the result dict always carries "passed"."""
    result = {"case": case.index, "which": case.which, "g": str(case.g)}
    if case.which == "cube":
        result["r"] = str(case.r)
        result["passed"] = cube_identity_check(case.g, case.r)
    elif case.which == "hf":
        result["passed"] = hf_identity_check(case.g)
    elif case.which == "lieu":
        result["curvature"] = case.K.label
        result["passed"] = metric_identity_check(case.g, case.K)
    elif case.which == "third":
        result["passed"] = third_order_identity_check(case.g)
    elif case.which == "mu3":
        p = PCoeff.p() if case.p is None else case.p
        report = mu3_extract(AffineCurveData(case.g, case.K, p))
        result["curvature"] = case.K.label
        result.update(report.to_json())
    else:
        report = conservation_chain_check(AffineCurveData(case.g, case.K, case.p))
        result["curvature"] = case.K.label
        result["p"] = str(case.p)
        result.update(report.to_json())
    return result
