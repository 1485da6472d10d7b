"""
Points of intersection of two projective plane curves.

The curves are moved by a fixed generic integer coordinate change, both eliminants
(res_z and res_x in the chart y = 1) are decomposed into squarefree factors, and the
numeric roots are paired by residual. A chart is rejected when an intersection point
escapes it or when two points share a projection; the next chart is then tried.
"""

import logging
from dataclasses import dataclass

import numpy as np

from dualbilliards.core.errors import DegenerateInputError, NumericalFailure
from dualbilliards.core.exactpoly import (
    XYZ,
    MultiPoly,
    dense_coefficients,
    resultant,
    squarefree_decomposition,
)
from dualbilliards.core.projgeom import ProjPoint

CHARTS = (
    ((3, 1, 2), (1, 4, -1), (2, -1, 5)),
    ((2, -3, 1), (1, 1, 4), (5, 2, -1)),
    ((1, 5, -2), (3, -1, 2), (-2, 3, 4)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
)
MATCH_TOL = 1e-6
NEWTON_STEPS = 4


@dataclass(frozen=True)
class CurvePoint:
    point: ProjPoint
    multiplicity: int


def relative_residual(poly, values):
    """|poly(values)| divided by the sum of the absolute term magnitudes."""
    total, scale = 0j, 0.0
    for exps, coeff in poly.terms.items():
        term = complex(float(coeff))
        for v, e in zip(values, exps):
            if e:
                term *= v**e
        total += term
        scale += abs(term)
    if scale == 0:
        return 0.0
    return abs(total) / scale


def point_residual(poly, point):
    """max |poly| at the normalized representative, relative to the largest coefficient."""
    size = poly.max_abs_coefficient() or 1.0
    return abs(complex(poly.evaluate(list(point.coords)))) / size


def _polished_roots(dense):
    """Complex roots of a squarefree rational polynomial (lowest power first)."""
    coeffs = np.array([float(c) for c in reversed(dense)])
    if len(coeffs) < 2:
        return np.array([], dtype=complex)
    roots = np.roots(coeffs).astype(complex)
    deriv = np.polyder(coeffs)
    for _ in range(NEWTON_STEPS):
        slope = np.polyval(deriv, roots)
        safe = np.abs(slope) > 0
        roots[safe] = roots[safe] - np.polyval(coeffs, roots[safe]) / slope[safe]
    return roots


def _roots_with_multiplicity(eliminant):
    out = []
    for factor, multiplicity in squarefree_decomposition(eliminant):
        for root in _polished_roots(dense_coefficients(factor)):
            out.append((complex(root), multiplicity))
    return out


def _transform(poly, T):
    images = [
        sum((MultiPoly.var(v) * row[j] for j, v in enumerate(XYZ)), MultiPoly.zero())
        for row in T
    ]
    return poly.compose(images)


def _try_chart(F, G, T):
    """Intersection points in one chart, or None when the chart is not generic."""
    dF, dG = F.degree(), G.degree()
    Ft, Gt = _transform(F, T), _transform(G, T)
    # (0:0:1) and (1:0:0) must be off both curves for full-degree eliminants
    for poly, d in ((Ft, dF), (Gt, dG)):
        if poly.degree_in("z") != d or poly.degree_in("x") != d:
            return None
    f = Ft.specialize({"y": 1})
    g = Gt.specialize({"y": 1})
    res_z = resultant(f, g, "z")
    if res_z.is_zero():
        raise DegenerateInputError("the curves share a common component")
    res_x = resultant(f, g, "x")
    expected = dF * dG
    if res_z.degree() != expected or res_x.degree() != expected:
        logging.debug(f"chart {T}: eliminant degree dropped below {expected}")
        return None

    x_roots = _roots_with_multiplicity(res_z)
    z_roots = _roots_with_multiplicity(res_x)
    used = set()
    points = []
    for x0, mult in x_roots:
        candidates = [
            j
            for j, (z0, zmult) in enumerate(z_roots)
            if max(relative_residual(f, (x0, z0)), relative_residual(g, (x0, z0)))
            < MATCH_TOL
        ]
        if len(candidates) != 1 or candidates[0] in used:
            logging.debug(f"chart {T}: ambiguous lift of x = {x0}")
            return None
        j = candidates[0]
        if z_roots[j][1] != mult:
            return None
        used.add(j)
        local = np.array([x0, 1.0, z_roots[j][0]])
        original = np.array(T, dtype=float) @ local
        points.append(CurvePoint(ProjPoint.from_coords(original), mult))
    return points


def intersect_curves(F, G):
    """All points of V(F) and V(G) in CP^2 with intersection multiplicities."""
    for poly in (F, G):
        if poly.variables != XYZ:
            raise ValueError(f"expected a polynomial in {XYZ}, got {poly.variables}")
        if poly.is_zero() or poly.is_constant() or not poly.is_homogeneous():
            raise ValueError(f"{poly} is not a nonconstant homogeneous polynomial")
    for T in CHARTS:
        points = _try_chart(F, G, T)
        if points is not None:
            return sorted(points, key=lambda cp: cp.point.sort_key())
    raise NumericalFailure("no generic elimination chart found for the intersection")
