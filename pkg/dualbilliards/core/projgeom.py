"""
Projective plane helpers: points of CP^2, the absolute, momentum wedge and dual conics.

Ambient vectors are plain numpy arrays of shape (3,).
"""

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Tuple

import numpy as np

from dualbilliards.core.exactpoly import XYZ, MultiPoly

PROJECTIVE_TOL = 1e-9


class Curvature(IntEnum):
    """Sign K of the surface: unit sphere or upper sheet of the hyperboloid."""

    SPHERE = 1
    HYPERBOLOID = -1

    @classmethod
    def from_name(cls, name):
        aliases = {"sphere": cls.SPHERE, "hyperboloid": cls.HYPERBOLOID, "hyperbolic": cls.HYPERBOLOID}
        try:
            return aliases[str(name).lower()]
        except KeyError:
            raise ValueError(f"unknown curvature {name!r}") from None

    @property
    def label(self):
        return "sphere" if self is Curvature.SPHERE else "hyperboloid"


@dataclass(frozen=True)
class ProjPoint:
    """Point of CP^2, stored with its largest-modulus coordinate scaled to 1."""

    coords: Tuple[complex, complex, complex]

    @classmethod
    def from_coords(cls, coords):
        values = np.asarray(coords, dtype=complex)
        moduli = np.abs(values)
        top = moduli.max()
        if not np.isfinite(top) or top == 0:
            raise ValueError(f"not a projective point: {coords}")
        # first coordinate within rounding of the maximum, so ties normalize stably
        pivot = int(np.argmax(moduli >= top * (1 - 1e-12)))
        values = values / values[pivot]
        values[pivot] = 1.0
        return cls(tuple(complex(v) for v in values))

    def as_array(self):
        return np.array(self.coords, dtype=complex)

    def is_real(self, tol=PROJECTIVE_TOL):
        return all(abs(c.imag) < tol for c in self.coords)

    def real_part(self):
        return np.array([c.real for c in self.coords])

    def equals(self, other, tol=PROJECTIVE_TOL):
        """Projective equality: all 2x2 minors of the coordinate pair vanish."""
        a, b = self.as_array(), other.as_array()
        minors = np.cross(a, b)
        return float(np.max(np.abs(minors))) < tol

    def sort_key(self, digits=9):
        rounded = []
        for c in self.coords:
            rounded.extend((round(c.real, digits) + 0.0, round(c.imag, digits) + 0.0))
        return (0 if self.is_real() else 1, tuple(rounded))

    def to_json(self):
        return [[c.real, c.imag] for c in self.coords]

    def __str__(self):
        def fmt(c):
            if abs(c.imag) < PROJECTIVE_TOL:
                return f"{c.real:.6g}"
            return f"{c.real:.6g}{c.imag:+.6g}i"

        return "(" + ":".join(fmt(c) for c in self.coords) + ")"


def wedge(a, b):
    """Euclidean cross product, used on both surfaces."""
    return np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def minkowski_form(a, b, K):
    return float(a[0] * b[0] + a[1] * b[1] + int(K) * a[2] * b[2])


def absolute_value(P, K):
    c = P.coords
    return c[0] ** 2 + c[1] ** 2 + int(K) * c[2] ** 2


def absolute_residual(P, K):
    """|x1^2 + x2^2 + K x3^2| on the normalized representative."""
    return abs(absolute_value(P, K))


def on_absolute(P, K, tol=1e-8):
    return absolute_residual(P, K) < tol


def absolute_form(K):
    """x^2 + y^2 + K z^2, the equation of the absolute."""
    x, y, z = (MultiPoly.var(v) for v in XYZ)
    return x * x + y * y + z * z * int(K)


def dual_conic(a1, a2, a3):
    """Dual of the cone a1 x^2 + a2 y^2 + a3 z^2 = 0 (adjugate of the diagonal form)."""
    a1, a2, a3 = Fraction(a1), Fraction(a2), Fraction(a3)
    if a1 * a2 * a3 == 0:
        raise ValueError("dual conic needs three nonzero coefficients")
    return MultiPoly(
        XYZ, {(2, 0, 0): a2 * a3, (0, 2, 0): a1 * a3, (0, 0, 2): a1 * a2}
    )


def dual_point(r, v, K, tol=1e-10):
    """Momentum M = r ^ v of a unit tangent vector v at r."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(minkowski_form(r, r, K) - int(K)) > tol:
        raise ValueError(f"point {r} is not on the {Curvature(K).label}")
    if abs(minkowski_form(r, v, K)) > tol:
        raise ValueError(f"vector {v} is not tangent at {r}")
    if abs(minkowski_form(v, v, K) - 1) > tol:
        raise ValueError(f"vector {v} is not unit")
    return wedge(r, v)


def gradient(G):
    return tuple(G.diff(v) for v in G.variables)


def evaluate_gradient(G, M):
    return np.array([float(g.evaluate(list(M))) for g in gradient(G)])


def _w_components(M, grad, K):
    x1, x2, x3 = M
    g1, g2, g3 = grad
    if int(K) == 1:
        return (x2 * g3 - x3 * g2, x3 * g1 - x1 * g3, x1 * g2 - x2 * g1)
    return (x2 * g3 + x3 * g2, -x3 * g1 - x1 * g3, x1 * g2 - x2 * g1)


def tangent_w(grad, M, K, tol=1e-12):
    """Tangent vector w to the dual curve at M, from the gradient of its equation."""
    grad = np.asarray(grad, dtype=float)
    if float(np.max(np.abs(grad))) < tol:
        raise ValueError(f"gradient vanishes at {M}: singular point of the dual curve")
    return np.array(_w_components(np.asarray(M, dtype=float), grad, K))


def tangent_w_symbolic(G, K):
    """The components of w as polynomials in (x, y, z)."""
    coords = tuple(MultiPoly.var(v, G.variables) for v in G.variables)
    return _w_components(coords, gradient(G), K)


def radial_projection(P, K):
    """Rescales P onto the unit sphere (K=+1) or the de Sitter surface (K=-1)."""
    P = np.asarray(P, dtype=float)
    norm_sq = minkowski_form(P, P, K) if int(K) == -1 else float(P @ P)
    if norm_sq <= 0:
        raise ValueError(f"{P} has no radial projection onto the target surface")
    return P / np.sqrt(norm_sq)
