"""Planar polynomial vector fields and the SIS family."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .exactpoly import X, Y, Poly2, as_rational, compose_affine, evaluate, partial

log = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SisParams:
    """Parameters of ``x' = -bxy - mx + cy + mk``, ``y' = bxy - (m+c)y``.

    b: infectivity, c: recovery, k: population size, m: death rate.
    """

    b: Fraction
    c: Fraction
    k: Fraction
    m: Fraction

    def __post_init__(self):
        for name in ("b", "c", "k", "m"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.b == 0:
            raise ValueError("b must be nonzero (b = 0 makes the system linear)")
        if self.m == 0:
            raise ValueError("m must be nonzero (m = 0 makes x' + y' = 0)")

    @classmethod
    def parse(cls, b, c, k, m) -> "SisParams":
        return cls(as_rational(b), as_rational(c), as_rational(k), as_rational(m))

    def astuple(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.b, self.c, self.k, self.m)


@dataclass(frozen=True)
class Matrix2:
    a11: Fraction
    a12: Fraction
    a21: Fraction
    a22: Fraction

    @property
    def det(self) -> Fraction:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> Fraction:
        return self.a11 + self.a22

    def rows(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def apply(self, vec):
        u, v = vec
        return (self.a11 * u + self.a12 * v, self.a21 * u + self.a22 * v)

    def inverse(self) -> "Matrix2":
        d = self.det
        if d == 0:
            raise ZeroDivisionError("singular matrix")
        return Matrix2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(self.a11), float(self.a12)], [float(self.a21), float(self.a22)]])


@dataclass(frozen=True)
class VectorField:
    """``x' = P(x, y)``, ``y' = Q(x, y)``."""

    P: Poly2
    Q: Poly2

    @property
    def degree(self) -> int:
        return degree(self)

    def __call__(self, x, y) -> Point:
        return (evaluate(self.P, (x, y)), evaluate(self.Q, (x, y)))

    def is_singular(self, at) -> bool:
        p, q = self(*at)
        return p == 0 and q == 0


def make_sis_field(params: SisParams) -> VectorField:
    b, c, k, m = params.astuple()
    xy = X * Y
    P = -b * xy - m * X + c * Y + m * k
    Q = b * xy - (m + c) * Y
    return VectorField(P, Q)


def degree(f: VectorField) -> int:
    """``max(deg P, deg Q)``; the zero field reports 0."""
    d = max(f.P.degree, f.Q.degree)
    return 0 if d == -math.inf else int(d)


def jacobian(f: VectorField, at) -> Matrix2:
    x0, y0 = (as_rational(v) for v in at)
    return Matrix2(
        evaluate(partial(f.P, "x"), (x0, y0)),
        evaluate(partial(f.P, "y"), (x0, y0)),
        evaluate(partial(f.Q, "x"), (x0, y0)),
        evaluate(partial(f.Q, "y"), (x0, y0)),
    )


def translate(f: VectorField, p) -> VectorField:
    """Field ``G(x, y) = F(x + p1, y + p2)``: the point ``p`` moves to the origin."""
    p1, p2 = (as_rational(v) for v in p)
    shift = ((1, 0, p1), (0, 1, p2))
    return VectorField(compose_affine(f.P, shift), compose_affine(f.Q, shift))


# numeric cross-check ---------------------------------------------------------

def _compile(p: Poly2):
    terms = [(float(c), i, j) for (i, j), c in p.items()]

    def fn(x: float, y: float) -> float:
        return sum(c * x**i * y**j for c, i, j in terms)

    return fn


def finite_singular_points_numeric(
    f: VectorField,
    box: Sequence[float] = (-10.0, 10.0, -10.0, 10.0),
    density: int = 21,
    tol: float = 1e-12,
    max_iter: int = 50,
    dedup: float = 1e-8,
) -> List[Tuple[float, float]]:
    """Newton-refine common zeros of (P, Q) from a grid of seeds.

    Seeds that fail to converge are dropped.  Only used to cross-check the
    exact path; nothing in the classification depends on it.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    P, Q = _compile(f.P), _compile(f.Q)
    Px, Py = _compile(partial(f.P, "x")), _compile(partial(f.P, "y"))
    Qx, Qy = _compile(partial(f.Q, "x")), _compile(partial(f.Q, "y"))
    xmin, xmax, ymin, ymax = box
    found: List[np.ndarray] = []
    for x0 in np.linspace(xmin, xmax, density):
        for y0 in np.linspace(ymin, ymax, density):
            z = np.array([x0, y0], dtype=float)
            converged = False
            for _ in range(max_iter):
                F = np.array([P(*z), Q(*z)])
                J = np.array([[Px(*z), Py(*z)], [Qx(*z), Qy(*z)]])
                try:
                    step = np.linalg.solve(J, F)
                except np.linalg.LinAlgError:
                    break
                if not np.all(np.isfinite(step)):
                    break
                z = z - step
                if np.linalg.norm(step) <= tol * (1.0 + np.linalg.norm(z)):
                    converged = True
                    break
            if not converged:
                continue
            scale = 1.0 + float(np.max(np.abs(z)))
            if abs(P(*z)) > 1e-8 * scale**2 or abs(Q(*z)) > 1e-8 * scale**2:
                continue
            if any(np.linalg.norm(z - w) < dedup for w in found):
                continue
            found.append(z)
    found.sort(key=lambda w: (w[0], w[1]))
    return [(float(w[0]), float(w[1])) for w in found]
