"""Poincare compactification of planar polynomial fields.

Chart systems are returned with the positive factor ``Delta(z)`` dropped, so
they are orbit-equivalent (same orientation) to the compactified field.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .classify import Classification, Kind, classify_point, reverse_time
from .exactpoly import Poly2, X, Y, divide_exact, rational_roots
from .field import Matrix2, VectorField, degree, jacobian

log = logging.getLogger(__name__)


class Chart(str, Enum):
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    V1 = "V1"
    V2 = "V2"
    V3 = "V3"

    @property
    def index(self) -> int:
        return int(self.value[1])

    @property
    def is_v(self) -> bool:
        return self.value[0] == "V"

    def mirror(self) -> "Chart":
        return Chart(("U" if self.is_v else "V") + self.value[1])


class SNType(str, Enum):
    SN1 = "SN1"
    SN2 = "SN2"


@dataclass(frozen=True)
class ChartSystem:
    chart: Chart
    U: Poly2
    V: Poly2
    scaled: bool = True

    def as_field(self) -> VectorField:
        return VectorField(self.U, self.V)


@dataclass(frozen=True)
class InfinitePoint:
    chart: Chart
    u: Fraction
    classification: Classification
    sn_type: Optional[SNType] = None

    @property
    def location(self) -> Tuple[Fraction, Fraction]:
        return (self.u, Fraction(0))


def _homogenize(p: Poly2, n: int, chart: int) -> Poly2:
    """``v**n * p`` evaluated at the chart substitution."""
    out = {}
    for (i, j), c in p.items():
        e = n - i - j
        if chart == 1:  # x = 1/v, y = u/v
            out[(j, e)] = c
        else:  # x = u/v, y = 1/v
            out[(i, e)] = c
    return Poly2(out)


def _chart(f: VectorField, index: int, mirrored: bool) -> ChartSystem:
    n = degree(f)
    if index == 3:
        U, V = f.P, f.Q
    else:
        Ph = _homogenize(f.P, n, index)
        Qh = _homogenize(f.Q, n, index)
        if index == 1:
            U, V = Qh - X * Ph, -(Y * Ph)
        else:
            U, V = Ph - X * Qh, -(Y * Qh)
    chart = Chart(("V" if mirrored else "U") + str(index))
    if mirrored and (n - 1) % 2:
        U, V = -U, -V
    return ChartSystem(chart, U, V)


def chart_u1(f: VectorField) -> ChartSystem:
    """Chart ``x = 1/v``, ``y = u/v`` (the half-sphere ``x > 0``)."""
    return _chart(f, 1, False)


def chart_u2(f: VectorField) -> ChartSystem:
    """Chart ``x = u/v``, ``y = 1/v`` (the half-sphere ``y > 0``)."""
    return _chart(f, 2, False)


def chart_u3(f: VectorField) -> ChartSystem:
    return _chart(f, 3, False)


def chart_system(f: VectorField, chart: Chart) -> ChartSystem:
    """Any of the six charts; V charts carry the ``(-1)**(n-1)`` factor."""
    chart = Chart(chart)
    return _chart(f, chart.index, chart.is_v)


def equator_invariant(cs: ChartSystem) -> bool:
    """True when ``v`` divides ``v'`` exactly."""
    if cs.V.is_zero():
        return True
    return divide_exact(cs.V, Y) is not None


def classify_sn_type(J: Matrix2) -> SNType:
    """SN1 for the Jacobian shape ``(lam *; 0 0)``, SN2 for ``(0 *; 0 lam)``."""
    if J.a21 == 0 and J.a22 == 0 and J.a11 != 0:
        return SNType.SN1
    if J.a11 == 0 and J.a21 == 0 and J.a22 != 0:
        return SNType.SN2
    raise ValueError(f"Jacobian {J.rows()} matches neither saddle-node shape")


def classify_infinite_point(f: VectorField, chart: Chart, u) -> InfinitePoint:
    """Classify the equator point ``(u, 0)`` of the given U1/U2/V1/V2 chart."""
    chart = Chart(chart)
    if chart.index == 3:
        raise ValueError("charts U3/V3 contain no infinite points")
    return _classify_on_equator(chart_system(f, chart), u)


def _classify_on_equator(cs: ChartSystem, u) -> InfinitePoint:
    chart = cs.chart
    u = Fraction(u)
    g = cs.as_field()
    if not g.is_singular((u, 0)):
        raise ValueError(f"({u}, 0) is not singular in chart {chart.value}")
    c = classify_point(g, (u, 0))
    sn = None
    if c.kind is Kind.SADDLE_NODE:
        sn = classify_sn_type(jacobian(g, (u, 0)))
    return InfinitePoint(chart, u, c, sn)


def infinite_singular_points(f: VectorField) -> List[InfinitePoint]:
    """All infinite singular points visible in the charts U1 and U2, with V copies.

    Points of U2 other than its origin are also points of U1 or V1 and are
    not listed twice.
    """
    u1 = chart_u1(f)
    restricted = Poly2({(i, 0): c for (i, j), c in u1.U.items() if j == 0})
    if restricted.is_zero():
        raise ValueError("equator of singularities: u' vanishes identically on v = 0")
    coeffs = restricted.univariate("x")
    roots = rational_roots(coeffs)
    _warn_irrational(coeffs, roots)
    out: List[InfinitePoint] = []
    for r in roots:
        out.append(_classify_on_equator(u1, r))
    u2 = chart_u2(f)
    if u2.U.coeff(0, 0) == 0:
        out.append(_classify_on_equator(u2, 0))
    # V charts carry the factor (-1)**(n-1): the same point, time reversed when n is even
    n = degree(f)
    mirrored = [
        InfinitePoint(p.chart.mirror(), p.u,
                      reverse_time(p.classification) if (n - 1) % 2 else p.classification,
                      p.sn_type)
        for p in out
    ]
    return out + mirrored


def _warn_irrational(coeffs, roots) -> None:
    if len(coeffs) < 2:
        return
    numeric = np.roots([float(c) for c in reversed(coeffs)])
    real = [z.real for z in numeric if abs(z.imag) < 1e-9]
    exact = [float(r) for r in roots]
    extra = [z for z in real if all(abs(z - e) > 1e-7 for e in exact)]
    if extra:
        log.warning("skipping %d irrational infinite singular point(s) near u = %s",
                    len(extra), ", ".join(f"{z:.6g}" for z in extra))


def chart_to_disc(chart: Chart, u: float, v: float) -> Tuple[float, float]:
    """Disc coordinates of a chart point; ``v`` must lie on the visible side."""
    chart = Chart(chart)
    s = -1.0 if chart.is_v else 1.0
    nrm = math.sqrt(1.0 + u * u + v * v)
    if chart.index == 1:
        return (s / nrm, s * u / nrm)
    if chart.index == 2:
        return (s * u / nrm, s / nrm)
    return (u / nrm, v / nrm)


def visible_side(chart: Chart) -> int:
    """Sign of ``v`` on the northern hemisphere for this chart."""
    return -1 if Chart(chart).is_v else 1


class DiscField:
    """Compactified flow in Poincare-disc coordinates.

    With ``w = sqrt(1 - X**2 - Y**2)`` and ``Ph(X, Y, w) = w**n P(X/w, Y/w)``
    the field is ``(Ph - X*R, Qh - Y*R)``, ``R = X*Ph + Y*Qh``.  It equals the
    push-forward of the planar field times the positive factor ``w**(n-1)``
    and extends continuously to the equator, which it leaves invariant.
    The chart systems are the same field in other coordinates.
    """

    def __init__(self, f: VectorField):
        n = degree(f)
        self.degree = n
        self._p = [(float(c), i, j, n - i - j) for (i, j), c in f.P.items()]
        self._q = [(float(c), i, j, n - i - j) for (i, j), c in f.Q.items()]

    def __call__(self, X: float, Y: float) -> Tuple[float, float]:
        w = math.sqrt(max(0.0, 1.0 - X * X - Y * Y))
        ph = 0.0
        for c, i, j, e in self._p:
            ph += c * X**i * Y**j * w**e
        qh = 0.0
        for c, i, j, e in self._q:
            qh += c * X**i * Y**j * w**e
        r = X * ph + Y * qh
        return (ph - X * r, qh - Y * r)


def disc_dynamics(f: VectorField) -> DiscField:
    return DiscField(f)
