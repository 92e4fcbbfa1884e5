"""Numerical phase portraits on the Poincare disc, rendered as SVG."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from .classify import Classification, Kind
from .compactify import chart_to_disc, disc_dynamics, visible_side
from .field import make_sis_field
from .sis_analysis import PortraitReport


class DiscPoint(NamedTuple):
    X: float
    Y: float


def project_to_disc(x: float, y: float) -> DiscPoint:
    s = math.sqrt(1.0 + x * x + y * y)
    return DiscPoint(x / s, y / s)


def disc_to_plane(p: Sequence[float]) -> Tuple[float, float]:
    X, Y = p
    w = math.sqrt(1.0 - X * X - Y * Y)
    return (X / w, Y / w)


@dataclass(frozen=True)
class Controls:
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = 0.05
    eps_sing: float = 1e-3
    eps_eq: float = 1e-4
    max_arc: float = 10.0
    max_steps: int = 50_000
    min_step: float = 1e-14


@dataclass
class Orbit:
    points: List[DiscPoint]
    origin_tag: str
    direction: str = "forward"
    reason: str = ""
    stop_index: Optional[int] = None
    diagnostic: Optional[str] = None

    @property
    def end(self) -> DiscPoint:
        return self.points[-1]

    @property
    def arc_length(self) -> float:
        return sum(math.dist(a, b) for a, b in zip(self.points, self.points[1:]))


class Seed(NamedTuple):
    point: DiscPoint
    direction: str
    tag: str


# Dormand-Prince 5(4)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class _Stalled(Exception):
    pass


def _unit_field(dyn: Callable, sign: float):
    def g(X: float, Y: float) -> Tuple[float, float]:
        fx, fy = dyn(X, Y)
        n = math.hypot(fx, fy)
        if n == 0.0 or not math.isfinite(n):
            raise _Stalled
        return (sign * fx / n, sign * fy / n)

    return g


def _dp_step(g, z, h, k1):
    ks = [k1]
    for i in range(1, 7):
        a = _A[i]
        zx = z[0] + h * sum(a[j] * ks[j][0] for j in range(i))
        zy = z[1] + h * sum(a[j] * ks[j][1] for j in range(i))
        ks.append(g(zx, zy))
    nx = z[0] + h * sum(b * k[0] for b, k in zip(_B5, ks))
    ny = z[1] + h * sum(b * k[1] for b, k in zip(_B5, ks))
    ex = h * sum(e * k[0] for e, k in zip(_E, ks))
    ey = h * sum(e * k[1] for e, k in zip(_E, ks))
    return (nx, ny), (ex, ey), ks[6]


def _closest_on_segment(a, b, s):
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((s[0] - a[0]) * dx + (s[1] - a[1]) * dy) / L2))
    return (a[0] + t * dx, a[1] + t * dy)


def integrate_orbit(dyn: Callable, seed: Sequence[float], direction: str = "forward",
                    stops: Sequence[Sequence[float]] = (), controls: Controls = Controls(),
                    tag: str = "GenericSeed",
                    project: Optional[Callable] = None) -> Orbit:
    """Trace the orbit through ``seed`` with an adaptive Dormand-Prince scheme.

    The field is normalised to unit speed, so the independent variable is arc
    length in the disc.  Stops: within ``eps_sing`` of a point in ``stops``,
    within ``eps_eq`` of the equator, arc-length budget, step underflow.
    A stop point or the equator only counts once the orbit has been outside
    its tolerance band, so seeds placed next to their source escape first.
    ``project`` maps each accepted point back onto a known invariant curve;
    without it, round-off grows without bound along a separatrix traced
    backward into a saddle-node.
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    c = controls
    g = _unit_field(dyn, 1.0 if direction == "forward" else -1.0)
    z = (float(seed[0]), float(seed[1]))
    pts = [DiscPoint(*z)]
    orbit = Orbit(pts, tag, direction)
    armed = [math.dist(z, s) > c.eps_sing for s in stops]
    eq_armed = 1.0 - math.hypot(*z) > c.eps_eq
    try:
        k1 = g(*z)
    except _Stalled:
        orbit.reason = "stalled"
        return orbit
    h = min(c.max_step, 1e-3)
    arc = 0.0
    steps = 0
    while True:
        steps += 1
        if steps > c.max_steps:
            orbit.reason = "max_steps"
            orbit.diagnostic = f"step budget {c.max_steps} exhausted"
            return orbit
        h = min(h, c.max_step, c.max_arc - arc)
        try:
            znew, err, k7 = _dp_step(g, z, h, k1)
        except _Stalled:
            h *= 0.25
            if h < c.min_step:
                orbit.reason = "stalled"
                return orbit
            continue
        sc = [c.atol + c.rtol * max(abs(z[i]), abs(znew[i])) for i in range(2)]
        en = max(abs(err[0]) / sc[0], abs(err[1]) / sc[1])
        if en > 1.0 or math.hypot(*znew) > 1.0 + 1e-12:
            h *= max(0.2, 0.9 * en ** -0.2) if en > 1.0 else 0.5
            if h < c.min_step:
                orbit.reason = "underflow"
                orbit.diagnostic = f"step size fell below {c.min_step:g} at {z}"
                return orbit
            continue
        if project is not None:
            znew = project(znew)
            try:
                k7 = g(*znew)
            except _Stalled:
                orbit.reason = "stalled"
                return orbit
        for i, s in enumerate(stops):
            if armed[i]:
                cp = _closest_on_segment(z, znew, s)
                if math.dist(cp, s) <= c.eps_sing:
                    pts.append(DiscPoint(*cp))
                    orbit.reason = "singular"
                    orbit.stop_index = i
                    return orbit
        r = math.hypot(*znew)
        if eq_armed and 1.0 - r <= c.eps_eq:
            pts.append(DiscPoint(*znew))
            orbit.reason = "equator"
            return orbit
        arc += math.dist(z, znew)
        z, k1 = znew, k7
        pts.append(DiscPoint(*z))
        for i, s in enumerate(stops):
            if not armed[i] and math.dist(z, s) > c.eps_sing:
                armed[i] = True
        if not eq_armed and 1.0 - r > c.eps_eq:
            eq_armed = True
        if arc >= c.max_arc - 1e-15:
            orbit.reason = "arc_length"
            return orbit
        h *= min(5.0, 0.9 * en ** -0.2) if en > 0 else 5.0


# seeds -------------------------------------------------------------------------

def _unit(v):
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def _local_seeds(c: Classification, eps: float):
    """Offsets and directions of the separatrices leaving a saddle or saddle-node."""
    out = []
    if c.kind is Kind.SADDLE and c.eigen is not None and c.eigen.vectors is not None:
        for (lam, _), vec in zip(c.eigen.values, c.eigen.vectors):
            d = "forward" if lam > 0 else "backward"
            for s in (1, -1):
                out.append(((s * eps * vec[0], s * eps * vec[1]), d))
        return out
    ev = c.evidence
    if ev is None or ev.alpha is None:
        return out
    T = ev.change
    k = _unit((float(T.a11), float(T.a21)))
    e = _unit((float(T.a12), float(T.a22)))
    lam_pos = ev.lam > 0
    trans = "forward" if lam_pos else "backward"
    if ev.alpha % 2 == 0:
        side = ev.hyperbolic_side
        out.append(((side * eps * k[0], side * eps * k[1]), "backward" if lam_pos else "forward"))
        for s in (1, -1):
            out.append(((s * eps * e[0], s * eps * e[1]), trans))
    elif (ev.a > 0) != lam_pos:
        along = "forward" if ev.a > 0 else "backward"
        for s in (1, -1):
            out.append(((s * eps * k[0], s * eps * k[1]), along))
            out.append(((s * eps * e[0], s * eps * e[1]), trans))
    return out


def separatrix_seeds(report: PortraitReport, eps: float = 1e-4) -> List[Seed]:
    seeds: List[Seed] = []
    for fp in report.finite:
        x0, y0 = float(fp.point[0]), float(fp.point[1])
        for (dx, dy), d in _local_seeds(fp.classification, eps):
            seeds.append(Seed(project_to_disc(x0 + dx, y0 + dy), d, f"SeparatrixOf({fp.label})"))
    for ip in report.infinite:
        vis = visible_side(ip.chart)
        for (du, dv), d in _local_seeds(ip.classification, eps):
            if dv * vis <= 0:
                continue
            X, Y = chart_to_disc(ip.chart, float(ip.u) + du, dv)
            seeds.append(Seed(DiscPoint(X, Y), d, f"SeparatrixOf({ip.chart.value}:{ip.u})"))
    return seeds


def singular_disc_points(report: PortraitReport) -> List[DiscPoint]:
    pts = [project_to_disc(float(fp.point[0]), float(fp.point[1])) for fp in report.finite]
    for ip in report.infinite:
        pts.append(DiscPoint(*chart_to_disc(ip.chart, float(ip.u), 0.0)))
    return pts


def line_disc_curve(f, samples: int = 400) -> List[DiscPoint]:
    """Disc image of the planar line ``f = 0`` (``f`` of degree one)."""
    a0, a1, a2 = (float(f.coeff(0, 0)), float(f.coeff(1, 0)), float(f.coeff(0, 1)))
    n2 = a1 * a1 + a2 * a2
    base = (-a0 * a1 / n2, -a0 * a2 / n2)
    d = _unit((-a2, a1))
    out = []
    for i in range(samples + 1):
        th = -math.pi / 2 + math.pi * i / samples
        if i == 0 or i == samples:
            s = 1.0 if i == samples else -1.0
            out.append(DiscPoint(s * d[0], s * d[1]))
            continue
        t = math.tan(th)
        out.append(project_to_disc(base[0] + t * d[0], base[1] + t * d[1]))
    return out


def line_projector(f) -> Callable:
    """Disc-coordinate projection onto the image of the planar line ``f = 0``."""
    a0, a1, a2 = (float(f.coeff(0, 0)), float(f.coeff(1, 0)), float(f.coeff(0, 1)))
    n2 = a1 * a1 + a2 * a2

    def project(z):
        X, Y = z
        w2 = 1.0 - X * X - Y * Y
        if w2 <= 1e-24:
            return z
        w = math.sqrt(w2)
        x, y = X / w, Y / w
        r = (a0 + a1 * x + a2 * y) / n2
        return tuple(project_to_disc(x - r * a1, y - r * a2))

    return project


def _on_line(f, z, tol: float = 1e-10) -> bool:
    p = line_projector(f)(z)
    return math.dist(p, z) <= tol


def invariant_line_seeds(report: PortraitReport, ts=(-6.0, -1.5, 1.5, 6.0),
                         clearance: float = 2e-3) -> List[Seed]:
    sing = singular_disc_points(report)
    seeds = []
    for idx, curve in enumerate(report.lines):
        f = curve.f
        a0, a1, a2 = (float(f.coeff(0, 0)), float(f.coeff(1, 0)), float(f.coeff(0, 1)))
        n2 = a1 * a1 + a2 * a2
        base = (-a0 * a1 / n2, -a0 * a2 / n2)
        d = _unit((-a2, a1))
        for t in ts:
            p = project_to_disc(base[0] + t * d[0], base[1] + t * d[1])
            if any(math.dist(p, s) < clearance for s in sing):
                continue
            for direction in ("forward", "backward"):
                seeds.append(Seed(p, direction, f"InvariantLine({idx})"))
    return seeds


def ring_seeds(radius: float = 0.6, count: int = 8) -> List[Seed]:
    seeds = []
    for i in range(count):
        th = 2 * math.pi * (i + 0.5) / count
        p = DiscPoint(radius * math.cos(th), radius * math.sin(th))
        for direction in ("forward", "backward"):
            seeds.append(Seed(p, direction, "GenericSeed"))
    return seeds


def default_seeds(report: PortraitReport, eps: float = 1e-4) -> List[Seed]:
    return separatrix_seeds(report, eps) + invariant_line_seeds(report) + ring_seeds()


def build_orbits(report: PortraitReport, seeds: Optional[Sequence[Seed]] = None,
                 controls: Controls = Controls(), workers: int = 1) -> List[Orbit]:
    """Integrate every seed; the result keeps seed order whatever ``workers`` is."""
    if seeds is None:
        seeds = default_seeds(report)
    dyn = disc_dynamics(make_sis_field(report.params))
    stops = singular_disc_points(report)

    def run(seed: Seed) -> Orbit:
        # seeds on an invariant line are kept on it
        project = None
        for curve in report.lines:
            if curve.f.degree == 1 and _on_line(curve.f, seed.point):
                project = line_projector(curve.f)
                break
        return integrate_orbit(dyn, seed.point, seed.direction, stops, controls, seed.tag,
                               project)

    if workers <= 1:
        return [run(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, seeds))


# rendering ---------------------------------------------------------------------

@dataclass(frozen=True)
class Style:
    size: int = 600
    stroke_width: float = 0.004
    orbit_color: str = "#4a6fa5"
    separatrix_color: str = "#b2182b"
    line_color: str = "#1b7837"
    boundary_color: str = "#000000"
    shade_quadrant: bool = False
    quadrant_color: str = "#fdf2d0"
    marker_radius: float = 0.018
    arrow_size: float = 0.025


def _f(v: float) -> str:
    s = f"{v:.5f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _thin(points, spacing: float = 1e-3):
    kept = [points[0]]
    for p in points[1:-1]:
        if math.dist(p, kept[-1]) >= spacing:
            kept.append(p)
    if len(points) > 1:
        kept.append(points[-1])
    return kept


def _polyline(points, color: str, width: float, extra: str = "") -> str:
    coords = " ".join(f"{_f(p[0])},{_f(-p[1])}" for p in _thin(points))
    return (f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_f(width)}"{extra}/>')


def _arrow_at(points, frac: float, sign: float, size: float, color: str) -> Optional[str]:
    segs = [math.dist(a, b) for a, b in zip(points, points[1:])]
    total = sum(segs)
    if total < 4 * size:
        return None
    target = frac * total
    acc = 0.0
    for (a, b), L in zip(zip(points, points[1:]), segs):
        if acc + L >= target and L > 0:
            t = (target - acc) / L
            px, py = a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])
            dx, dy = sign * (b[0] - a[0]) / L, sign * (b[1] - a[1]) / L
            break
        acc += L
    else:
        return None
    # triangle in SVG coordinates (y flipped)
    tip = (px + dx * size, -(py + dy * size))
    nx, ny = -dy, dx
    left = (px + nx * size * 0.5, -(py + ny * size * 0.5))
    right = (px - nx * size * 0.5, -(py - ny * size * 0.5))
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (tip, left, right))
    return f'<polygon points="{pts}" fill="{color}"/>'


def _marker(X: float, Y: float, kind: Kind, r: float) -> str:
    cx, cy = _f(X), _f(-Y)
    stable = kind in (Kind.NODE_STABLE, Kind.FOCUS_STABLE)
    if kind is Kind.SADDLE_NODE:
        return (f'<g><circle cx="{cx}" cy="{cy}" r="{_f(r)}" fill="#ffffff" stroke="#000000" '
                f'stroke-width="{_f(r / 4)}"/><path d="M {_f(X)} {_f(-Y - r)} '
                f'A {_f(r)} {_f(r)} 0 0 0 {_f(X)} {_f(-Y + r)} Z" fill="#000000"/></g>')
    fill = "#000000" if stable else "#ffffff"
    return (f'<circle cx="{cx}" cy="{cy}" r="{_f(r)}" fill="{fill}" stroke="#000000" '
            f'stroke-width="{_f(r / 4)}"/>')


def render_svg(report: PortraitReport, orbits: Sequence[Orbit], style: Style = Style()) -> str:
    """Deterministic SVG 1.1 document of the portrait on the Poincare disc."""
    sw = style.stroke_width
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style.size}" '
        f'height="{style.size}" viewBox="-1.05 -1.05 2.1 2.1">',
        f'<title>SIS portrait b={report.params.b} c={report.params.c} '
        f'k={report.params.k} m={report.params.m} class {report.portrait_class.value}</title>',
        '<rect x="-1.05" y="-1.05" width="2.1" height="2.1" fill="#ffffff"/>',
    ]
    if style.shade_quadrant:
        out.append(f'<path d="M 0 0 L 1 0 A 1 1 0 0 0 0 -1 Z" fill="{style.quadrant_color}"/>')
    out.append(f'<circle cx="0" cy="0" r="1" fill="none" stroke="{style.boundary_color}" '
               f'stroke-width="{_f(1.5 * sw)}"/>')
    out.append('<g id="invariant-lines">')
    for curve in report.lines:
        out.append(_polyline(line_disc_curve(curve.f), style.line_color, 2 * sw))
    out.append('</g>')
    out.append('<g id="orbits">')
    for orb in orbits:
        if len(orb.points) < 2:
            continue
        color = style.separatrix_color if orb.origin_tag.startswith("Separatrix") else (
            style.line_color if orb.origin_tag.startswith("InvariantLine") else style.orbit_color)
        out.append(_polyline(orb.points, color, sw))
        sign = 1.0 if orb.direction == "forward" else -1.0
        for frac in (1 / 3, 2 / 3):
            arrow = _arrow_at(orb.points, frac, sign, style.arrow_size, color)
            if arrow:
                out.append(arrow)
    out.append('</g>')
    out.append('<g id="singular-points">')
    for fp in report.finite:
        X, Y = project_to_disc(float(fp.point[0]), float(fp.point[1]))
        out.append(_marker(X, Y, fp.classification.kind, style.marker_radius))
    for ip in report.infinite:
        X, Y = chart_to_disc(ip.chart, float(ip.u), 0.0)
        out.append(_marker(X, Y, ip.classification.kind, 0.7 * style.marker_radius))
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
