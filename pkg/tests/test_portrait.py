import math

import pytest

from sisport.compactify import disc_dynamics
from sisport.field import SisParams, VectorField, make_sis_field
from sisport.exactpoly import X, Y
from sisport.portrait import (
    Controls,
    DiscPoint,
    Seed,
    Style,
    _local_seeds,
    build_orbits,
    default_seeds,
    disc_to_plane,
    integrate_orbit,
    line_disc_curve,
    project_to_disc,
    render_svg,
    ring_seeds,
    separatrix_seeds,
    singular_disc_points,
)
from sisport.sis_analysis import full_report


def test_project_to_disc():
    assert project_to_disc(0, 0) == (0.0, 0.0)
    assert project_to_disc(1, 0) == pytest.approx((1 / math.sqrt(2), 0.0))
    X_, Y_ = project_to_disc(2, 2)
    assert (X_, Y_) == pytest.approx((2 / 3, 2 / 3))
    assert disc_to_plane((2 / 3, 2 / 3)) == pytest.approx((2.0, 2.0))
    assert math.hypot(*project_to_disc(1e3, -3e3)) < 1.0


def test_separatrix_seed_counts():
    sn = full_report(SisParams(1, 1, 2, 1))
    assert len(_local_seeds(sn.finite[0].classification, 1e-4)) == 3
    c2 = full_report(SisParams(1, 1, 4, 1))
    p, q = c2.finite
    assert _local_seeds(p.classification, 1e-4) == []
    assert len(_local_seeds(q.classification, 1e-4)) == 4


def test_saddle_seed_directions():
    q = full_report(SisParams(1, 1, 4, 1)).finite[1].classification
    # q = (4, 0) has eigenvalues 2 (unstable) and -1 (stable)
    dirs = sorted(d for _, d in _local_seeds(q, 1e-4))
    assert dirs == ["backward", "backward", "forward", "forward"]


def test_infinite_seeds_are_in_the_disc():
    r = full_report(SisParams(1, 1, 4, 1))
    for s in separatrix_seeds(r):
        assert math.hypot(*s.point) < 1.0


def test_ring_seeds():
    seeds = ring_seeds(0.5, 4)
    assert len(seeds) == 8
    assert all(math.hypot(*s.point) == pytest.approx(0.5) for s in seeds)


def test_line_disc_curve_on_line():
    r = full_report(SisParams(1, 1, 4, 1))
    for c in r.lines:
        pts = line_disc_curve(c.f, 50)
        for P in pts[1:-1]:
            x, y = disc_to_plane(P)
            val = sum(float(v) * x**i * y**j for (i, j), v in c.f.terms.items())
            assert val == pytest.approx(0.0, abs=1e-9 * (1 + abs(x) + abs(y)))
        assert math.hypot(*pts[0]) == pytest.approx(1.0)


def test_orbit_reaches_stable_node():
    r = full_report(SisParams(1, 1, 4, 1))
    stops = singular_disc_points(r)
    dyn = disc_dynamics(make_sis_field(r.params))
    orb = integrate_orbit(dyn, project_to_disc(3.0, 1.0), "forward", stops)
    assert orb.reason == "singular" and orb.stop_index == 0
    assert math.dist(orb.end, stops[0]) <= 1e-3


def test_orbit_of_linear_field_reaches_equator():
    dyn = disc_dynamics(VectorField(X, Y))
    orb = integrate_orbit(dyn, (0.1, 0.2), "forward")
    assert orb.reason == "equator"
    assert 1 - math.hypot(*orb.end) <= 1e-4
    assert orb.diagnostic is None


def test_orbit_budgets():
    # a center: circles forever, so the arc budget ends it
    dyn = disc_dynamics(VectorField(-Y, X))
    orb = integrate_orbit(dyn, (0.5, 0.0), controls=Controls(max_arc=2.0))
    assert orb.reason == "arc_length"
    assert orb.arc_length == pytest.approx(2.0, rel=1e-6)
    assert math.hypot(*orb.end) == pytest.approx(0.5, abs=1e-8)
    orb = integrate_orbit(dyn, (0.5, 0.0), controls=Controls(max_steps=3))
    assert orb.reason == "max_steps" and orb.diagnostic
    with pytest.raises(ValueError):
        integrate_orbit(dyn, (0.5, 0.0), "sideways")


def test_orbit_starting_at_rest():
    dyn = disc_dynamics(VectorField(X, Y))
    assert integrate_orbit(dyn, (0.0, 0.0)).reason == "stalled"


def test_build_orbits_order_independent_of_workers():
    r = full_report(SisParams(1, 1, 2, 1))
    seeds = default_seeds(r)[:10]
    one = build_orbits(r, seeds, workers=1)
    many = build_orbits(r, seeds, workers=4)
    assert [o.points for o in one] == [o.points for o in many]


def test_svg_deterministic_and_well_formed():
    import xml.etree.ElementTree as ET

    r = full_report(SisParams(1, 3, 2, 1))
    seeds = default_seeds(r)
    a = render_svg(r, build_orbits(r, seeds), Style(shade_quadrant=True))
    b = render_svg(r, build_orbits(r, seeds), Style(shade_quadrant=True))
    assert a == b
    root = ET.fromstring(a.encode())
    assert root.get("viewBox") == "-1.05 -1.05 2.1 2.1"
    assert "nan" not in a and "inf" not in a


def test_seed_type():
    s = Seed(DiscPoint(0.1, 0.2), "forward", "GenericSeed")
    assert s.point.X == 0.1


@pytest.mark.parametrize("params, target", [
    ((1, 1, 4, 1), (2.0, 2.0)),   # Case2: p attracts
    ((1, 3, 2, 1), (2.0, 0.0)),   # Case1: q attracts
    ((1, 1, 2, 1), (2.0, 0.0)),   # coalesced saddle-node
])
def test_quadrant_orbits_reach_attractor(params, target):
    import random

    rng = random.Random(17)
    r = full_report(SisParams(*params))
    seeds = [Seed(project_to_disc(rng.uniform(0.05, 8), rng.uniform(0.05, 8)), "forward", "GenericSeed")
             for _ in range(20)]
    goal = project_to_disc(*target)
    for orb in build_orbits(r, seeds, Controls(max_arc=50.0)):
        assert orb.reason == "singular"
        assert math.dist(orb.end, goal) <= 1e-3


def test_spec_style_endpoint_examples():
    r = full_report(SisParams(1, 1, 2, 1))
    dyn = disc_dynamics(make_sis_field(r.params))
    orb = integrate_orbit(dyn, project_to_disc(1.0, 0.5), "forward", singular_disc_points(r))
    assert math.dist(orb.end, project_to_disc(2.0, 0.0)) <= 1e-3
    # a seed on y = 0 stays on the horizontal diameter
    orb = build_orbits(r, [Seed(project_to_disc(-3.0, 0.0), "forward", "GenericSeed")])[0]
    assert all(p.Y == 0.0 for p in orb.points)


def test_empty_orbit_list_renders_disc_and_points():
    r = full_report(SisParams(1, 1, 4, 1))
    svg = render_svg(r, [])
    assert svg.count("<circle") >= 1 + 2 + 6
    assert "<polyline" in svg  # invariant lines only
