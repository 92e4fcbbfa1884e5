"""``sisport`` command line: analyze, portrait, sweep, verify."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

from .classify import Kind, classify_point
from .compactify import Chart, SNType, classify_infinite_point, infinite_singular_points
from .exactpoly import Poly2, Y, as_rational, format_rational, line
from .field import SisParams, make_sis_field
from .invariants import find_invariant_lines, verify_invariant_line
from .portrait import Controls, Style, build_orbits, default_seeds, render_svg
from .sis_analysis import (
    ConsistencyError,
    PortraitClass,
    expected_kinds,
    full_report,
    kind_group,
    portrait_class,
    regime,
    steady_states,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_DIAGNOSTIC = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SISPORT_THREADS", "1")))
    except ValueError:
        return 1


def _params(ns) -> SisParams:
    try:
        return SisParams.parse(ns.b, ns.c, ns.k, ns.m)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc)) from exc


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# analyze ---------------------------------------------------------------------

def report_json(params: SisParams) -> str:
    return json.dumps(full_report(params).to_dict(), indent=2, sort_keys=False) + "\n"


def cmd_analyze(ns) -> int:
    params = _params(ns)
    _write(report_json(params), ns.json)
    return EXIT_OK


# portrait --------------------------------------------------------------------

def cmd_portrait(ns) -> int:
    params = _params(ns)
    report = full_report(params)
    controls = Controls(eps_sing=ns.eps_sing, eps_eq=ns.eps_eq, max_arc=ns.max_arc)
    orbits = build_orbits(report, default_seeds(report, ns.offset), controls, workers=_threads())
    style = Style(size=ns.size, stroke_width=ns.stroke_width, orbit_color=ns.orbit_color,
                  separatrix_color=ns.separatrix_color, line_color=ns.line_color,
                  shade_quadrant=ns.shade_quadrant)
    _write(render_svg(report, orbits, style), ns.svg)
    bad = [o for o in orbits if o.diagnostic]
    for o in bad:
        print(f"warning: {o.origin_tag} {o.direction}: {o.diagnostic}", file=sys.stderr)
    return EXIT_DIAGNOSTIC if bad else EXIT_OK


# sweep -----------------------------------------------------------------------

def parse_values(text: str) -> List[Fraction]:
    """``"1,2,5/2"`` or ``"lo:hi:n"`` (n evenly spaced exact values)."""
    text = text.strip()
    if ":" in text:
        lo, hi, n = text.split(":")
        lo, hi, n = as_rational(lo), as_rational(hi), int(n)
        if n < 1:
            raise ValueError("range needs at least one point")
        if n == 1:
            return [lo]
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    return [as_rational(v) for v in text.split(",") if v.strip()]


SWEEP_COLUMNS = ["b", "c", "k", "m", "case", "class", "delta_p", "tau_p", "delta_q", "tau_q"]


def sweep_row(params: SisParams) -> List[str]:
    b, c, k, m = params.astuple()
    gap = b * k - c - m
    return [format_rational(v) for v in (b, c, k, m)] + [
        regime(params).case.value,
        portrait_class(params).value,
        format_rational(gap * m),
        format_rational(c - b * k),
        format_rational(-gap * m),
        format_rational(b * k - c - 2 * m),
    ]


def run_sweep(grid: Sequence[Sequence[Fraction]], workers: int = 1):
    """Rows in grid order, skipped-cell count and the set of classes seen."""
    cells = []
    skipped = 0
    for b, c, k, m in itertools.product(*grid):
        if b == 0 or m == 0:
            skipped += 1
            continue
        cells.append(SisParams(b, c, k, m))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_row, cells))
    else:
        rows = [sweep_row(p) for p in cells]
    classes = sorted({r[5] for r in rows})
    return rows, skipped, classes


def cmd_sweep(ns) -> int:
    try:
        grid = [parse_values(v) for v in (ns.b, ns.c, ns.k, ns.m)]
    except (ValueError, TypeError) as exc:
        raise CliError(f"bad grid: {exc}") from exc
    rows, skipped, classes = run_sweep(grid, _threads())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(rows)
    _write(buf.getvalue(), ns.csv)
    if skipped:
        print(f"warning: skipped {skipped} cell(s) with b = 0 or m = 0", file=sys.stderr)
    summary = sys.stderr if ns.csv in (None, "-") else sys.stdout
    print(f"distinct classes: {len(classes)} ({', '.join(classes)})", file=summary)
    return EXIT_OK


# verify ----------------------------------------------------------------------

def random_params(rng: random.Random) -> SisParams:
    def draw(nonzero: bool) -> Fraction:
        while True:
            v = Fraction(rng.randint(-20, 20), rng.randint(1, 10))
            if v or not nonzero:
                return v

    b = draw(True)
    c = draw(False)
    k = draw(False)
    m = draw(True)
    return SisParams(b, c, k, m)


def check_steady_states(params: SisParams) -> Optional[str]:
    f = make_sis_field(params)
    st = steady_states(params)
    want = expected_kinds(regime(params).case)
    for label, pt in (("p", st.p), ("q", st.q)):
        got = kind_group(classify_point(f, pt).kind)
        if got != want[label]:
            return f"steady states: {label} expected {want[label]}, got {got}"
    return None


def check_infinity(params: SisParams) -> Optional[str]:
    f = make_sis_field(params)
    pts = {(p.chart, p.u): p for p in infinite_singular_points(f)}
    for chart in (Chart.U1, Chart.V1, Chart.U2, Chart.V2):
        p = pts.get((chart, Fraction(0)))
        if p is None or p.classification.kind is not Kind.SADDLE_NODE or p.sn_type is not SNType.SN1:
            return f"infinity: origin of {chart.value} is not an SN1 saddle-node"
    for chart in (Chart.U1, Chart.V1):
        p = pts.get((chart, Fraction(-1)))
        if p is None or not p.classification.kind.is_node:
            return f"infinity: (-1, 0) of {chart.value} is not a node"
    if len(pts) != 6:
        return f"infinity: expected 6 equator points, found {len(pts)}"
    other = classify_infinite_point(f, Chart.U2, -1)
    if other.classification.kind is not pts[(Chart.V1, Fraction(-1))].classification.kind:
        return "infinity: U2 (-1, 0) disagrees with V1 (-1, 0)"
    return None


def sis_lines(params: SisParams):
    """The lines ``y``, ``k - x - y`` (and ``k - x`` when ``c = bk``) with cofactors."""
    b, c, k, m = params.astuple()
    out = [
        (Y, line(-m - c, b, 0)),
        (line(k, -1, -1), Poly2.const(-m)),
    ]
    if c == b * k:
        out.append((line(k, -1, 0), line(-m, 0, -b)))
    return out


def check_invariant_lines(params: SisParams) -> Optional[str]:
    f = make_sis_field(params)
    expected = sis_lines(params)
    for L, K in expected:
        if not verify_invariant_line(f, L, K):
            return f"invariant lines: cofactor {K} fails for {L}"
    found = find_invariant_lines(f)
    want = {_normal_line(L) for L, _ in expected}
    got = {c.f for c in found}
    if not want <= got:
        return f"invariant lines: search missed {sorted(map(str, want - got))}"
    return None


def _normal_line(L: Poly2) -> Poly2:
    lead = L.coeff(1, 0) or L.coeff(0, 1)
    return L * (1 / lead)


def check_portrait_class(params: SisParams) -> Optional[str]:
    st = steady_states(params)
    cls = portrait_class(params)
    if (cls is PortraitClass.B) != st.coincident:
        return "portrait class: class B must coincide with p = q"
    try:
        r = full_report(params)
    except ConsistencyError as exc:
        return f"portrait class: {exc}"
    if r.portrait_class is not cls:
        return "portrait class: report class disagrees with portrait_class"
    return None


CHECKS = (
    ("steady states", check_steady_states),
    ("infinity", check_infinity),
    ("invariant lines", check_invariant_lines),
    ("portrait class", check_portrait_class),
)


def run_verify(samples: int, seed: int, checks=CHECKS, workers: int = 1,
               out=None) -> int:
    out = sys.stdout if out is None else out
    rng = random.Random(seed)
    tuples = [random_params(rng) for _ in range(samples)]
    # the first 5% of tuples are repeated on the boundary m = bk - c
    boundary = []
    for p in tuples[: max(1, samples // 20)]:
        m = p.b * p.k - p.c
        if m != 0:
            boundary.append(SisParams(p.b, p.c, p.k, m))
    cases = tuples + boundary

    def run_one(p: SisParams):
        return [(name, fn(p)) for name, fn in checks]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, cases))
    else:
        results = [run_one(p) for p in cases]
    tallies = {name: 0 for name, _ in checks}
    for p, res in zip(cases, results):
        for name, err in res:
            if err is not None:
                print(f"FAIL {name} at (b, c, k, m) = ({', '.join(format_rational(v) for v in p.astuple())}): {err}",
                      file=out)
                return EXIT_FAIL
            tallies[name] += 1
    for name, n in tallies.items():
        print(f"{name}: {n}/{len(cases)} passed", file=out)
    print(f"all checks passed on {len(cases)} tuples ({len(boundary)} on m = bk - c)", file=out)
    return EXIT_OK


def cmd_verify(ns) -> int:
    if ns.samples < 1:
        raise CliError("--samples must be at least 1")
    return run_verify(ns.samples, ns.seed, workers=_threads())


# entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sisport",
        description="Exact singular-point analysis and Poincare-disc portraits of the SIS field.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_params(p):
        for name in "bckm":
            p.add_argument(name, help=f"exact rational value of {name} (e.g. 3, 1/2, 0.3)")

    a = sub.add_parser("analyze", help="classify all singular points, print the JSON report")
    add_params(a)
    a.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("portrait", help="render the phase portrait on the Poincare disc")
    add_params(p)
    p.add_argument("--svg", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--size", type=int, default=600)
    p.add_argument("--stroke-width", type=float, default=0.004)
    p.add_argument("--orbit-color", default="#4a6fa5")
    p.add_argument("--separatrix-color", default="#b2182b")
    p.add_argument("--line-color", default="#1b7837")
    p.add_argument("--shade-quadrant", action="store_true", help="shade the region x >= 0, y >= 0")
    p.add_argument("--offset", type=float, default=1e-4, help="separatrix seed offset")
    p.add_argument("--eps-sing", type=float, default=1e-3)
    p.add_argument("--eps-eq", type=float, default=1e-4)
    p.add_argument("--max-arc", type=float, default=10.0)
    p.set_defaults(func=cmd_portrait)

    s = sub.add_parser("sweep", help="regime and class over a parameter grid, as CSV")
    for name in "bckm":
        s.add_argument(f"--{name}", required=True, help="comma list or lo:hi:n")
    s.add_argument("--csv", metavar="PATH", help="output file (default stdout)")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="check the SIS structure results on random rational tuples")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=7)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except CliError as exc:
        print(f"sisport: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
