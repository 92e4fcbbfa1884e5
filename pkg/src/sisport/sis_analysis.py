"""Steady states, regimes and portrait classes of the SIS field."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Tuple

from . import __version__
from .classify import Classification, Eigen, Kind, SemiHyperbolicEvidence, classify_point
from .compactify import Chart, InfinitePoint, SNType, infinite_singular_points
from .exactpoly import as_rational, format_rational, parse_poly, to_string
from .field import Matrix2, SisParams, make_sis_field
from .invariants import InvariantCurve, find_invariant_lines

SCHEMA_VERSION = 1

Point = Tuple[Fraction, Fraction]


class Case(str, Enum):
    CASE1 = "Case1"  # p saddle, q node
    CASE2 = "Case2"  # p node, q saddle
    CASE3 = "Case3"  # p = q saddle-node


class PortraitClass(str, Enum):
    A = "A"
    B = "B"


class ConsistencyError(RuntimeError):
    """The regime shortcut and the general classifier disagree."""


@dataclass(frozen=True)
class SteadyStates:
    p: Point
    q: Point
    coincident: bool


@dataclass(frozen=True)
class Regime:
    case: Case
    sign_m: int
    sign_gap: int  # sign of b*k - c - m


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def steady_states(params: SisParams) -> SteadyStates:
    b, c, k, m = params.astuple()
    p = ((c + m) / b, (b * k - c - m) / b)
    q = (k, Fraction(0))
    return SteadyStates(p, q, m == b * k - c)


def regime(params: SisParams) -> Regime:
    b, c, k, m = params.astuple()
    gap = b * k - c - m
    s = _sign(gap * m)
    case = Case.CASE3 if s == 0 else (Case.CASE1 if s < 0 else Case.CASE2)
    return Regime(case, _sign(m), _sign(gap))


def portrait_class(params: SisParams) -> PortraitClass:
    return PortraitClass.B if regime(params).case is Case.CASE3 else PortraitClass.A


def expected_kinds(case: Case) -> dict:
    """Kind groups the regime predicts at p and q ('node' covers both stabilities)."""
    if case is Case.CASE1:
        return {"p": "saddle", "q": "node"}
    if case is Case.CASE2:
        return {"p": "node", "q": "saddle"}
    return {"p": "saddle-node", "q": "saddle-node"}


def kind_group(kind: Kind) -> str:
    if kind is Kind.SADDLE:
        return "saddle"
    if kind.is_node:
        return "node"
    if kind is Kind.SADDLE_NODE:
        return "saddle-node"
    return kind.value


@dataclass(frozen=True)
class FinitePoint:
    label: str  # "p", "q" or "p=q"
    point: Point
    classification: Classification


@dataclass(frozen=True)
class PortraitReport:
    params: SisParams
    states: SteadyStates
    regime: Regime
    finite: Tuple[FinitePoint, ...]
    infinite: Tuple[InfinitePoint, ...]
    lines: Tuple[InvariantCurve, ...]
    portrait_class: PortraitClass

    def to_dict(self) -> dict:
        return report_to_dict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PortraitReport":
        return report_from_dict(data)


def full_report(params: SisParams) -> PortraitReport:
    field = make_sis_field(params)
    states = steady_states(params)
    reg = regime(params)
    if states.coincident:
        finite = (FinitePoint("p=q", states.q, classify_point(field, states.q)),)
    else:
        finite = (
            FinitePoint("p", states.p, classify_point(field, states.p)),
            FinitePoint("q", states.q, classify_point(field, states.q)),
        )
    want = expected_kinds(reg.case)
    for fp in finite:
        label = "p" if fp.label.startswith("p") else "q"
        got = kind_group(fp.classification.kind)
        if got != want[label]:
            raise ConsistencyError(
                f"{params}: regime {reg.case.value} predicts {want[label]} at {fp.label}, "
                f"classifier returned {fp.classification.kind.value}")
    infinite = tuple(infinite_singular_points(field))
    lines = tuple(find_invariant_lines(field))
    return PortraitReport(params, states, reg, finite, infinite, lines, portrait_class(params))


# JSON form -------------------------------------------------------------------

def _q(v: Fraction) -> str:
    return format_rational(v)


def _pt(p) -> List[str]:
    return [_q(p[0]), _q(p[1])]


def _unpt(p) -> Point:
    return (as_rational(p[0]), as_rational(p[1]))


def _matrix(M: Matrix2) -> List[List[str]]:
    return [[_q(M.a11), _q(M.a12)], [_q(M.a21), _q(M.a22)]]


def _unmatrix(rows) -> Matrix2:
    (a, b), (c, d) = rows
    return Matrix2(*(as_rational(v) for v in (a, b, c, d)))


def classification_to_dict(c: Classification) -> dict:
    out = {"kind": c.kind.value, "delta": _q(c.delta), "tau": _q(c.tau)}
    if c.evidence is not None:
        ev = c.evidence
        out["evidence"] = {
            "lambda": _q(ev.lam),
            "alpha": ev.alpha,
            "a": None if ev.a is None else _q(ev.a),
            "change": _matrix(ev.change),
            "order": ev.order,
        }
    if c.eigen is not None:
        out["eigen"] = {
            "values": [list(v) for v in c.eigen.values],
            "vectors": None if c.eigen.vectors is None else [list(v) for v in c.eigen.vectors],
        }
    if c.note is not None:
        out["note"] = c.note
    return out


def classification_from_dict(d: dict) -> Classification:
    ev = None
    if "evidence" in d:
        e = d["evidence"]
        ev = SemiHyperbolicEvidence(
            as_rational(e["lambda"]),
            e["alpha"],
            None if e["a"] is None else as_rational(e["a"]),
            _unmatrix(e["change"]),
            e["order"],
        )
    eig = None
    if "eigen" in d:
        g = d["eigen"]
        vecs = None if g["vectors"] is None else tuple(tuple(v) for v in g["vectors"])
        eig = Eigen(tuple(tuple(v) for v in g["values"]), vecs)
    return Classification(Kind(d["kind"]), as_rational(d["delta"]), as_rational(d["tau"]),
                          ev, eig, d.get("note"))


def report_to_dict(r: PortraitReport) -> dict:
    return {
        "params": {k: _q(v) for k, v in zip("bckm", r.params.astuple())},
        "steady_states": {
            "p": _pt(r.states.p),
            "q": _pt(r.states.q),
            "coincident": r.states.coincident,
            "regime": r.regime.case.value,
            "sign_m": r.regime.sign_m,
            "sign_bk_minus_c_minus_m": r.regime.sign_gap,
        },
        "finite": [
            {"label": fp.label, "point": _pt(fp.point),
             "classification": classification_to_dict(fp.classification)}
            for fp in r.finite
        ],
        "infinite": [
            {"chart": ip.chart.value, "u": _q(ip.u),
             "classification": classification_to_dict(ip.classification),
             "sn_type": None if ip.sn_type is None else ip.sn_type.value}
            for ip in r.infinite
        ],
        "invariant_lines": [
            {"f": to_string(c.f), "cofactor": to_string(c.cofactor)} for c in r.lines
        ],
        "class": r.portrait_class.value,
        "versions": {"sisport": __version__, "schema": SCHEMA_VERSION},
    }


def report_from_dict(d: dict) -> PortraitReport:
    params = SisParams.parse(*(d["params"][k] for k in "bckm"))
    ss = d["steady_states"]
    states = SteadyStates(_unpt(ss["p"]), _unpt(ss["q"]), ss["coincident"])
    reg = Regime(Case(ss["regime"]), ss["sign_m"], ss["sign_bk_minus_c_minus_m"])
    finite = tuple(
        FinitePoint(e["label"], _unpt(e["point"]), classification_from_dict(e["classification"]))
        for e in d["finite"]
    )
    infinite = tuple(
        InfinitePoint(Chart(e["chart"]), as_rational(e["u"]),
                      classification_from_dict(e["classification"]),
                      None if e["sn_type"] is None else SNType(e["sn_type"]))
        for e in d["infinite"]
    )
    lines = tuple(
        InvariantCurve(parse_poly(e["f"]), parse_poly(e["cofactor"])) for e in d["invariant_lines"]
    )
    return PortraitReport(params, states, reg, finite, infinite, lines, PortraitClass(d["class"]))
