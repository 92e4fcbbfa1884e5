import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sisport.classify import Kind
from sisport.sis_analysis import (
    Case,
    PortraitClass,
    PortraitReport,
    expected_kinds,
    full_report,
    kind_group,
    portrait_class,
    regime,
    steady_states,
)
from sisport.field import SisParams

nonzero = st.fractions(-20, 20, max_denominator=10).filter(lambda v: v != 0)
anyq = st.fractions(-20, 20, max_denominator=10)
params_st = st.builds(SisParams, nonzero, anyq, anyq, nonzero)


def test_steady_states_examples():
    s = steady_states(SisParams(1, 1, 4, 1))
    assert s.p == (2, 2) and s.q == (4, 0) and not s.coincident
    s = steady_states(SisParams(1, 1, 2, 1))
    assert s.p == s.q == (2, 0) and s.coincident


@pytest.mark.parametrize("params, case, cls", [
    ((1, 1, 4, 1), Case.CASE2, PortraitClass.A),
    ((1, 3, 2, 1), Case.CASE1, PortraitClass.A),
    ((1, 1, 2, 1), Case.CASE3, PortraitClass.B),
    ((1, 1, 4, -1), Case.CASE1, PortraitClass.A),
    ((1, 5, 2, -1), Case.CASE2, PortraitClass.A),
])
def test_regime_examples(params, case, cls):
    p = SisParams(*params)
    assert regime(p).case is case
    assert portrait_class(p) is cls


def test_full_report_case2():
    r = full_report(SisParams(1, 1, 4, 1))
    assert [(fp.label, fp.classification.kind) for fp in r.finite] == [
        ("p", Kind.NODE_STABLE), ("q", Kind.SADDLE)]
    assert len(r.infinite) == 6
    assert len(r.lines) == 2
    assert r.portrait_class is PortraitClass.A


def test_full_report_coincident():
    r = full_report(SisParams(1, 1, 2, 1))
    (fp,) = r.finite
    assert fp.label == "p=q"
    assert fp.classification.kind is Kind.SADDLE_NODE
    assert fp.classification.evidence.alpha % 2 == 0


def test_expected_kinds_and_groups():
    assert expected_kinds(Case.CASE1) == {"p": "saddle", "q": "node"}
    assert kind_group(Kind.NODE_UNSTABLE) == "node"
    assert kind_group(Kind.FOCUS_STABLE) == "FocusStable"


def test_json_round_trip():
    for params in ((1, 1, 4, 1), (1, 1, 2, 1), (Fraction(3, 7), -2, Fraction(1, 3), 5)):
        r = full_report(SisParams(*params))
        d = r.to_dict()
        text = json.dumps(d)
        back = PortraitReport.from_dict(json.loads(text))
        assert back == r
        assert back.to_dict() == d


def test_json_keys():
    d = full_report(SisParams(1, 1, 4, 1)).to_dict()
    assert set(d) == {"params", "steady_states", "finite", "infinite", "invariant_lines",
                      "class", "versions"}
    assert d["params"] == {"b": "1", "c": "1", "k": "4", "m": "1"}
    assert d["steady_states"]["p"] == ["2", "2"]
    assert {"f": "y", "cofactor": "-2 + x"} in d["invariant_lines"]


@settings(max_examples=60, deadline=None)
@given(params_st, st.fractions(1, 10, max_denominator=5).filter(lambda v: v != 0))
def test_time_scaling_keeps_class(params, s):
    # scaling every rate by s > 0 rescales time only
    b, c, k, m = params.astuple()
    scaled = SisParams(s * b, s * c, k, s * m)
    assert regime(scaled).case is regime(params).case
    assert portrait_class(scaled) is portrait_class(params)


@settings(max_examples=80, deadline=None)
@given(params_st)
def test_report_is_consistent(params):
    r = full_report(params)
    want = expected_kinds(r.regime.case)
    for fp in r.finite:
        assert kind_group(fp.classification.kind) == want["p" if fp.label.startswith("p") else "q"]
    assert (r.portrait_class is PortraitClass.B) == r.states.coincident


def test_coincident_is_even_saddle_node():
    rng = random.Random(21)
    for _ in range(100):
        b, c, k = (Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(3))
        m = b * k - c
        if b == 0 or m == 0:
            continue
        r = full_report(SisParams(b, c, k, m))
        (fp,) = r.finite
        ev = fp.classification.evidence
        assert fp.classification.kind is Kind.SADDLE_NODE and ev.alpha == 2
