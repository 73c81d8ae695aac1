"""Certified verifiers: verdict logic, determinism and each inequality on small grids."""
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from steinhaus.constants import psi_2
from steinhaus.errors import DomainError
from steinhaus.interval import PI
from steinhaus.moments import random_unit_vectors
from steinhaus.verifier import (
    TABLE1,
    LemmaId,
    Margin,
    PaperCheck,
    Verdict,
    VerificationReport,
    gp_enclosure,
    thread_count,
    up_enclosure,
    verify_base_case,
    verify_d_logconvex,
    verify_extended_concavity,
    verify_fp3_table,
    verify_fp_le_up,
    verify_holder_chain,
    verify_L_bound,
    verify_main_inequality,
    verify_psi_master,
    verify_up_le_gp,
)

SMALL_P = np.array([0.1, 0.5, 0.9])


# ---------------------------------------------------------------------------
# margins and verdicts
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "lo, hi, kind, slack, status",
    [
        (0.1, 0.2, "positive", 0.0, "pass"),
        (-0.2, -0.1, "positive", 0.0, "fail"),
        (-0.1, 0.1, "positive", 0.0, "undecided"),
        (-1e-13, 0.0, "positive", 1e-12, "pass"),
        (-1e-9, 1e-9, "equality", 0.0, "pass"),
        (0.1, 0.2, "equality", 0.0, "fail"),
        (0.1, 0.2, "equality", 0.15, "pass"),
    ],
)
def test_margin_status(lo, hi, kind, slack, status):
    assert Margin("m", {}, lo, hi, kind=kind, slack=slack).status == status


def test_margin_invariants():
    with pytest.raises(ValueError):
        Margin("m", {}, 1.0, 0.0)
    with pytest.raises(ValueError):
        Margin("m", {}, 0.0, 1.0, kind="strange")


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(0, 1)), min_size=1, max_size=20))
def test_verdict_trichotomy(pairs):
    margins = [Margin("m", {"i": i}, lo, lo + w) for i, (lo, w) in enumerate(pairs)]
    r = VerificationReport(LemmaId.L_BOUND, {}, margins)
    statuses = [m.status for m in margins]
    if "fail" in statuses:
        assert r.verdict is Verdict.VIOLATED
        assert r.counterexample is margins[statuses.index("fail")]
    elif "undecided" in statuses:
        assert r.verdict is Verdict.INCONCLUSIVE and r.counterexample is None
    else:
        assert r.verdict is Verdict.VERIFIED and r.counterexample is None


def test_paper_checks_do_not_change_the_verdict():
    checks = [PaperCheck("printed", 1.0, 0.5, 0.6)]
    r = VerificationReport(LemmaId.L_BOUND, {}, [Margin("m", {}, 0.5, 0.6)], paper_checks=checks)
    assert r.verdict is Verdict.VERIFIED
    assert not r.paper_agreement
    assert PaperCheck("upper", 1.0, 0.5, 0.9, relation="le").holds


def test_report_serializes_infinite_ends():
    r = VerificationReport(LemmaId.L_BOUND, {"x": np.float64(1.5)}, [Margin("m", {}, -np.inf, np.inf)])
    d = json.loads(json.dumps(r.to_dict(), allow_nan=False))
    assert d["margins"][0]["lo"] == "-inf" and d["verdict"] == "inconclusive"


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("STEINHAUS_THREADS", "3")
    assert thread_count() == 3
    for bad in ("0", "x", "-2"):
        monkeypatch.setenv("STEINHAUS_THREADS", bad)
        with pytest.raises(DomainError):
            thread_count()


# ---------------------------------------------------------------------------
# U_p, G_p and the Psi_p sweeps
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p, s", [(0.5, 3.0), (0.01, 3.0), (0.9, 10.0)])
def test_fp_le_up_examples(p, s):
    r = verify_fp_le_up([p], [s])
    assert r.verdict is Verdict.VERIFIED
    ref, _ = oracles.f_p_reference(p, s)
    assert ref < float(up_enclosure(p, s).lo[0])


def test_gp_enclosure_matches_closed_form():
    for s in (3.0, 5.0):
        g = gp_enclosure(SMALL_P, s)
        assert np.all(g.lo <= s ** (-SMALL_P / 2) * psi_2(SMALL_P) + 1e-15)
        assert np.all(s ** (-SMALL_P / 2) * psi_2(SMALL_P) <= g.hi + 1e-15)


@pytest.mark.parametrize(
    "p, s, kind",
    [(0.5, 2.0, "equality"), (0.9, 2.05, "positive"), (0.1, 50.0, "positive"), (0.5, 3.0, "positive")],
)
def test_psi_master_examples(p, s, kind):
    r = verify_psi_master([p], [s])
    (m,) = r.margins
    assert m.kind == kind and m.status == "pass"
    assert r.verdict is Verdict.VERIFIED


def test_psi_master_small_grid_and_determinism(monkeypatch):
    p, s = [0.05, 0.5, 0.95], [2.0, 2.25, 3.0, 7.5, 20.0]
    monkeypatch.setenv("STEINHAUS_THREADS", "1")
    one = verify_psi_master(p, s).to_dict()
    monkeypatch.setenv("STEINHAUS_THREADS", "4")
    four = verify_psi_master(p, s).to_dict()
    assert one["verdict"] == "verified"
    assert json.dumps(one, sort_keys=True) == json.dumps(four, sort_keys=True)


def test_composition_invariant_small_grid():
    # F_p <= U_p <= G_p for s >= 3 and the master margin all certify together.
    p, s = SMALL_P, [3.0, 5.0, 10.0]
    assert verify_fp_le_up(p, s).verdict is Verdict.VERIFIED
    assert verify_up_le_gp(p, spot_s=s).verdict is Verdict.VERIFIED
    assert verify_psi_master(p, s).verdict is Verdict.VERIFIED


def test_grid_validation():
    with pytest.raises(DomainError):
        verify_psi_master([0.5], [0.9])
    with pytest.raises(DomainError):
        verify_psi_master([1.2], [3.0])
    with pytest.raises(DomainError):
        verify_up_le_gp([0.5], spot_s=(2.5,))


# ---------------------------------------------------------------------------
# the proof-path lemmas
# ---------------------------------------------------------------------------


def test_up_le_gp_endpoint_margins():
    r = verify_up_le_gp(SMALL_P)
    assert r.verdict is Verdict.VERIFIED and r.paper_agreement
    ends = {m.params["p"]: m for m in r.margins if m.label == "l0(p) - L(p)"}
    assert ends[0.0].lo >= 0.4 and ends[1.0].lo >= 0.3


def test_l_bound_argmax_inside():
    r = verify_L_bound()
    assert r.verdict is Verdict.VERIFIED
    lo, hi = r.extra["argmax_cell"]
    assert 3.0 < lo < hi < 12.0
    assert float(r.extra["sup"].hi) < 0.1


def test_fp3_table_structure():
    report, breakdowns = verify_fp3_table(SMALL_P)
    assert report.verdict is Verdict.VERIFIED
    assert len(breakdowns) == SMALL_P.size
    assert len(report.extra["d_minus"]) == len(TABLE1["d_minus"]) == 5
    failing = sorted(c.label for c in report.paper_checks if not c.holds)
    # d_+(3) = 0.06 is not reproducible and the small-p bound fails only at p = 0.001
    assert failing == ["d_plus(3)", "l0(p) - L(p) at p=0.001"]


def test_d_logconvex_endpoint():
    r = verify_d_logconvex(np.round(np.arange(1, 100) * 1e-2, 2), np.round(np.arange(1, 51) * 1e-2, 2))
    assert r.verdict is Verdict.VERIFIED
    end = r.extra["endpoint_6_minus_pi2_over_2"]
    assert end.contains(6.0 - np.pi**2 / 2) and float(end.width) < 1e-14
    assert any(m.kind == "equality" and m.status == "pass" for m in r.margins)
    assert float((6.0 - PI.square() * 0.5).lo) > 1.06


@pytest.mark.parametrize("p", SMALL_P)
def test_extended_concavity(p):
    r = verify_extended_concavity(p, trials=2000)
    assert r.verdict is Verdict.VERIFIED
    assert r.extra["equal_pair_float_margins_all_zero"]
    with pytest.raises(DomainError):
        verify_extended_concavity(p, trials=10)


@pytest.mark.parametrize("p", SMALL_P)
def test_base_case(p):
    r = verify_base_case(p, np.round(np.linspace(0, 1, 21), 2))
    assert r.verdict is Verdict.VERIFIED
    top = [m for m in r.margins if m.params.get("x") == 1.0 and m.kind == "equality"]
    assert len(top) == 1 and top[0].status == "pass"


def test_main_inequality_random_and_extremal():
    vecs = random_unit_vectors(6, 5, seed=1) + [np.array([2**-0.5, 2**-0.5])]
    r = verify_main_inequality(0.5, vecs)
    assert r.verdict is Verdict.VERIFIED
    assert sum(m.kind == "equality" for m in r.margins) == 2
    with pytest.raises(DomainError):
        verify_main_inequality(0.5, [[1.0, 1.0]])


@pytest.mark.parametrize("p", [0.2, 0.8])
def test_holder_chain(p):
    r = verify_holder_chain(p, [2.0, 2.5, 3.0])
    assert r.verdict is Verdict.VERIFIED


def test_verification_is_deterministic():
    a = verify_extended_concavity(0.3, trials=1000).to_dict()
    b = verify_extended_concavity(0.3, trials=1000).to_dict()
    assert a == b and a["runtime_ms"] is None
    assert verify_extended_concavity(0.3, trials=1000, timing=True).runtime_ms >= 0
