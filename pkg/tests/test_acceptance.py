"""Acceptance suite: ten end-to-end criteria at their stated tolerances and time budgets.

Each test prints one line ``[PASS]``/``[FAIL]`` with the measured quantities,
also when run under pytest's output capture.  Run it alone with

    pytest tests/test_acceptance.py -v

Criterion 1 is expected to fail: one printed Table 1 entry (d_plus(3) = 0.06)
and the small-p margin at p = 0.001 are not reproducible; the underlying
inequality is still certified (see README).
"""
import os
import time
import warnings

import numpy as np
import pytest
from scipy import integrate

from steinhaus.constants import c_p, find_pstar, khinchin_constants
from steinhaus.entropy import renyi_gaussian, verify_renyi_upper
from steinhaus.errors import VarianceWarning
from steinhaus.moments import mc_negative_moment, pair_moment, quad_negative_moment, random_unit_vectors
from steinhaus.verifier import (
    DEFAULT_P_GRID,
    DEFAULT_S_GRID,
    TABLE1,
    Verdict,
    verify_d_logconvex,
    verify_extended_concavity,
    verify_fp3_table,
    verify_main_inequality,
    verify_psi_master,
    verify_up_le_gp,
)

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    """Yield a callable that prints one pass/fail line past the capture."""

    def emit(number, ok, detail, seconds, budget):
        ok = bool(ok) and seconds < budget
        with capsys.disabled():
            print(f"\nCRITERION {number:2d} [{'PASS' if ok else 'FAIL'}] {detail} ({seconds:.1f} s, budget {budget:g} s)")
        return ok

    return emit


def _elapsed(t0):
    return time.perf_counter() - t0


def test_criterion_01_table1(report):
    t0 = time.perf_counter()
    rep, _ = verify_fp3_table(small_p_grid=np.round(np.arange(1, 21) * 0.001, 3))
    secs = _elapsed(t0)
    dm, dp = rep.extra["d_minus"], rep.extra["d_plus"]
    table_fail = [f"d_minus({j})" for j, (d, ref) in enumerate(zip(dm, TABLE1["d_minus"]), 1) if not d.lo >= ref]
    table_fail += [f"d_plus({j})" for j, (d, ref) in enumerate(zip(dp, TABLE1["d_plus"]), 1) if not d.lo >= ref]
    small = [m for m in rep.margins if m.label == "l0(p) - L(p)"]
    small_fail = [m.params["p"] for m in small if not m.lo > 1e-5]
    detail = (
        f"Table 1 entries not reproduced: {table_fail or 'none'}; "
        f"small-p margin <= 1e-5 at p = {small_fail or 'none'}; verdict of the inequality: {rep.verdict.value}"
    )
    ok = report(1, not table_fail and not small_fail, detail, secs, 60)
    assert ok, detail


def test_criterion_02_equality_case(report):
    t0 = time.perf_counter()
    errs = {p: abs(quad_negative_moment([2**-0.5, 2**-0.5], p, tol=1e-8).value - c_p(p)) for p in (0.1, 0.3, 0.5, 0.7, 0.9)}
    secs = _elapsed(t0)
    worst = max(errs.values())
    ok = report(2, worst <= 1e-8, f"max |quad - C_p| = {worst:.2e}", secs, 5)
    assert ok


def test_criterion_03_master_sweep(report, monkeypatch):
    if "STEINHAUS_THREADS" not in os.environ:
        monkeypatch.setenv("STEINHAUS_THREADS", str(os.cpu_count() or 1))
    t0 = time.perf_counter()
    rep = verify_psi_master(DEFAULT_P_GRID, DEFAULT_S_GRID)
    secs = _elapsed(t0)
    eq = [m for m in rep.margins if m.params["s"] == 2.0]
    eq_ok = len(eq) == DEFAULT_P_GRID.size and all(m.kind == "equality" and m.status == "pass" for m in eq)
    worst = rep.worst()
    detail = f"{len(rep.margins)} margins, verdict {rep.verdict.value}, equality at s=2: {eq_ok}, worst lower end {worst.lo:.3e} at {worst.params}"
    ok = report(3, rep.verdict is Verdict.VERIFIED and eq_ok, detail, secs, 600)
    assert ok


def test_criterion_04_main_theorem_properties(report):
    t0 = time.perf_counter()
    vecs = random_unit_vectors(50, 6, seed=20240601)
    reps = {p: verify_main_inequality(p, vecs) for p in (0.1, 0.5, 0.9)}
    secs = _elapsed(t0)
    plain = min(m.lo for r in reps.values() for m in r.margins if m.label == "C_p - E|S|^-p")
    strong = min(m.lo for r in reps.values() for m in r.margins if m.label.startswith("C_p Phi_p(x)"))
    ok_all = all(r.verdict is Verdict.VERIFIED for r in reps.values()) and plain >= -1e-7 and strong >= -1e-7
    detail = f"150 checks; min (C_p - moment) = {plain:.3e}, min Phi_p-form margin = {strong:.3e}"
    ok = report(4, ok_all, detail, secs, 120)
    assert ok


def test_criterion_05_oracle_triangle(report):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    failures = []
    for i in range(20):
        p = float(rng.uniform(0.05, 0.45))
        x = float(rng.uniform(0.05, 1.0))
        a = np.array([1.0, np.sqrt(x)])
        quad = quad_negative_moment(a, p, normalize=False)
        series = pair_moment(a, p)
        with warnings.catch_warnings():
            # for n = 2 and p > 1/4 the fourth moment of |S|^-p is infinite
            warnings.simplefilter("ignore", VarianceWarning)
            mc = mc_negative_moment(a, p, samples=1_000_000, seed=int(rng.integers(1 << 30)))
        if not (quad.agrees_with(series) and mc.agrees_with(quad) and mc.agrees_with(series)):
            failures.append((i, p, x))
    secs = _elapsed(t0)
    ok = report(5, not failures, f"20 instances, disagreements: {failures or 'none'}", secs, 120)
    assert ok


def test_criterion_06_up_le_gp(report):
    t0 = time.perf_counter()
    rep = verify_up_le_gp(DEFAULT_P_GRID, spot_s=(3.0, 5.0, 10.0))
    secs = _elapsed(t0)
    ends = {m.params["p"]: m for m in rep.margins if m.label == "l0(p) - L(p)"}
    spots = [m for m in rep.margins if m.label == "G_p(s) - U_p(s)"]
    ok_all = ends[0.0].lo >= 0.4 and ends[1.0].lo >= 0.3 and all(m.status == "pass" for m in spots) and len(spots) == 3 * DEFAULT_P_GRID.size
    detail = f"tangent margins {ends[0.0].lo:.5f} (p=0), {ends[1.0].lo:.5f} (p=1); spot checks {len(spots)} certified; verdict {rep.verdict.value}"
    ok = report(6, ok_all, detail, secs, 10)
    assert ok


def test_criterion_07_d_suite(report):
    t0 = time.perf_counter()
    rep = verify_d_logconvex()
    secs = _elapsed(t0)
    dd = [m for m in rep.margins if m.label == "second divided difference of log D"]
    path = [m for m in rep.margins if m.label == "lower bound b(x) for f''(x)"]
    end = rep.extra["endpoint_6_minus_pi2_over_2"]
    exact = 6.0 - np.pi**2 / 2
    ok_all = (
        all(m.lo >= 0 for m in dd)
        and all(m.lo > 0 for m in path)
        and end.lo <= exact <= end.hi
        and end.lo > 0
        and rep.verdict is Verdict.VERIFIED
    )
    detail = f"{len(dd)} second differences (min {min(m.lo for m in dd):.3e}), proof-path min {min(m.lo for m in path):.4f}, 6 - pi^2/2 in [{end.lo:.15f}, {end.hi:.15f}]"
    ok = report(7, ok_all, detail, secs, 10)
    assert ok


def test_criterion_08_extended_concavity(report):
    t0 = time.perf_counter()
    reps = {p: verify_extended_concavity(p, trials=10_000) for p in (0.1, 0.5, 0.9)}
    secs = _elapsed(t0)
    worst = min(m.lo for r in reps.values() for m in r.margins if m.kind == "positive")
    eq_ok = all(r.extra["equal_pair_float_margins_all_zero"] for r in reps.values())
    eq_ok &= all(m.status == "pass" for r in reps.values() for m in r.margins if m.label == "equal pair")
    ok_all = worst >= -1e-12 and eq_ok and all(r.verdict is Verdict.VERIFIED for r in reps.values())
    ok = report(8, ok_all, f"3 x 10^4 pairs, min margin {worst:.3e}, equal pairs exact: {eq_ok}", secs, 5)
    assert ok


def test_criterion_09_renyi(report):
    t0 = time.perf_counter()
    ns, ps = (2, 4, 8, 16), (0.25, 0.5, 0.75, 1.0)
    rep = verify_renyi_upper([np.full(n, n**-0.5) for n in ns], ps)
    gaps = {p: [renyi_gaussian(p) - row[p] for row in rep.extra["entropies"]] for p in ps}
    decreasing = all(np.all(np.diff(g) < 0) for g in gaps.values())
    f = lambda y, x: np.sqrt(np.exp(-(x * x + y * y)) / np.pi)  # noqa: E731
    val, _ = integrate.dblquad(f, -14.0, 14.0, -14.0, 14.0, epsabs=1e-13, epsrel=1e-13)
    plane_err = abs(2.0 * np.log(val) - renyi_gaussian(0.5))
    secs = _elapsed(t0)
    ok_all = rep.verdict is Verdict.VERIFIED and decreasing and plane_err <= 1e-6
    detail = f"dominance {rep.verdict.value}, gaps decreasing in n: {decreasing}, min gap {min(min(g) for g in gaps.values()):.2e}, Gaussian h_1/2 plane error {plane_err:.1e}"
    ok = report(9, ok_all, detail, secs, 300)
    assert ok


def test_criterion_10_constants_continuity(report):
    t0 = time.perf_counter()
    pstar = find_pstar(1e-13)
    jumps = []
    for x in (pstar, 2.0):
        for eps in (1e-9, 1e-10):
            lo, hi = khinchin_constants(x - eps), khinchin_constants(x + eps)
            jumps += [abs(lo.A_p - hi.A_p), abs(lo.B_p - hi.B_p)]
    secs = _elapsed(t0)
    ok = report(10, max(jumps) <= 1e-8 and 0.47 < pstar < 0.49, f"p* = {pstar:.12f}, max jump {max(jumps):.2e}", secs, 5)
    assert ok
