"""Closed-form constants: C_p, kappa_p, Psi_p(2), D(p), phi/Phi and A_p, B_p."""
import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from steinhaus.constants import (
    PhiPair,
    c_p,
    c_p_enclosure,
    d_func,
    d_func_enclosure,
    find_pstar,
    gaussian_norm,
    kappa_p,
    kappa_p_enclosure,
    khinchin_constants,
    log_d_derivative,
    pair_norm,
    phi_cap,
    phi_small,
    psi_2,
    psi_2_enclosure,
)
from steinhaus.errors import DomainError
from steinhaus.moments import f_p_integral

P_GRID = np.round(np.arange(1, 100) * 0.01, 2)
p_open = st.floats(1e-4, 1 - 1e-4)


@pytest.mark.parametrize(
    "fn, ref",
    [(c_p, oracles.c_p), (kappa_p, oracles.kappa_p), (psi_2, oracles.psi_2), (d_func, oracles.d_func)],
    ids=["C_p", "kappa_p", "Psi_p(2)", "D"],
)
def test_closed_forms_match_mpmath(fn, ref):
    for p in P_GRID:
        assert fn(p) == pytest.approx(ref(p), rel=5e-14)


@pytest.mark.parametrize(
    "enc, ref",
    [
        (c_p_enclosure, oracles.c_p),
        (kappa_p_enclosure, oracles.kappa_p),
        (psi_2_enclosure, oracles.psi_2),
        (d_func_enclosure, oracles.d_func),
    ],
    ids=["C_p", "kappa_p", "Psi_p(2)", "D"],
)
def test_enclosures_contain_high_precision_values(enc, ref):
    e = enc(P_GRID)
    for i, p in enumerate(P_GRID):
        mp.mp.dps = 40
        name = enc.__name__
        p_mp = mp.mpf(float(p))
        exact = {
            "c_p_enclosure": 2 ** (p_mp / 2) * mp.gamma(1 - p_mp) / mp.gamma(1 - p_mp / 2) ** 2,
            "kappa_p_enclosure": 2 ** (1 - p_mp) * mp.gamma(1 - p_mp / 2) / mp.gamma(p_mp / 2),
            "psi_2_enclosure": 2 ** (1.5 * p_mp - 1) * mp.gamma(1 - p_mp) * mp.gamma(p_mp / 2) / mp.gamma(1 - p_mp / 2) ** 3,
            "d_func_enclosure": 2 ** (p_mp / 2) * mp.gamma(1 - p_mp) / mp.gamma(1 - p_mp / 2) ** 3,
        }[name]
        assert mp.mpf(float(e.lo[i])) <= exact <= mp.mpf(float(e.hi[i]))
        assert e.hi[i] - e.lo[i] <= 1e-11 * abs(ref(p))


def test_c_p_examples():
    assert c_p(1e-9) == pytest.approx(1.0, abs=1e-8)
    expected = 2**0.25 * oracles.gamma(0.5) / oracles.gamma(0.75) ** 2
    assert c_p(0.5) == pytest.approx(expected, rel=1e-14)
    # oracle: 2^{p/2} (1/pi) int_0^pi (2 cos(u/2))^{-p} du
    assert c_p(0.3) == pytest.approx(2**0.15 * oracles.pair_moment_angle(0.3), abs=1e-8)


def test_kappa_examples():
    assert kappa_p(1.0) == pytest.approx(1.0, rel=1e-15)
    assert kappa_p(0.5) == pytest.approx(np.sqrt(2) * oracles.gamma(0.75) / oracles.gamma(0.25), rel=1e-14)


def test_psi2_examples():
    assert psi_2(0.5) == pytest.approx(2**-0.25 * oracles.gamma(0.5) * oracles.gamma(0.25) / oracles.gamma(0.75) ** 3, rel=1e-14)
    np.testing.assert_allclose(psi_2(P_GRID), c_p(P_GRID) / kappa_p(P_GRID), rtol=1e-13)


def test_psi2_against_bessel_integral():
    # Psi_p(2) = 2^{p/2} F_p(2) with F_p(2) = int_0^inf J0(t)^2 t^{p-1} dt.
    F = f_p_integral(0.4, 2.0, tol=1e-5)
    assert F.contains(psi_2(0.4) * 2**-0.2)
    assert abs(2**0.2 * float(F.mid) - psi_2(0.4)) <= 1e-6


@pytest.mark.parametrize("p", P_GRID)
def test_c_p_at_least_one_and_factorization(p):
    assert c_p(p) >= 1.0
    assert kappa_p(p) * psi_2(p) == pytest.approx(c_p(p), rel=1e-12)


def test_d_func_examples():
    assert d_func(0.0) == 1.0
    assert log_d_derivative(0.0) == pytest.approx((np.log(2) - np.euler_gamma) / 2, rel=1e-14)
    assert d_func(0.5) > d_func(0.1) > 1.0
    h = 1e-5
    central = (np.log(d_func(0.3 + h)) - np.log(d_func(0.3 - h))) / (2 * h)
    assert log_d_derivative(0.3) == pytest.approx(central, rel=1e-8)


def test_d_log_convex_and_increasing():
    p = np.round(np.arange(0, 1000) * 1e-3, 3)
    f = np.log(d_func(p))
    assert np.all(np.diff(f, 2) >= -1e-9)
    assert np.all(np.diff(d_func(p)) > 0)


@pytest.mark.parametrize("fn", [c_p, kappa_p, psi_2])
@pytest.mark.parametrize("bad", [0.0, -0.2, 1.5])
def test_domain_errors(fn, bad):
    with pytest.raises(DomainError):
        fn(bad)


def test_domain_errors_boundaries():
    with pytest.raises(DomainError):
        c_p(1.0)
    with pytest.raises(DomainError):
        d_func(1.0)
    with pytest.raises(DomainError):
        d_func(-0.1)


# ---------------------------------------------------------------------------
# phi_p and Phi_p
# ---------------------------------------------------------------------------


@given(p_open)
def test_phi_examples(p):
    assert phi_cap(p, 1.0) == pytest.approx(2 ** (-p / 2), rel=1e-15)
    assert phi_small(p, 1.0) == pytest.approx(2 ** (-p / 2), rel=1e-15)
    assert phi_cap(p, 0.0) == pytest.approx(2 ** (1 - p / 2) - 3 ** (-p / 2), rel=1e-14)


@given(p_open)
def test_Phi_below_phi_concave_and_tangent(p):
    x = np.linspace(0.0, 1.0, 2001)
    assert np.all(phi_cap(p, x) <= phi_small(p, x) + 1e-15)
    assert np.all(np.diff(phi_cap(p, x), 2) <= 1e-9)
    big = np.linspace(1.0, 10.0, 101)
    np.testing.assert_array_equal(phi_cap(p, big), phi_small(p, big))
    pair = PhiPair(p)
    h = 1e-6
    left = (pair.Phi(1.0) - pair.Phi(1.0 - h)) / h
    right = (pair.phi(1.0 + h) - pair.phi(1.0)) / h
    assert left == pytest.approx(right, abs=1e-6)
    assert left == pytest.approx(pair.slope_at_one(), abs=1e-6)


def test_phi_domain():
    with pytest.raises(DomainError):
        phi_small(0.5, -0.1)
    with pytest.raises(DomainError):
        phi_cap(0.5, -1.0)
    with pytest.raises(DomainError):
        PhiPair(1.2)


# ---------------------------------------------------------------------------
# L_p norms, A_p, B_p, p*
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("q", [-0.9, -0.5, -0.1, 0.3, 1.0, 2.5, 4.0])
def test_gaussian_norm_against_direct_integral(q):
    # E|Z|^q with |Z|^2 ~ Exp(1): int_0^inf r^q 2 r e^{-r^2} dr
    ref = mp.quad(lambda r: r**q * 2 * r * mp.exp(-(r**2)), [0, 1, mp.inf])
    assert gaussian_norm(q) == pytest.approx(float(ref) ** (1 / q), rel=1e-12)


@pytest.mark.parametrize("q", [-0.9, -0.5, -0.1, 0.3, 1.0, 2.5, 4.0])
def test_pair_norm_against_direct_integral(q):
    # |(xi_1 + xi_2)/sqrt 2| = sqrt 2 sin(v/2) with v uniform on [0, pi]; for q < 0
    # the substitution v = y^k, k = 1/(1+q), removes the endpoint singularity.
    k = 1 / (1 + q) if q < 0 else 1
    lim = mp.pi ** (mp.mpf(1) / k)
    ref = mp.quad(lambda y: (mp.sqrt(2) * mp.sin(y**k / 2)) ** q * k * y ** (k - 1), [0, lim]) / mp.pi
    assert pair_norm(q) == pytest.approx(float(ref) ** (1 / q), rel=1e-10)


def test_norm_limits_at_zero():
    assert gaussian_norm(0.0) == pytest.approx(np.exp(-np.euler_gamma / 2), rel=1e-14)
    assert pair_norm(0.0) == pytest.approx(2**-0.5, rel=1e-14)
    assert gaussian_norm(1e-5) == pytest.approx(gaussian_norm(0.0), rel=1e-5)


def test_khinchin_examples():
    assert khinchin_constants(2.0).A_p == 1.0
    assert khinchin_constants(3.0).A_p == 1.0
    assert khinchin_constants(4.0).B_p == pytest.approx(2**0.25, rel=1e-14)
    k = khinchin_constants(-0.5)
    assert k.B_p == 1.0 and k.B_provenance == "extrapolated" and k.A_regime == "pair"
    assert khinchin_constants(0.5).B_provenance == "paper"
    with pytest.raises(DomainError):
        khinchin_constants(-1.0)


def test_negative_moment_link():
    # Negative exponents link the two families: A_{-p}^{-p} = C_p for 0 < p < 1.
    for p in (0.1, 0.3, 0.7):
        assert khinchin_constants(-p).A_p ** (-p) == pytest.approx(c_p(p), rel=1e-12)


@given(st.floats(-0.99, 6.0))
def test_A_le_one_le_B(p):
    k = khinchin_constants(p)
    assert k.A_p <= 1.0 + 1e-15 <= k.B_p + 2e-15


def test_pstar_location_and_signs():
    ps = find_pstar()
    assert 0.47 < ps < 0.49
    assert pair_norm(0.1) < gaussian_norm(0.1)
    assert pair_norm(1.0) > gaussian_norm(1.0)
    with pytest.raises(ValueError):
        find_pstar(0.0)


@pytest.mark.parametrize("joint", ["pstar", 2.0])
def test_continuity_at_joints(joint):
    x = find_pstar(1e-13) if joint == "pstar" else joint
    for eps in (1e-9, 1e-10):
        a_l, a_r = khinchin_constants(x - eps), khinchin_constants(x + eps)
        assert abs(a_l.A_p - a_r.A_p) <= 1e-8
        assert abs(a_l.B_p - a_r.B_p) <= 1e-8
