"""Independent reference implementations used by the tests.

Everything here is computed by a different route from the library:
mpmath (arbitrary precision) for special functions and closed forms,
and scipy adaptive quadrature between the zeros of J0 for the integrals.
"""
import mpmath as mp
import numpy as np
from scipy import integrate
from scipy import special as sc

mp.mp.dps = 40


def j0(t):
    return float(mp.besselj(0, t))


def j1(t):
    return float(mp.besselj(1, t))


def gamma(x):
    return float(mp.gamma(x))


def c_p(p):
    """2^{p/2} Gamma(1-p) / Gamma(1-p/2)^2 in 40-digit arithmetic."""
    p = mp.mpf(p)
    return float(2 ** (p / 2) * mp.gamma(1 - p) / mp.gamma(1 - p / 2) ** 2)


def kappa_p(p):
    p = mp.mpf(p)
    return float(2 ** (1 - p) * mp.gamma(1 - p / 2) / mp.gamma(p / 2))


def psi_2(p):
    p = mp.mpf(p)
    return float(2 ** (3 * p / 2 - 1) * mp.gamma(1 - p) * mp.gamma(p / 2) / mp.gamma(1 - p / 2) ** 3)


def d_func(p):
    p = mp.mpf(p)
    return float(2 ** (p / 2) * mp.gamma(1 - p) / mp.gamma(1 - p / 2) ** 3)


def pair_moment_angle(p, x=1.0):
    """E|xi_1 + sqrt(x) xi_2|^{-p} as (1/pi) int_0^pi |1 + sqrt(x) e^{iu}|^{-p} du (mpmath quad).

    Uses |1 + r e^{iu}|^2 = (1 - r)^2 + 4 r cos(u/2)^2, free of cancellation near u = pi.
    """
    r = mp.sqrt(mp.mpf(x))
    f = lambda u: ((1 - r) ** 2 + 4 * r * mp.cos(u / 2) ** 2) ** (-mp.mpf(p) / 2)  # noqa: E731
    return float(mp.quad(f, [0, mp.pi / 2, mp.pi]) / mp.pi)


def pair_moment_hyp(p, x):
    """The same moment as a Gauss hypergeometric value 2F1(p/2, p/2; 1; x)."""
    return float(mp.hyp2f1(mp.mpf(p) / 2, mp.mpf(p) / 2, 1, x))


def mean_abs_cos_power(s):
    """Average of |cos|^s over a period."""
    return float(mp.gamma((s + 1) / 2) / (mp.sqrt(mp.pi) * mp.gamma(s / 2 + 1)))


def f_p_reference(p, s, zeros=2000):
    """int_0^inf |J0(t)|^s t^{p-1} dt by quadrature between zeros plus a phase-averaged tail.

    The tail beyond the last zero T uses |J0(t)|^s ~ (2/(pi t))^{s/2} |cos|^s
    averaged over the phase; its relative error is O(1/T).
    """
    z = sc.jn_zeros(0, zeros)
    total = integrate.quad(lambda t: abs(sc.j0(t)) ** s, 0, z[0], weight="alg", wvar=(p - 1, 0), epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    for a, b in zip(z[:-1], z[1:]):
        total += integrate.quad(lambda t: abs(sc.j0(t)) ** s * t ** (p - 1), a, b, epsabs=1e-16, epsrel=1e-13)[0]
    T = z[-1]
    tail = mean_abs_cos_power(s) * (2 / np.pi) ** (s / 2) * T ** (p - s / 2) / (s / 2 - p)
    return total + tail, tail


def moment_three_mp(a, p):
    """E|a_1 xi_1 + a_2 xi_2 + a_3 xi_3|^{-p} by conditioning on the first two phases.

    With rho(u) = |a_1 + a_2 e^{iu}|, the average over the third phase is
    M^{-p} 2F1(p/2, p/2; 1; (m/M)^2) with M = max(rho, a_3), m = min(rho, a_3);
    the remaining integral over u in [0, pi] is split where rho = a_3.
    """
    a1, a2, a3 = (mp.mpf(v) for v in a)
    q = mp.mpf(p) / 2

    def rho(u):
        return mp.sqrt((a1 - a2) ** 2 + 4 * a1 * a2 * mp.cos(u / 2) ** 2)

    def g(u):
        r = rho(u)
        big, small = (r, a3) if r >= a3 else (a3, r)
        return big ** (-2 * q) * mp.hyp2f1(q, q, 1, (small / big) ** 2)

    pts = [mp.mpf(0), mp.pi]
    c = (a3**2 - (a1 - a2) ** 2) / (4 * a1 * a2)
    if 0 < c < 1:
        pts.insert(1, 2 * mp.acos(mp.sqrt(c)))
    return float(mp.quad(g, pts) / mp.pi)
