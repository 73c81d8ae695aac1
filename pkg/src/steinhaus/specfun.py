"""Point and certified evaluations of J0, J1 and the Gamma family.

Point values come from ``scipy.special`` (Cephes; absolute error of J0/J1
below 1e-15 on [0, 50], relative error of Gamma below 1e-14 on the ranges
used here).  Certified values are built on :mod:`steinhaus.interval`:

* J0/J1 on ``[0, 13]`` by interval Horner evaluation of the power series
  with a geometric remainder bound (scalar points up to 16 are summed
  exactly in rational arithmetic instead);
* J0/J1 beyond that by the Hankel asymptotic expansion, whose remainders in
  both the cosine and the sine parts are bounded by the first neglected
  term for orders 0 and 1 (DLMF 10.17(iii));
* Gamma, log-Gamma and digamma by the library point value widened by a
  documented relative error constant.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy import special as sc

from .errors import DomainError, RangeError
from .interval import PI, Enclosure, as_enclosure, cos, sin, sqrt

__all__ = [
    "BesselOrder",
    "bessel_j",
    "bessel_j0_enclosure",
    "bessel_enclosure",
    "hankel_remainder_eps",
    "j0_envelope",
    "kk_bound",
    "gamma",
    "log_gamma",
    "digamma",
    "gamma_enclosure",
    "log_gamma_enclosure",
    "digamma_enclosure",
    "log_gamma_dd",
    "GAMMA_REL_ERR",
]

#: Relative error allowance folded into every certified Gamma-family value.
#: Cephes achieves a few ulps; the tests check 1e-14 against mpmath.
GAMMA_REL_ERR = 1e-13
#: Absolute floor for digamma, which has a root near 1.4616.
DIGAMMA_ABS_ERR = 1e-15

_SERIES_TERMS = 40
_SWITCH_T = 13.0
_HANKEL_TERMS = 16  # terms of the combined expansion, i.e. 8 in P and 8 in Q


class BesselOrder(enum.IntEnum):
    """Order of the Bessel function of the first kind (0 or 1 only)."""

    ZERO = 0
    ONE = 1

    @classmethod
    def coerce(cls, order) -> "BesselOrder":
        try:
            return cls(int(order))
        except (ValueError, TypeError):
            raise ValueError(f"Bessel order must be 0 or 1, got {order!r}") from None


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------


def bessel_j(order, t):
    """J0 or J1 at real ``t`` (scalar or array).

    Negative arguments use parity: J0 is even and J1 is odd.
    """
    order = BesselOrder.coerce(order)
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)):
        raise DomainError("bessel_j requires finite arguments")
    out = sc.j0(t) if order == 0 else sc.j1(t)
    return out[()] if out.ndim == 0 else out


def j0_envelope(t):
    """The bound ``min(1, sqrt(2/(pi t)))`` dominating ``|J0(t)|`` for ``t > 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("j0_envelope requires t > 0")
    with np.errstate(divide="ignore"):
        val = np.sqrt(2.0 / (np.pi * t))
    out = np.where(t <= 2.0 / np.pi, 1.0, np.minimum(val, 1.0))
    return out[()] if out.ndim == 0 else out


def kk_bound(t):
    """Gaussian-type bound ``exp(-t^2/4 - t^4/64)`` on ``|J0(t)|`` for ``0 < t < 2.59``."""
    t = np.asarray(t, dtype=float)
    if np.any(~((t > 0) & (t < 2.59))):
        raise RangeError("kk_bound is only claimed on the open interval (0, 2.59)")
    out = np.exp(-(t**2) / 4.0 - t**4 / 64.0)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# certified J0 / J1
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _series_coefficients(order: int):
    """Enclosures of the power-series coefficients in x = t^2/4."""
    coeffs = []
    for k in range(_SERIES_TERMS):
        c = Fraction((-1) ** k, factorial(k) * factorial(k + order))
        coeffs.append(Enclosure.exact(c))
    return tuple(coeffs)


def _series(order: int, t: Enclosure) -> Enclosure:
    x = t.square() * 0.25
    coeffs = _series_coefficients(order)
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    # Remainder: terms from k = K onward alternate and decay geometrically
    # with ratio at most x/((K+1)(K+1+order)) < 1 on the supported range.
    K = _SERIES_TERMS
    xh = np.asarray(x.hi, dtype=float)
    ratio = xh / ((K + 1.0) * (K + 1.0 + order))
    first = np.exp(K * np.log(np.maximum(xh, 1e-300)) - sc.gammaln(K + 1.0) - sc.gammaln(K + 1.0 + order))
    rem = np.nextafter(first / (1.0 - ratio) * (1 + 1e-12), np.inf)
    acc = acc + Enclosure._raw(-rem, rem)
    if order == 1:
        acc = acc * (t * 0.5)
    return acc


@lru_cache(maxsize=None)
def _hankel_coefficients(order: int):
    """Exact a_k(order) for k < _HANKEL_TERMS + 1."""
    mu = 4 * order * order
    out = []
    num = Fraction(1)
    for k in range(_HANKEL_TERMS + 1):
        if k > 0:
            num *= Fraction(mu - (2 * k - 1) ** 2, 8 * k)
        out.append(num)
    return tuple(out)


def _hankel(order: int, t: Enclosure) -> Enclosure:
    a = _hankel_coefficients(order)
    inv = 1.0 / t
    inv2 = inv.square()
    n_p = _HANKEL_TERMS // 2
    # P = sum_{k<n_p} (-1)^k a_{2k} t^{-2k};  Q = sum_{k<n_p} (-1)^k a_{2k+1} t^{-2k-1}
    P = Enclosure.exact((-1) ** (n_p - 1) * a[2 * n_p - 2])
    Q = Enclosure.exact((-1) ** (n_p - 1) * a[2 * n_p - 1])
    for k in range(n_p - 2, -1, -1):
        P = P * inv2 + Enclosure.exact((-1) ** k * a[2 * k])
        Q = Q * inv2 + Enclosure.exact((-1) ** k * a[2 * k + 1])
    Q = Q * inv
    lo_t = np.asarray(t.lo, dtype=float)
    p_rem = float(abs(a[2 * n_p])) * lo_t ** (-2.0 * n_p) * (1 + 1e-12)
    q_rem = float(abs(a[min(2 * n_p + 1, len(a) - 1)])) * lo_t ** (-2.0 * n_p - 1) * (1 + 1e-12)
    if 2 * n_p + 1 >= len(a):  # coefficient a_{2n_p+1} computed on demand
        mu = 4 * order * order
        nxt = a[-1] * Fraction(mu - (2 * len(a) - 1) ** 2, 8 * len(a))
        q_rem = float(abs(nxt)) * lo_t ** (-2.0 * n_p - 1) * (1 + 1e-12)
    P = P + Enclosure._raw(-p_rem, p_rem)
    Q = Q + Enclosure._raw(-q_rem, q_rem)
    chi = t - PI * (0.5 * order + 0.25)
    amp = sqrt(2.0 / (PI * t))
    return amp * (P * cos(chi) - Q * sin(chi))


def _series_exact_point(order: int, t: float) -> Enclosure:
    """Series at a float ``t`` summed exactly in rationals, then rounded outward."""
    x = Fraction(t) ** 2 / 4
    total = Fraction(0)
    term = Fraction(1, factorial(order))
    for k in range(_SERIES_TERMS):
        total += term
        term *= -x / ((k + 1) * (k + 1 + order))
    # |term| is now the first omitted term; later ones decay geometrically.
    ratio = x / ((_SERIES_TERMS + 1) * (_SERIES_TERMS + 1 + order))
    rem = abs(term) / (1 - ratio)
    if order == 1:
        total *= Fraction(t) / 2
        rem *= Fraction(t) / 2
    lo = Enclosure.exact(total - rem).lo
    hi = Enclosure.exact(total + rem).hi
    return Enclosure._raw(lo, hi)


def _point_values(order: int, m) -> Enclosure:
    """Enclosures of J_order at an array of float points ``m >= 0``."""
    m = np.asarray(m, dtype=float)
    out_lo = np.empty_like(m)
    out_hi = np.empty_like(m)
    low = m <= _SWITCH_T
    if np.any(low):
        s = _series(order, Enclosure._raw(m[low], m[low]))
        out_lo[low], out_hi[low] = s.lo, s.hi
    if np.any(~low):
        h = _hankel(order, Enclosure._raw(m[~low], m[~low]))
        out_lo[~low], out_hi[~low] = h.lo, h.hi
    return Enclosure._raw(out_lo, out_hi)


def _taylor_range(order: int, t: Enclosure) -> Enclosure:
    """Range of J_order over each interval of ``t`` by a second-order Taylor form.

    Uses J0' = -J1, J1' = J0 - J1/t and the bound |J_n^(k)| <= 1.
    """
    lo = np.atleast_1d(np.asarray(t.lo, dtype=float))
    hi = np.atleast_1d(np.asarray(t.hi, dtype=float))
    m = 0.5 * (lo + hi)
    r = np.nextafter(np.maximum(m - lo, hi - m), np.inf)
    j0 = _point_values(0, m)
    j1 = _point_values(1, m)
    if order == 0:
        val, der = j0, -j1
    else:
        val = j1
        safe_m = np.where(m > 0, m, 1.0)
        der = j0 - j1 / Enclosure._raw(safe_m, safe_m)
        der = Enclosure._raw(np.where(m > 0, der.lo, 0.5), np.where(m > 0, der.hi, 0.5))
    dev = Enclosure._raw(-r, r)
    half_r2 = np.nextafter(0.5 * r * r, np.inf)
    out = val + der * dev + Enclosure._raw(-half_r2, half_r2)
    return Enclosure._raw(np.maximum(out.lo, -1.0), np.minimum(out.hi, 1.0))


def bessel_enclosure(order, t) -> Enclosure:
    """Certified enclosure of J0 or J1 over every point of the enclosure ``t >= 0``.

    Arrays of enclosures are evaluated elementwise.  Scalar point arguments
    up to 16 are summed exactly in rational arithmetic; other point
    arguments use interval Horner (t <= 13) or the Hankel expansion; proper
    intervals use a second-order Taylor form about their midpoint.
    """
    order = int(BesselOrder.coerce(order))
    t = as_enclosure(t)
    lo = np.asarray(t.lo, dtype=float)
    hi = np.asarray(t.hi, dtype=float)
    if np.any(lo < 0) or np.any(~np.isfinite(hi)):
        raise DomainError("bessel_enclosure requires finite t >= 0")
    if lo.ndim == 0:
        if lo == hi:
            if hi <= 16.0:
                return _series_exact_point(order, float(lo))
            return _hankel(order, t)
        return _taylor_range(order, t)[0]
    point = lo == hi
    if np.all(point):
        return _point_values(order, lo)
    out = _taylor_range(order, t)
    if np.any(point):
        pv = _point_values(order, lo[point])
        out.lo[point], out.hi[point] = pv.lo, pv.hi
    return out


def bessel_j0_enclosure(t) -> Enclosure:
    """Certified power-series enclosure of J0 over ``t``, which must lie in [0, 16]."""
    t = as_enclosure(t)
    if np.any(np.asarray(t.lo) < 0) or np.any(np.asarray(t.hi) > 16.0):
        raise RangeError("bessel_j0_enclosure is provided on [0, 16] only")
    if np.ndim(t.lo) == 0 and t.lo == t.hi:
        return _series_exact_point(0, float(t.lo))
    direct = _series(0, t)
    if np.all(np.asarray(t.lo) == np.asarray(t.hi)):
        return direct
    taylor = _taylor_range(0, t)
    if np.ndim(t.lo) == 0:
        taylor = taylor[0]
    return direct.intersect(taylor)


def hankel_remainder_eps(t):
    """Bound ``eps(t)`` with ``|J0(t) sqrt(pi t/2) - cos(t - pi/4)| <= eps(t)`` for ``t > 0``.

    One term of P and one of Q are kept; the remainders are the next terms.
    """
    t = np.asarray(t, dtype=float)
    return 1.0 / (8.0 * t) + 9.0 / (128.0 * t**2) + 75.0 / (1024.0 * t**3)


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------


def _check_positive(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)) or np.any(~np.isfinite(x)):
        raise DomainError(f"{name} requires finite x > 0")
    return x


def gamma(x):
    """Gamma function for ``x > 0``."""
    x = _check_positive(x, "gamma")
    out = sc.gamma(x)
    return out[()] if np.ndim(out) == 0 else out


def log_gamma(x):
    """Natural logarithm of the Gamma function for ``x > 0``."""
    x = _check_positive(x, "log_gamma")
    out = sc.gammaln(x)
    return out[()] if np.ndim(out) == 0 else out


def digamma(x):
    """Digamma function psi = Gamma'/Gamma for ``x > 0``."""
    x = _check_positive(x, "digamma")
    out = sc.psi(x)
    return out[()] if np.ndim(out) == 0 else out


def _widen(v, rel, absolute=0.0):
    v = np.asarray(v, dtype=float)
    r = np.abs(v) * rel + absolute
    return Enclosure._raw(np.nextafter(v - r, -np.inf), np.nextafter(v + r, np.inf))


def gamma_enclosure(x) -> Enclosure:
    """Enclosure of Gamma(x) at the float(s) ``x > 0``."""
    return _widen(gamma(x), GAMMA_REL_ERR, 1e-300)


def log_gamma_enclosure(x) -> Enclosure:
    """Enclosure of log Gamma(x) at the float(s) ``x > 0``."""
    return _widen(log_gamma(x), GAMMA_REL_ERR, 1e-15)


def digamma_enclosure(x) -> Enclosure:
    """Enclosure of the digamma function at the float(s) ``x > 0``."""
    return _widen(digamma(x), GAMMA_REL_ERR, DIGAMMA_ABS_ERR)


def log_gamma_dd(z, terms: int) -> Enclosure:
    """Certified enclosure of ``(log Gamma)''(z) = sum_{n>=0} 1/(n+z)^2``.

    The first ``terms`` summands are added in interval arithmetic; the tail
    lies in ``[1/(terms+z), 1/(terms+z-1)]`` by comparison with integrals.
    """
    if int(terms) != terms or terms < 1:
        raise ValueError("terms must be a positive integer")
    terms = int(terms)
    z = as_enclosure(z)
    if np.any(np.asarray(z.lo) <= 0):
        raise DomainError("log_gamma_dd requires z > 0")
    scalar = np.ndim(z.lo) == 0
    zl = np.atleast_1d(z.lo)[:, None]
    zh = np.atleast_1d(z.hi)[:, None]
    n = np.arange(terms, dtype=float)[None, :]
    # 1/(n+z)^2 is decreasing in z: the upper end of z gives the lower bound.
    dz = Enclosure._raw(np.nextafter(n + zl, -np.inf), np.nextafter(n + zh, np.inf))
    summands = Enclosure._raw(np.nextafter(1.0 / dz.hi**2, -np.inf) * (1 - 4e-16), np.nextafter(1.0 / dz.lo**2, np.inf) * (1 + 4e-16))
    partial = summands.sum(axis=1)
    tail_lo = 1.0 / Enclosure._raw(np.nextafter(terms + z.hi, -np.inf), np.nextafter(terms + z.hi, np.inf))
    tail_hi = 1.0 / Enclosure._raw(np.nextafter(terms - 1 + z.lo, -np.inf), np.nextafter(terms - 1 + z.lo, np.inf))
    tail = Enclosure._raw(np.atleast_1d(tail_lo.lo), np.atleast_1d(tail_hi.hi))
    out = partial + tail
    if scalar:
        return out[0]
    return out
