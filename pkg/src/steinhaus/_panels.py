"""Certified panel quadrature for F_p(s) = int_0^inf |J0(t)|^s t^{p-1} dt.

The interval [0, T] is tiled by panels of dyadic width ``h = 2^-7`` so that
every endpoint, midpoint ``m`` and half-width ``r`` is an exact float.  On a
panel the integrand is ``g(t) w(t)`` with ``g = |J0|^s`` and ``w = t^{p-1}``;
a second-order Taylor form of ``g`` about ``m`` gives

    int g w  in  g(m) M0 + g'(m) M1 + (1/2) [g''(panel)] M2,

where ``M_k = int (t - m)^k w(t) dt`` are computed in interval arithmetic
(closed forms near 0, a binomial series with a geometric remainder
elsewhere).  Panels on which J0 may vanish use the zeroth-order form
``[range of g] M0`` instead (for even integer ``s`` the Taylor form stays
valid and is used throughout).  All derivatives of J0 and J1 are bounded
by 1 in absolute value, which drives the ranges of J0, J1 and J0'' over a
panel.

The tail beyond ``T`` is enclosed by averaging the Hankel phase over its
period (see :func:`tail_enclosure`) and intersected with the crude
envelope bound ``(2/pi)^{s/2} T^{p-s/2}/(s/2-p)``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .interval import HALF_PI, PI, Enclosure, cos
from .specfun import _point_values, hankel_remainder_eps

H = 2.0**-7
_R = 2.0**-8
_CLOSED_FORM_PANELS = 8
_SERIES_TERMS = 14
_MU_CELLS = 2**16


def _E(lo, hi=None):
    return Enclosure._raw(lo, lo if hi is None else hi)


def _pow_point(base: np.ndarray, expo: Enclosure) -> Enclosure:
    """``base ** e`` for float bases ``>= 0`` and every ``e`` in the enclosure ``expo``.

    For a fixed positive base the power is monotone in the exponent, so the
    two endpoint exponents suffice; zero bases require positive exponents.
    """
    base = np.asarray(base, dtype=float)
    with np.errstate(divide="ignore"):
        v1 = np.power(base, expo.lo)
        v2 = np.power(base, expo.hi)
    lo = np.minimum(v1, v2)
    hi = np.maximum(v1, v2)
    lo = np.maximum(np.nextafter(np.nextafter(lo, -np.inf), -np.inf), 0.0)
    hi = np.nextafter(np.nextafter(hi, np.inf), np.inf)
    return _E(lo, hi)


def _bessel_data(m: np.ndarray, r: np.ndarray):
    """J0(m), J1(m) and ranges of J0, J1, J0'' over panels ``[m - r, m + r]`` (``m > 0``)."""
    j0 = _point_values(0, m)
    j1 = _point_values(1, m)
    mE = _E(m)
    dev = _E(-r, r)
    half_r2 = np.nextafter(0.5 * r * r, np.inf)
    quad = _E(-half_r2, half_r2)
    j1_over_m = j1 / mE
    # J0' = -J1, J1' = J0 - J1/t, J0'' = -J0 + J1/t; every derivative of J0, J1 is in [-1, 1].
    j0R = j0 - j1 * dev + quad
    j1R = j1 + (j0 - j1_over_m) * dev + quad
    j0ddR = (j1_over_m - j0) + dev
    clip = lambda e, b: _E(np.maximum(e.lo, -b), np.minimum(e.hi, b))  # noqa: E731
    return m, j0, j1, clip(j0R, 1.0), clip(j1R, 0.6), clip(j0ddR, 1.0)


@lru_cache(maxsize=8)
def panel_bessel(n_panels: int):
    """Bessel data on panels ``[k h, (k+1) h]``, ``k < n_panels``.

    Returns midpoints plus enclosures of J0(m), J1(m) and of the ranges of
    J0, J1 and J0'' over each panel.
    """
    k = np.arange(n_panels, dtype=float)
    m = (k + 0.5) * H
    return _bessel_data(m, np.full_like(m, _R))


HEAD_PANELS = 64  # [0, 64 h] = [0, 1/2] is meshed finer
_HEAD_SPLIT = 8  # panels of width h/8 on [h, 64 h]
_HEAD_GEOMETRIC = 12  # [0, h] split at h/2, h/4, ..., h/2^12


@lru_cache(maxsize=1)
def head_edges():
    """Exact panel edges of the refined head ``[0, HEAD_PANELS h]``."""
    geo = H * 2.0 ** -np.arange(_HEAD_GEOMETRIC, -1, -1, dtype=float)
    uni = H + (H / _HEAD_SPLIT) * np.arange(1, (HEAD_PANELS - 1) * _HEAD_SPLIT + 1, dtype=float)
    return np.concatenate([[0.0], geo, uni])


@lru_cache(maxsize=1)
def head_bessel():
    e = head_edges()
    a, b = e[:-1], e[1:]
    return _bessel_data(0.5 * (a + b), 0.5 * (b - a))


def _binom_series_moments(p: np.ndarray, m: np.ndarray, r: float = _R):
    """M0, M1, M2 on panels ``[m - r, m + r]`` with ``r/m <= 1/15`` (arrays P x N)."""
    PE = _E(np.broadcast_to(p[:, None], (p.size, m.size)).copy())
    mm = np.broadcast_to(m[None, :], (p.size, m.size)).copy()
    mE = _E(mm)
    rho = _E(r) / mE
    base = _pow_point(mm, PE - 1.0)
    # S_k = sum_{j: k+j even} C(p-1, j) * 2 r^{k+1} rho^j / (k+j+1)
    S = [None, None, None]
    C = _E(np.ones_like(mE.lo))
    rho_pow = _E(np.ones_like(mE.lo))
    for j in range(_SERIES_TERMS):
        if j > 0:
            C = C * (PE - float(j)) / float(j)  # C(p-1, j) = C(p-1, j-1) (p - j)/j
            rho_pow = rho_pow * rho
        term = C * rho_pow
        for kk in range(3):
            if (kk + j) % 2 == 0:
                piece = term * (2.0 * r ** (kk + 1) / (kk + j + 1))
                S[kk] = piece if S[kk] is None else S[kk] + piece
    rho_hi = rho.hi
    out = []
    for kk in range(3):
        rem = 2.0 * r ** (kk + 1) * rho_hi**_SERIES_TERMS / ((kk + _SERIES_TERMS + 1) * (1.0 - rho_hi))
        rem = np.nextafter(rem * 1.0000001, np.inf)
        out.append(base * (S[kk] + _E(-rem, rem)))
    return out


def _closed_form_moments(p: np.ndarray, n: int):
    """M0, M1, M2 on the first ``n`` panels from antiderivatives."""
    k = np.arange(n, dtype=float)
    return _edge_moments(p, k * H, (k + 1) * H)


def _edge_moments(p: np.ndarray, a_edges: np.ndarray, b_edges: np.ndarray):
    """M0, M1, M2 on panels ``[a, b]`` (exact float edges, ``a >= 0``) from antiderivatives."""
    n = a_edges.size
    PE = _E(np.broadcast_to(p[:, None], (p.size, n)).copy())
    a = np.broadcast_to(a_edges[None, :], (p.size, n)).copy()
    b = np.broadcast_to(b_edges[None, :], (p.size, n)).copy()
    m = _E(0.5 * (a + b))

    def scaled_diff(q: Enclosure) -> Enclosure:
        # (b^q - a^q)/q with q > 0
        return (_pow_point(b, q) - _pow_point(a, q)) / q

    D0 = scaled_diff(PE)
    D1 = scaled_diff(PE + 1.0)
    D2 = scaled_diff(PE + 2.0)
    M0 = D0
    M1 = D1 - m * D0
    M2 = D2 - m * D1 * 2.0 + m.square() * D0
    M2 = _E(np.maximum(M2.lo, 0.0), M2.hi)
    M0 = _E(np.maximum(M0.lo, 0.0), M0.hi)
    return M0, M1, M2


_HEAD_CACHE: dict = {}


def head_moments(p):
    """Weight moments on the refined head panels, shape (len(p), n_head)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    key = p.tobytes()
    hit = _HEAD_CACHE.get(key)
    if hit is None:
        e = head_edges()
        a, b = e[:-1], e[1:]
        geo = a < H
        Mg = _edge_moments(p, a[geo], b[geo])
        Mu = _binom_series_moments(p, 0.5 * (a[~geo] + b[~geo]), float(H / (2 * _HEAD_SPLIT)))
        cat = lambda x, y: _E(np.concatenate([x.lo, y.lo], axis=1), np.concatenate([x.hi, y.hi], axis=1))  # noqa: E731
        hit = tuple(cat(x, y) for x, y in zip(Mg, Mu))
        if len(_HEAD_CACHE) > 6:
            _HEAD_CACHE.clear()
        _HEAD_CACHE[key] = hit
    return hit


_MOMENT_CACHE: dict = {}


def weight_moments(p, n_panels: int):
    """Enclosures of ``M_k(p, panel)`` for k = 0, 1, 2 as arrays of shape (len(p), n_panels)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    key = (p.tobytes(), n_panels)
    hit = _MOMENT_CACHE.get(key)
    if hit is not None:
        return hit
    # Reuse a larger cached computation for the same p if present.
    for (pk, nk), val in _MOMENT_CACHE.items():
        if pk == key[0] and nk >= n_panels:
            return tuple(_E(e.lo[:, :n_panels], e.hi[:, :n_panels]) for e in val)
    nc = min(_CLOSED_FORM_PANELS, n_panels)
    C0, C1, C2 = _closed_form_moments(p, nc)
    if n_panels > nc:
        m = (np.arange(nc, n_panels, dtype=float) + 0.5) * H
        S0, S1, S2 = _binom_series_moments(p, m)
        cat = lambda x, y: _E(np.concatenate([x.lo, y.lo], axis=1), np.concatenate([x.hi, y.hi], axis=1))  # noqa: E731
        out = (cat(C0, S0), cat(C1, S1), cat(C2, S2))
    else:
        out = (C0, C1, C2)
    if len(_MOMENT_CACHE) > 6:
        _MOMENT_CACHE.clear()
    _MOMENT_CACHE[key] = out
    return out


def _powE(x: Enclosure, s: float) -> Enclosure:
    if float(s).is_integer():
        return x._pow_int(int(s))
    return x.pow_real(s)


def panel_terms(s: float, n_panels: int):
    """Per-panel Taylor data ``(G0, G1, G2, taylor_ok, GR)`` for ``g = |J0|^s``.

    ``G0 = g(m)``, ``G1 = g'(m)``, ``G2`` encloses ``g''/2`` over the panel and
    ``GR`` encloses ``g`` over the panel.  Where ``taylor_ok`` is False only
    ``GR`` is meaningful.
    """
    return _terms(s, panel_bessel(n_panels))


def _terms(s: float, data):
    m, j0, j1, j0R, j1R, j0ddR = data
    absR = abs(j0R)
    GR = _powE(absR, s)
    even = float(s).is_integer() and int(s) % 2 == 0
    if even:
        si = int(s)
        G0 = j0._pow_int(si)
        G1 = j0._pow_int(si - 1) * (-j1) * float(si)
        if si >= 2:
            G2 = (j0R._pow_int(si - 2) * j1R.square() * float(si * (si - 1)) + j0R._pow_int(si - 1) * j0ddR * float(si)) * 0.5
        else:
            G2 = _E(np.zeros_like(m))
        ok = np.ones(m.shape, dtype=bool)
        return G0, G1, G2, ok, GR
    ok = ~(j0R.contains_zero() | j0.contains_zero())
    sign = np.where(j0.mid >= 0, 1.0, -1.0)
    # Substitute harmless values where the Taylor form is not used.
    safe = lambda e, v: _E(np.where(ok, e.lo, v), np.where(ok, e.hi, v))  # noqa: E731
    Y = safe(j0 * sign, 1.0)
    YR = safe(j0R * sign, 1.0)
    sJ1 = j1 * sign
    sJdd = j0ddR * sign
    G0 = _powE(Y, s)
    G1 = _powE(Y, s - 1.0) * (-sJ1) * s
    G2 = (_powE(YR, s - 2.0) * j1R.square() * (s * (s - 1.0)) + _powE(YR, s - 1.0) * sJdd * s) * 0.5
    return G0, G1, G2, ok, GR


@lru_cache(maxsize=256)
def hankel_phase_means(s: float, eps: float):
    """Enclosures of the mean over a period of ``(|cos u| - eps)_+^s`` and ``(|cos u| + eps)^s``.

    Both integrands are decreasing on [0, pi/2]; left and right Riemann
    sums on ``_MU_CELLS`` cells bracket the integrals.
    """
    n = _MU_CELLS
    k = np.arange(n + 1, dtype=float)
    nodes = HALF_PI * _E(k) / float(n)  # enclosures of k pi / (2n)
    c = cos(nodes)
    c = _E(np.clip(c.lo, 0.0, 1.0), np.clip(c.hi, 0.0, 1.0))
    out = []
    for sign in (-1.0, 1.0):
        v = c + sign * eps
        v = _E(np.maximum(v.lo, 0.0), np.maximum(v.hi, 0.0))
        f = _powE(v, s)
        # (2/pi) * (pi/(2n)) * sum = sum / n
        upper = _E(f.hi[:-1]).sum() / float(n)
        lower = _E(f.lo[1:]).sum() / float(n)
        out.append(Enclosure._raw(lower.lo, upper.hi))
    return out[0], out[1]


def tail_enclosure(p, s: float, T: float) -> Enclosure:
    """Enclosure of ``int_T^inf |J0|^s t^{p-1} dt`` for ``T >= 12`` (vectorized in p).

    Writing ``J0(t) = sqrt(2/(pi t)) (cos(t - pi/4) + rho)`` with
    ``|rho| <= eps(T)``, the integrand is squeezed between
    ``(2/pi)^{s/2} w(t) (|cos| -/+ eps)^s`` with decreasing ``w = t^{p-1-s/2}``.
    For a pi-periodic ``h`` with mean ``mu`` and ``0 <= h <= Hmax``,
    ``int_T^inf w h = mu int_T^inf w + E`` with
    ``E in w(T) [-pi mu, pi (Hmax - mu)]`` (integration by parts against the
    bounded primitive of ``h - mu``).
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    eps = float(np.nextafter(hankel_remainder_eps(T) * (1 + 1e-12), np.inf))
    mu_lo, mu_hi = hankel_phase_means(float(s), eps)
    Tarr = np.full(p.shape, float(T))
    expo = _E(p) - 0.5 * s
    wT = _pow_point(Tarr, expo - 1.0)
    W = _pow_point(Tarr, expo) / (-expo)
    pref = (_E(2.0) / PI).pow_real(0.5 * s)
    Hmax = _powE(_E(1.0 + eps), s)
    lower = mu_lo * W - PI * mu_lo.hi * wT
    upper = mu_hi * W + PI * (Hmax - mu_lo.lo) * wT
    sharp = pref * Enclosure._raw(np.maximum(lower.lo, 0.0), upper.hi)
    envelope = pref * W
    return Enclosure._raw(np.maximum(sharp.lo, 0.0), np.minimum(sharp.hi, envelope.hi))


def _panel_sum(M, terms) -> Enclosure:
    M0, M1, M2 = M
    G0, G1, G2, ok, GR = terms
    bc = lambda e: _E(e.lo[None, :], e.hi[None, :])  # noqa: E731
    zeroth = bc(GR) * M0
    taylor = bc(G0) * M0 + bc(G1) * M1 + bc(G2) * M2
    okb = np.broadcast_to(ok[None, :], zeroth.lo.shape)
    lo = np.where(okb, np.maximum(taylor.lo, zeroth.lo), zeroth.lo)
    hi = np.where(okb, np.minimum(taylor.hi, zeroth.hi), zeroth.hi)
    if np.any(lo > hi):
        raise ArithmeticError("inconsistent panel enclosures; this indicates a bug")
    return _E(lo, hi).sum(axis=1)


def f_integral_grid(p, s: float, T: float) -> Enclosure:
    """Certified enclosures of F_p(s) for an array of p, with panels up to ``T``.

    ``[0, 1/2]`` uses the refined head mesh (geometric towards 0, where the
    weight ``t^{p-1}`` carries most of the mass for small ``p``); ``[1/2, T]``
    uses panels of width ``h``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    n_panels = int(round(T / H))
    T = n_panels * H
    head = _panel_sum(head_moments(p), _terms(float(s), head_bessel()))
    M = weight_moments(p, n_panels)
    K = HEAD_PANELS
    M = tuple(_E(e.lo[:, K:], e.hi[:, K:]) for e in M)
    G = panel_terms(float(s), n_panels)
    G = tuple(g[K:] for g in G)
    body = _panel_sum(M, G)
    return head + body + tail_enclosure(p, s, T)
