"""Negative moments of Steinhaus sums and the Bessel integrals F_p, Psi_p.

Three independent routes to ``E|sum_j a_j xi_j|^{-p}`` (``0 < p < 1``):

* :func:`mc_negative_moment` -- direct simulation of the uniform angles;
* :func:`quad_negative_moment` -- the Bessel-integral identity
  ``E|S|^{-p} = kappa_p int_0^inf prod_j J0(a_j t) t^{p-1} dt``;
* :func:`pair_series_moment` -- the series
  ``E|xi_1 + sqrt(x) xi_2|^{-p} = sum_k binom(-p/2, k)^2 x^k`` for two terms.

:func:`f_p_integral` and :func:`psi_func` return certified enclosures of
``F_p(s) = int_0^inf |J0(t)|^s t^{p-1} dt`` and ``Psi_p(s) = s^{p/2} F_p(s)``.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy import special as sc

from . import _panels
from .constants import kappa_p
from .errors import ConvergenceError, DomainError, RangeError, VarianceWarning
from .interval import Enclosure

__all__ = [
    "CoefficientVector",
    "MomentEstimate",
    "exact_single_moment",
    "mc_negative_moment",
    "quad_negative_moment",
    "pair_series_bounds",
    "pair_series_moment",
    "pair_moment",
    "random_unit_vectors",
    "f_p_integral",
    "f_p_integral_grid",
    "psi_func",
    "psi_func_grid",
]

METHODS = ("monte_carlo", "bessel_quadrature", "pair_series", "exact_single")


@dataclass(frozen=True)
class CoefficientVector:
    """Moduli ``a_1, ..., a_n > 0`` of the coefficients of a Steinhaus sum.

    Zero entries are dropped on construction.  With ``unit=True`` the
    constructor asserts ``sum a_j^2 = 1`` within 1e-12.
    """

    a: np.ndarray
    unit: bool = False

    def __init__(self, a, unit: bool = False):
        arr = np.abs(np.atleast_1d(np.asarray(a, dtype=float)).ravel())
        if np.any(~np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr = arr[arr > 0]
        if arr.size == 0:
            raise DomainError("at least one nonzero coefficient is required")
        if unit and abs(float(np.sum(arr**2)) - 1.0) > 1e-12:
            raise DomainError("unit=True requires sum of squares equal to 1 within 1e-12")
        object.__setattr__(self, "a", arr)
        object.__setattr__(self, "unit", bool(unit))

    @property
    def n(self) -> int:
        return int(self.a.size)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.a**2)))

    def normalized(self) -> "CoefficientVector":
        return CoefficientVector(self.a / self.norm, unit=True)

    def __len__(self):
        return self.n


def _coerce(a) -> CoefficientVector:
    return a if isinstance(a, CoefficientVector) else CoefficientVector(a)


@dataclass
class MomentEstimate:
    """Estimate of ``E|S|^{-p}`` with an uncertainty and the method that produced it."""

    value: float
    half_width: float
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.half_width >= 0):
            raise ValueError("half_width must be non-negative")
        if not (self.value > 0):
            raise ValueError("moment estimates are positive")

    def agrees_with(self, other: "MomentEstimate") -> bool:
        return abs(self.value - other.value) <= self.half_width + other.half_width

    @property
    def interval(self) -> tuple[float, float]:
        return (self.value - self.half_width, self.value + self.half_width)


def _check_p(p):
    p = float(p)
    if not 0 < p < 1:
        raise DomainError("the moment exponent p must lie in (0, 1)")
    return p


def exact_single_moment(a, p) -> MomentEstimate:
    """``E|a_1 xi_1|^{-p} = a_1^{-p}`` for a one-term sum."""
    a = _coerce(a)
    p = _check_p(p)
    if a.n != 1:
        raise DomainError("exact_single applies to one-term sums only")
    return MomentEstimate(float(a.a[0] ** (-p)), 0.0, "exact_single", {"n": 1})


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

MC_BLOCKS = 16
_MC_CHUNK = 1 << 16
_KURTOSIS_WARN = 50.0


def mc_negative_moment(a, p, samples: int = 1_000_000, seed: int = 20240601) -> MomentEstimate:
    """Monte Carlo estimate of ``E|sum a_j xi_j|^{-p}`` by median of means.

    The samples are split into 16 blocks; block ``b`` draws from a Philox
    stream keyed by ``seed`` and jumped ``b`` times, so the output depends
    only on ``(a, p, samples, seed)``.  ``half_width`` is three standard
    errors of the plain mean.  For ``n = 2`` the estimator needs
    ``E|S|^{-2p} < inf`` with room to spare, so ``p > 0.45`` is refused.
    """
    a = _coerce(a)
    p = _check_p(p)
    samples = int(samples)
    if samples < 1000:
        raise DomainError("at least 1000 samples are required")
    if a.n == 1:
        est = exact_single_moment(a, p)
        est.meta.update(samples=samples)
        return est
    if a.n == 2 and p > 0.45:
        raise DomainError("two-term sums have heavy-tailed |S|^{-p} for p > 0.45; use quadrature")
    sizes = np.full(MC_BLOCKS, samples // MC_BLOCKS)
    sizes[: samples % MC_BLOCKS] += 1
    block_means = np.empty(MC_BLOCKS)
    s1 = s2 = s4 = 0.0
    for b, size in enumerate(sizes):
        rng = np.random.Generator(np.random.Philox(key=int(seed)).jumped(b))
        total = 0.0
        done = 0
        while done < size:
            k = int(min(_MC_CHUNK, size - done))
            theta = rng.uniform(0.0, 2.0 * np.pi, size=(k, a.n))
            re = np.cos(theta) @ a.a
            im = np.sin(theta) @ a.a
            x = np.hypot(re, im) ** (-p)
            total += float(np.sum(x))
            s1 += float(np.sum(x))
            s2 += float(np.sum(x * x))
            s4 += float(np.sum(x**4))
            done += k
        block_means[b] = total / size
    n_tot = float(samples)
    mean = s1 / n_tot
    var = max(s2 / n_tot - mean**2, 0.0) * n_tot / (n_tot - 1)
    se = np.sqrt(var / n_tot)
    m4 = s4 / n_tot
    kurt = m4 / (s2 / n_tot) ** 2 if s2 > 0 else 0.0
    meta = {"samples": samples, "blocks": MC_BLOCKS, "seed": int(seed), "mean": mean, "kurtosis_ratio": kurt}
    if kurt > _KURTOSIS_WARN:
        meta["variance_warning"] = True
        warnings.warn(
            f"heavy tails suspected in |S|^(-p) samples (E X^4/(E X^2)^2 = {kurt:.1f})",
            VarianceWarning,
            stacklevel=2,
        )
    return MomentEstimate(float(np.median(block_means)), float(3.0 * se), "monte_carlo", meta)


# ---------------------------------------------------------------------------
# Bessel quadrature
# ---------------------------------------------------------------------------

_GL8 = np.polynomial.legendre.leggauss(8)
_GL10 = np.polynomial.legendre.leggauss(10)
_GLAG = np.polynomial.laguerre.laggauss(40)
_HANKEL_ORDER = 8  # terms kept in each factor's asymptotic expansion
_TAIL_START = 30.0  # every a_j T exceeds this


def _hankel_a0(K):
    """Coefficients a_k(0) of the Hankel expansion, k < K."""
    out = [Fraction(1)]
    for k in range(1, K + 1):
        out.append(out[-1] * Fraction(-((2 * k - 1) ** 2), 8 * k))
    return [float(c) for c in out]


_A0 = _hankel_a0(_HANKEL_ORDER)


def _power_oscillatory(omega, gamma, T):
    """``int_T^inf t^gamma e^{i omega t} dt`` for ``gamma < -1``, complex result."""
    if abs(omega) < 1e-13:
        return complex(-(T ** (gamma + 1.0)) / (gamma + 1.0))
    sgn = 1.0 if omega > 0 else -1.0
    w = abs(omega)
    phase = np.exp(1j * omega * T)
    if w * T < 10.0:
        # Slow oscillation: integrate [T, T2] with T2 = 10/w on a log scale
        # (at most ~1.6 periods), then treat [T2, inf) by the rotated rule.
        T2 = 10.0 / w
        g = lambda u, part: part(np.exp((gamma + 1.0) * u + 1j * omega * np.exp(u)))  # noqa: E731
        opts = dict(limit=400, epsabs=1e-14 * T ** (gamma + 1.0), epsrel=1e-12)
        lo, hi = np.log(T), np.log(T2)
        re = integrate.quad(g, lo, hi, args=(np.real,), **opts)[0]
        im = integrate.quad(g, lo, hi, args=(np.imag,), **opts)[0]
        T, phase = T2, np.exp(1j * omega * T2)
        head = complex(re, im)
    else:
        head = 0.0
    # Rotate onto t = T + i sgn v, where e^{i omega t} = e^{i omega T} e^{-w v}.
    u, wts = _GLAG
    vals = (T + 1j * sgn * u / w) ** gamma
    integral = np.sum(wts * vals) / w
    return head + 1j * sgn * phase * integral


def _asymptotic_tail(b: np.ndarray, p: float, T: float) -> tuple[float, float]:
    """``int_T^inf prod_j J0(b_j t) t^{p-1} dt`` from products of Hankel expansions.

    ``J0(x) = sqrt(2/(pi x)) Re[e^{i(x - pi/4)} W(x)]`` with
    ``W(x) = sum_k i^k a_k(0) x^{-k}``; expanding the product gives terms
    ``c t^gamma e^{i omega t}`` integrated in closed form.  Returns the value
    and an estimate of the truncation error.
    """
    n = b.size
    K = _HANKEL_ORDER
    amp = np.prod(np.sqrt(2.0 / (np.pi * b)))
    ik = np.array([1j**k for k in range(K)])
    total = 0.0 + 0.0j
    for signs in itertools.product((1.0, -1.0), repeat=n - 1):
        sig = np.array((1.0,) + signs)
        omega = float(np.dot(sig, b))
        phase0 = np.exp(-1j * np.pi / 4 * np.sum(sig))
        poly = np.array([1.0 + 0j])
        for sj, bj in zip(sig, b):
            coeffs = np.array([_A0[k] * (ik[k] if sj > 0 else np.conj(ik[k])) / bj**k for k in range(K)])
            poly = np.convolve(poly, coeffs)[:K]
        acc = 0.0 + 0.0j
        for k, c in enumerate(poly):
            if c == 0:
                continue
            gamma = p - 1.0 - 0.5 * n - k
            acc += c * _power_oscillatory(omega, gamma, T)
        total += phase0 * acc
    # Pairs (sigma, -sigma) are complex conjugates: sum = 2 Re over sigma_1 = +1.
    value = float(2.0 * (total.real) * amp / 2.0**n)
    # Truncation: relative size of the first omitted order in any factor.
    trunc = amp * sum(abs(_A0[K]) / (bj * T) ** K for bj in b) * T ** (p - 0.5 * n) / (0.5 * n - p)
    return value, float(trunc) * 2.0


def _panel_integral(b, p, t0, T, width, rule):
    x, w = rule
    edges = np.arange(t0, T + 0.5 * width, width)
    if edges[-1] < T:
        edges = np.append(edges, T)
    edges[-1] = T
    total = 0.0
    chunk = 20000
    for start in range(0, edges.size - 1, chunk):
        a_ = edges[start : start + chunk]
        b_ = edges[start + 1 : start + chunk + 1]
        a_ = a_[: b_.size]
        half = 0.5 * (b_ - a_)
        mid = 0.5 * (b_ + a_)
        t = mid[:, None] + half[:, None] * x[None, :]
        f = np.prod(sc.j0(t[..., None] * b[None, None, :]), axis=-1) * t ** (p - 1.0)
        total += float(np.sum(half * (f @ w)))
    return total


def quad_negative_moment(a, p, tol: float = 1e-9, normalize: bool = True, max_T: float = 1e5) -> MomentEstimate:
    """``E|sum a_j xi_j|^{-p}`` from ``kappa_p int_0^inf prod J0(a_j t) t^{p-1} dt``.

    The vector is scaled to unit norm internally.  With ``normalize=True``
    the moment of the normalized vector is returned; with ``False`` the
    moment of ``a`` itself (``norm^{-p}`` times the former).

    Scheme (in the normalized variable): ``[0, 1]`` by QUADPACK's algebraic
    weight rule, ``[1, T]`` by 8- and 10-point Gauss-Legendre panels (width
    0.05 up to 60, 0.5 beyond) whose disagreement estimates the error, and
    ``[T, inf)`` with ``T = max(60, 30/min b_j)`` by the Hankel-product
    expansion.  ``half_width`` adds the three error estimates.
    """
    vec = _coerce(a)
    p = _check_p(p)
    if vec.n < 2:
        raise DomainError("quadrature needs at least two nonzero coefficients (the integral diverges for n = 1)")
    norm = vec.norm
    b = np.sort(vec.a / norm)[::-1]
    T = max(60.0, _TAIL_START / float(b[-1]))
    if T > max_T:
        raise ConvergenceError(
            f"smallest normalized coefficient {b[-1]:.3g} needs T = {T:.3g} > max_T = {max_T:.3g}"
        )
    f0 = lambda t: np.prod(sc.j0(t * b))  # noqa: E731
    head, head_err = integrate.quad(f0, 0.0, 1.0, weight="alg", wvar=(p - 1.0, 0.0), epsabs=1e-15, epsrel=1e-14, limit=200)
    mid_T = min(60.0, T)
    fine10 = _panel_integral(b, p, 1.0, mid_T, 0.05, _GL10)
    fine8 = _panel_integral(b, p, 1.0, mid_T, 0.05, _GL8)
    body, body_err = fine10, abs(fine10 - fine8)
    if T > mid_T:
        c10 = _panel_integral(b, p, mid_T, T, 0.5, _GL10)
        c8 = _panel_integral(b, p, mid_T, T, 0.5, _GL8)
        body += c10
        body_err += abs(c10 - c8)
    tail, tail_err = _asymptotic_tail(b, p, T)
    integral = head + body + tail
    kp = float(kappa_p(p))
    value = kp * integral
    rounding = 1e-15 * (abs(head) + abs(body) + abs(tail)) * (T / 0.05) ** 0.5
    half_width = kp * (head_err + body_err + tail_err + rounding)
    scale = 1.0 if normalize else norm ** (-p)
    if half_width > tol:
        raise ConvergenceError(f"estimated error {half_width:.2e} exceeds tol {tol:.2e}")
    meta = {"T": T, "head": head, "body": body, "tail": tail, "normalized": normalize, "norm": norm}
    return MomentEstimate(value * scale, half_width * scale, "bessel_quadrature", meta)


# ---------------------------------------------------------------------------
# two-term series
# ---------------------------------------------------------------------------


def _log_r(k, a):
    """log of binom(-a, k)^2 up to sign: 2 log(Gamma(k+a) / (Gamma(a) k!))."""
    return 2.0 * (sc.gammaln(k + a) - sc.gammaln(a) - sc.gammaln(k + 1.0))


def pair_series_bounds(p, x, tol: float = 1e-10, max_terms: int = 1 << 22) -> Enclosure:
    """Lower/upper bracket for ``E|xi_1 + sqrt(x) xi_2|^{-p} = sum_k binom(-p/2,k)^2 x^k``.

    The partial sum up to ``K`` bounds the series from below.  For the tail
    write ``r_k = |binom(-a, k)| = Gamma(k+a)/(Gamma(a) k!)`` with ``a = p/2``;
    ``Gamma(k+1)/Gamma(k+a) = (k + z(k))^{1-a}`` where ``z`` decreases to
    ``a/2`` (Elezovic-Giordano-Pecaric), so for ``k > K``

        (k + z(K))^{2a-2} <= Gamma(a)^2 r_k^2 <= (k + a/2)^{2a-2},

    and the tail sums become Hurwitz zeta values.  For ``x < 1`` the
    geometric bound ``r_{K+1}^2 x^{K+1}/(1-x)`` is used when smaller.
    """
    p = _check_p(p)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise RangeError("pair_series_moment requires 0 <= x <= 1 (use homogeneity for x > 1)")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if x == 0.0:
        return Enclosure(1.0, 1.0)
    a = 0.5 * p
    q = 2.0 - 2.0 * a
    lg_a2 = 2.0 * sc.gammaln(a)
    logx = np.log(x)
    K = 64
    while True:
        k = np.arange(K + 1, dtype=float)
        terms = np.exp(_log_r(k, a) + k * logx)
        partial = float(np.sum(terms))
        z_K = np.exp((sc.gammaln(K + 1.0) - sc.gammaln(K + a)) / (1.0 - a)) - K
        z_K = z_K + 4e-16 * K + 1e-15  # guard the cancellation in z_K
        up_zeta = sc.zeta(q, K + 1 + 0.5 * a) * np.exp(-lg_a2)
        upper_tail = x ** (K + 1) * up_zeta
        if x < 1.0:
            geo = np.exp(_log_r(K + 1.0, a) + (K + 1) * logx) / (1.0 - x)
            upper_tail = min(upper_tail, geo)
            lower_tail = x ** (2 * K) * (sc.zeta(q, K + 1 + z_K) - sc.zeta(q, 2 * K + 1 + z_K)) * np.exp(-lg_a2)
        else:
            lower_tail = sc.zeta(q, K + 1 + z_K) * np.exp(-lg_a2)
        lower_tail = max(float(lower_tail), 0.0)
        rnd = 1e-15 * partial + 1e-16 * K * partial
        lo = partial + lower_tail - rnd
        hi = partial + upper_tail + rnd
        if hi - lo <= tol or K >= max_terms:
            break
        K *= 2
    if hi - lo > tol and x > 0.5:
        near = _pair_series_near_one(a, 1.0 - x, tol)
        if near is not None:
            return near
    if hi - lo > tol:
        raise ConvergenceError(f"series bracket width {hi - lo:.2e} exceeds tol after {K} terms")
    return Enclosure(lo, hi)


def _hyp_positive_bounds(al, ga, y, tol):
    """Bracket ``2F1(al, al; ga; y)`` for ``0 <= y <= 1/2`` with ``al^2 <= ga``-type ratios.

    Terms are positive and successive ratios ``(al+k)^2 y / ((ga+k)(k+1))``
    stay below ``y`` for the two parameter sets used here, so the tail after
    term ``t_K`` is at most ``t_K y / (1 - y)``.
    """
    total, term, k = 1.0, 1.0, 0
    while True:
        term *= (al + k) ** 2 / ((ga + k) * (k + 1.0)) * y
        total += term
        k += 1
        tail = term * y / (1.0 - y)
        if tail <= 1e-3 * tol or term == 0.0:
            return total, tail + 4e-16 * k * total


def _pair_series_near_one(a, y, tol):
    """``2F1(a, a; 1; 1 - y)`` from the connection formula in ``y = 1 - x``::

        Gamma(1-2a)/Gamma(1-a)^2 2F1(a, a; 2a; y)
          + y^{1-2a} Gamma(2a-1)/Gamma(a)^2 2F1(1-a, 1-a; 2-2a; y)

    Returns ``None`` when cancellation between the two parts (a near 1/2)
    leaves the bracket wider than ``tol``.
    """
    f1, e1 = _hyp_positive_bounds(a, 2.0 * a, y, tol)
    f2, e2 = _hyp_positive_bounds(1.0 - a, 2.0 - 2.0 * a, y, tol)
    c1 = sc.gamma(1.0 - 2.0 * a) / sc.gamma(1.0 - a) ** 2
    c2 = y ** (1.0 - 2.0 * a) * sc.gamma(2.0 * a - 1.0) / sc.gamma(a) ** 2
    value = c1 * f1 + c2 * f2
    err = abs(c1) * e1 + abs(c2) * e2 + 1e-14 * (abs(c1 * f1) + abs(c2 * f2))
    if not np.isfinite(value) or 2.0 * err > tol:
        return None
    return Enclosure(value - err, value + err)


def pair_series_moment(p, x, tol: float = 1e-10) -> float:
    """``E|xi_1 + sqrt(x) xi_2|^{-p}`` for ``0 <= x <= 1``, accurate to ``tol``."""
    return float(pair_series_bounds(p, x, tol).mid)


# ---------------------------------------------------------------------------
# F_p(s) and Psi_p(s)
# ---------------------------------------------------------------------------

T_START = 64.0
T_MAX = 8192.0


def _check_ps(p, s):
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(~((p > 0) & (p < 1))):
        raise DomainError("F_p(s) requires 0 < p < 1")
    if not np.isfinite(s) or np.any(~(s > 2.0 * p)):
        raise DomainError("F_p(s) converges only for s > 2p")
    return p


def f_p_integral_grid(p, s: float, T: float = T_START) -> Enclosure:
    """Certified enclosures of ``F_p(s)`` for an array of ``p`` with a fixed cut ``T``."""
    p = _check_ps(p, float(s))
    if T < 12:
        raise ValueError("the panel cut T must be at least 12")
    return _panels.f_integral_grid(p, float(s), float(T))


def f_p_integral(p, s, tol: float = 1e-4, T_max: float = T_MAX) -> Enclosure:
    """Certified enclosure of ``F_p(s) = int_0^inf |J0(t)|^s t^{p-1} dt``, width at most ``tol``.

    Panels of width 1/128 cover ``[0, T]``; the cut ``T`` starts at 64 and is
    multiplied by 4 until the width target is met or ``T_max`` is exceeded.
    """
    p_arr = _check_ps(p, float(s))
    if p_arr.size != 1:
        raise ValueError("f_p_integral takes a scalar p; use f_p_integral_grid for arrays")
    T = T_START
    while True:
        enc = _panels.f_integral_grid(p_arr, float(s), T)[0]
        if enc.width <= tol:
            return enc
        if T * 4 > T_max:
            raise ConvergenceError(f"F_p(s) width {float(enc.width):.2e} > tol {tol:.1e} at T = {T:g}")
        T *= 4


def _s_power(s: float, p: np.ndarray) -> Enclosure:
    return _panels._pow_point(np.full(p.shape, float(s)), Enclosure(p) * 0.5)


def psi_func(p, s, tol: float = 1e-4, T_max: float = T_MAX) -> Enclosure:
    """Certified enclosure of ``Psi_p(s) = s^{p/2} F_p(s)``."""
    F = f_p_integral(p, s, tol / float(s) ** 0.5, T_max)
    return _s_power(float(s), np.atleast_1d(float(p)))[0] * F


def psi_func_grid(p, s: float, T: float = T_START) -> Enclosure:
    """Certified enclosures of ``Psi_p(s)`` for an array of ``p``."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    return _s_power(float(s), p) * f_p_integral_grid(p, s, T)


def random_unit_vectors(count: int, n_max: int = 6, seed: int = 20240601, n_min: int = 2) -> list:
    """``count`` reproducible unit coefficient vectors with ``n_min <= n <= n_max`` terms.

    Lengths are uniform on ``[n_min, n_max]``; moduli are uniform on
    ``[0.05, 1]`` before normalization, which keeps every normalized entry
    away from zero so quadrature cut-offs stay moderate.
    """
    if count < 0 or n_min < 1 or n_max < n_min:
        raise DomainError("need count >= 0 and 1 <= n_min <= n_max")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(int(count)):
        n = int(rng.integers(n_min, n_max + 1))
        a = rng.uniform(0.05, 1.0, n)
        out.append(CoefficientVector(a / np.sqrt(np.sum(a**2))))
    return out


def pair_moment(a, p, tol: float = 1e-10) -> MomentEstimate:
    """``E|a_1 xi_1 + a_2 xi_2|^{-p}`` from the binomial series, by homogeneity.

    With ``a_1 >= a_2`` the moment is ``a_1^{-p} E|xi_1 + sqrt(x) xi_2|^{-p}``
    for ``x = (a_2/a_1)^2``; ``half_width`` covers the certified bracket.
    """
    vec = _coerce(a)
    p = _check_p(p)
    if vec.n != 2:
        raise DomainError("the pair series applies to two-term sums only")
    hi_a, lo_a = float(np.max(vec.a)), float(np.min(vec.a))
    x = (lo_a / hi_a) ** 2
    enc = pair_series_bounds(p, x, tol)
    scale = hi_a ** (-p)
    value = float(enc.mid) * scale
    half = 0.5 * float(enc.hi - enc.lo) * scale + 4e-16 * value
    return MomentEstimate(value, half, "pair_series", {"x": x, "scale": scale})
