"""Closed-form sharp constants for Steinhaus sums.

For ``0 < p < 1`` the negative moment of the extremal two-term sum is

    C_p = E|(xi_1 + xi_2)/sqrt 2|^{-p} = 2^{p/2} Gamma(1-p) / Gamma(1-p/2)^2,

and the Bessel-integral representation ``C_p = kappa_p Psi_p(2)`` splits it into

    kappa_p  = 2^{1-p} Gamma(1-p/2) / Gamma(p/2),
    Psi_p(2) = 2^{3p/2-1} Gamma(1-p) Gamma(p/2) Gamma(1-p/2)^{-3}.

Every scalar function accepts floats or arrays.  ``*_enclosure`` variants
return certified :class:`~steinhaus.interval.Enclosure` objects built from
the Gamma enclosures of :mod:`steinhaus.specfun`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, DomainError
from .interval import LOG2, Enclosure, as_enclosure, exp
from .specfun import digamma, gamma_enclosure, log_gamma_enclosure

__all__ = [
    "c_p",
    "kappa_p",
    "psi_2",
    "d_func",
    "log_d_derivative",
    "phi_small",
    "phi_cap",
    "PhiPair",
    "gaussian_norm",
    "pair_norm",
    "KhinchinConstants",
    "khinchin_constants",
    "find_pstar",
    "c_p_enclosure",
    "kappa_p_enclosure",
    "psi_2_enclosure",
    "d_func_enclosure",
    "ZETA3",
]

ZETA3 = 1.2020569031595942
_SMALL_Q = 1e-4


def _as_array(p):
    return np.asarray(p, dtype=float)


def _ret(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def _check_open_unit(p, name, *, include_zero=False, include_one=False):
    p = _as_array(p)
    lo_ok = p >= 0 if include_zero else p > 0
    hi_ok = p <= 1 if include_one else p < 1
    if np.any(~(lo_ok & hi_ok)):
        lo = "[0" if include_zero else "(0"
        hi = "1]" if include_one else "1)"
        raise DomainError(f"{name} requires p in {lo}, {hi}")
    return p


# ---------------------------------------------------------------------------
# C_p, kappa_p, Psi_p(2), D(p)
# ---------------------------------------------------------------------------


def c_p(p):
    """Sharp constant ``C_p = 2^{p/2} Gamma(1-p) / Gamma(1-p/2)^2`` for ``0 < p < 1``."""
    p = _check_open_unit(p, "c_p")
    log_c = 0.5 * p * np.log(2.0) + sc.gammaln(1 - p) - 2 * sc.gammaln(1 - p / 2)
    return _ret(np.exp(log_c))


def kappa_p(p):
    """``kappa_p = 2^{1-p} Gamma(1-p/2) / Gamma(p/2)`` for ``0 < p <= 1``."""
    p = _check_open_unit(p, "kappa_p", include_one=True)
    log_k = (1 - p) * np.log(2.0) + sc.gammaln(1 - p / 2) - sc.gammaln(p / 2)
    return _ret(np.exp(log_k))


def psi_2(p):
    """``Psi_p(2) = 2^{3p/2-1} Gamma(1-p) Gamma(p/2) Gamma(1-p/2)^{-3}`` for ``0 < p < 1``."""
    p = _check_open_unit(p, "psi_2")
    log_psi = (
        (1.5 * p - 1) * np.log(2.0)
        + sc.gammaln(1 - p)
        + sc.gammaln(p / 2)
        - 3 * sc.gammaln(1 - p / 2)
    )
    return _ret(np.exp(log_psi))


def d_func(p):
    """``D(p) = 2^{p/2} Gamma(1-p) / Gamma(1-p/2)^3`` on ``[0, 1)``; ``D(0) = 1``."""
    p = _check_open_unit(p, "d_func", include_zero=True)
    log_d = 0.5 * p * np.log(2.0) + sc.gammaln(1 - p) - 3 * sc.gammaln(1 - p / 2)
    return _ret(np.exp(log_d))


def log_d_derivative(p):
    """``(log D)'(p) = log(2)/2 - psi(1-p) + (3/2) psi(1-p/2)``; equals ``(log 2 - gamma)/2`` at 0."""
    p = _check_open_unit(p, "log_d_derivative", include_zero=True)
    return _ret(0.5 * np.log(2.0) - digamma(1 - p) + 1.5 * digamma(1 - p / 2))


def _pow2(e) -> Enclosure:
    return exp(LOG2 * e)


def c_p_enclosure(p) -> Enclosure:
    """Certified enclosure of ``C_p`` at float(s) ``p``."""
    p = _check_open_unit(p, "c_p")
    lg = log_gamma_enclosure(1 - p) - log_gamma_enclosure(1 - p / 2) * 2.0
    return exp(LOG2 * (0.5 * p) + lg)


def kappa_p_enclosure(p) -> Enclosure:
    """Certified enclosure of ``kappa_p`` at float(s) ``p``."""
    p = _check_open_unit(p, "kappa_p", include_one=True)
    lg = log_gamma_enclosure(1 - p / 2) - log_gamma_enclosure(p / 2)
    return exp(LOG2 * (1 - p) + lg)


def psi_2_enclosure(p) -> Enclosure:
    """Certified enclosure of ``Psi_p(2)`` at float(s) ``p``."""
    p = _check_open_unit(p, "psi_2")
    lg = (
        log_gamma_enclosure(1 - p)
        + log_gamma_enclosure(p / 2)
        - log_gamma_enclosure(1 - p / 2) * 3.0
    )
    return exp(LOG2 * (1.5 * p - 1) + lg)


def d_func_enclosure(p) -> Enclosure:
    """Certified enclosure of ``D(p)`` at float(s) ``p`` in ``[0, 1)``."""
    p = _check_open_unit(p, "d_func", include_zero=True)
    lg = log_gamma_enclosure(1 - p) - log_gamma_enclosure(1 - p / 2) * 3.0
    out = exp(LOG2 * (0.5 * p) + lg)
    # D(0) = 1 exactly; log-gamma at 1 is 0 and the widening is absolute.
    return out


# ---------------------------------------------------------------------------
# comparison functions
# ---------------------------------------------------------------------------


def _check_x(x):
    x = _as_array(x)
    if np.any(~(x >= 0)):
        raise DomainError("comparison functions require x >= 0")
    return x


def phi_small(p, x):
    """``phi_p(x) = (1 + x)^{-p/2}``."""
    x = _check_x(x)
    return _ret((1.0 + x) ** (-0.5 * np.asarray(p, dtype=float)))


def phi_cap(p, x):
    """Concave minorant ``Phi_p``: ``phi_p(x)`` for ``x >= 1``, ``2 phi_p(1) - phi_p(2 - x)`` below."""
    x = _check_x(x)
    p = np.asarray(p, dtype=float)
    left = 2.0 * 2.0 ** (-0.5 * p) - (3.0 - np.minimum(x, 1.0)) ** (-0.5 * p)
    right = (1.0 + x) ** (-0.5 * p)
    return _ret(np.where(x >= 1.0, right, left))


@dataclass(frozen=True)
class PhiPair:
    """The comparison function ``phi_p`` together with its minorant ``Phi_p``."""

    p: float

    def __post_init__(self):
        _check_open_unit(self.p, "PhiPair")

    def phi(self, x):
        return phi_small(self.p, x)

    def Phi(self, x):
        return phi_cap(self.p, x)

    def slope_at_one(self) -> float:
        """Common derivative of both functions at ``x = 1``: ``-(p/2) 2^{-p/2-1}``."""
        return -0.5 * self.p * 2.0 ** (-0.5 * self.p - 1.0)


# ---------------------------------------------------------------------------
# L_p norms and the sharp Khinchin constants
# ---------------------------------------------------------------------------


def gaussian_norm(p):
    """``||Z||_p = Gamma(p/2 + 1)^{1/p}`` for ``p > -2``; ``exp(-gamma/2)`` at ``p = 0``."""
    q = _as_array(p)
    if np.any(~(q > -2)):
        raise DomainError("gaussian_norm requires p > -2")
    small = np.abs(q) < _SMALL_Q
    qs = np.where(small, 1.0, q)
    log_norm = np.where(
        small,
        -0.5 * np.euler_gamma + (np.pi**2 / 48) * q - (ZETA3 / 24) * q**2,
        sc.gammaln(0.5 * qs + 1.0) / qs,
    )
    return _ret(np.exp(log_norm))


def pair_norm(p):
    """``||(xi_1+xi_2)/sqrt 2||_p = (2^{-p/2} Gamma(1+p) / Gamma(1+p/2)^2)^{1/p}`` for ``p > -1``.

    Equals ``2^{-1/2}`` at ``p = 0``.
    """
    q = _as_array(p)
    if np.any(~(q > -1)):
        raise DomainError("pair_norm requires p > -1")
    small = np.abs(q) < _SMALL_Q
    qs = np.where(small, 1.0, q)
    exact = -0.5 * np.log(2.0) + (sc.gammaln(1.0 + qs) - 2.0 * sc.gammaln(1.0 + 0.5 * qs)) / qs
    series = -0.5 * np.log(2.0) + (np.pi**2 / 24) * q - (ZETA3 / 4) * q**2
    return _ret(np.exp(np.where(small, series, exact)))


@dataclass(frozen=True)
class KhinchinConstants:
    """Sharp constants ``A_p <= 1 <= B_p`` with provenance flags."""

    p: float
    A_p: float
    B_p: float
    A_regime: str
    B_regime: str
    B_provenance: str  # "paper" or "extrapolated"


_PSTAR_CACHE: dict[float, float] = {}


def khinchin_constants(p: float, pstar: float | None = None) -> KhinchinConstants:
    """Sharp constants in ``A_p ||S||_2 <= ||S||_p <= B_p ||S||_2`` for Steinhaus sums, ``p > -1``."""
    p = float(p)
    if not p > -1:
        raise DomainError("khinchin_constants requires p > -1")
    if pstar is None:
        pstar = find_pstar(1e-13)
    if p >= 2:
        A, a_reg = 1.0, "one"
    elif p >= pstar:
        A, a_reg = float(gaussian_norm(p)), "gaussian"
    else:
        A, a_reg = float(pair_norm(p)), "pair"
    if p <= 2:
        B, b_reg = 1.0, "one"
    else:
        B, b_reg = float(gaussian_norm(p)), "gaussian"
    prov = "extrapolated" if p < 0 else "paper"
    return KhinchinConstants(p, A, B, a_reg, b_reg, prov)


def find_pstar(tol: float = 1e-12) -> float:
    """Root in (0, 2) of ``pair_norm(p) = gaussian_norm(p)`` by bisection.

    The difference also vanishes at ``p = 2``; the bracket [0.01, 1.99]
    isolates the interior root.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if tol in _PSTAR_CACHE:
        return _PSTAR_CACHE[tol]

    def g(q):
        return float(np.log(pair_norm(q)) - np.log(gaussian_norm(q)))

    lo, hi = 0.01, 1.99
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo < 0 < g_hi):
        raise ConvergenceError("p* bracket does not change sign; check the norm formulas")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = g(mid)
        if g_mid < 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    _PSTAR_CACHE[tol] = root
    return root
