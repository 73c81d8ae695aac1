"""Closed real intervals with outward rounding.

An :class:`Enclosure` carries two float64 endpoints (scalars or equally
shaped arrays).  Every arithmetic result is widened by one ulp on each side
(two ulps for library transcendental functions), which keeps results sound
without switching the FPU rounding mode.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import DomainError

__all__ = [
    "Enclosure",
    "as_enclosure",
    "enclose_arith",
    "exp",
    "expm1",
    "log",
    "log1p",
    "sqrt",
    "cos",
    "sin",
    "PI",
    "HALF_PI",
    "EULER_GAMMA",
    "LOG2",
]

_NEG_INF = -np.inf
_POS_INF = np.inf
# libm/numpy exp, log, pow, cos are accurate to < 1 ulp; two ulps of slack.
TRANSCENDENTAL_ULPS = 2
_UNIT_ROUNDOFF = 2.0**-53


def _down(x, k=1):
    for _ in range(k):
        x = np.nextafter(x, _NEG_INF)
    return x


def _up(x, k=1):
    for _ in range(k):
        x = np.nextafter(x, _POS_INF)
    return x


def _scalarize(x):
    x = np.asarray(x, dtype=np.float64)
    return x[()] if x.ndim == 0 else x


class Enclosure:
    """Closed interval ``[lo, hi]`` guaranteed to contain a real quantity.

    ``lo`` and ``hi`` may be numpy arrays, in which case the object is an
    array of intervals and all operations broadcast elementwise.
    """

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo = np.asarray(lo, dtype=np.float64)
        hi = lo if hi is None else np.asarray(hi, dtype=np.float64)
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ValueError("enclosure endpoints must not be NaN")
        if np.any(lo > hi):
            raise ValueError("enclosure requires lo <= hi")
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
            lo, hi = lo.copy(), hi.copy()
        self.lo = _scalarize(lo)
        self.hi = _scalarize(hi)

    @classmethod
    def _raw(cls, lo, hi):
        obj = object.__new__(cls)
        obj.lo = _scalarize(lo)
        obj.hi = _scalarize(hi)
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def exact(cls, value) -> "Enclosure":
        """Tightest enclosure of an exact number given as int, str or Fraction.

        Floats are taken at face value (the binary number they represent).
        """
        if isinstance(value, Enclosure):
            return value
        if isinstance(value, (float, np.floating)):
            return cls._raw(float(value), float(value))
        frac = Fraction(value)
        approx = float(frac)
        if Fraction(approx) == frac:
            return cls._raw(approx, approx)
        lo = approx if Fraction(approx) < frac else float(_down(approx))
        hi = approx if Fraction(approx) > frac else float(_up(approx))
        return cls._raw(lo, hi)

    @classmethod
    def hull_of(cls, values) -> "Enclosure":
        """Smallest enclosure containing every float in ``values``."""
        v = np.asarray(values, dtype=np.float64)
        return cls._raw(v.min(), v.max())

    # -- inspection --------------------------------------------------------
    @property
    def shape(self):
        return np.shape(self.lo)

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, idx):
        return Enclosure._raw(np.asarray(self.lo)[idx], np.asarray(self.hi)[idx])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self):
        return _up(self.hi - self.lo)

    @property
    def rad(self):
        return _up(0.5 * (self.hi - self.lo))

    @property
    def mag(self):
        """Largest absolute value in the interval."""
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    @property
    def mig(self):
        """Smallest absolute value in the interval."""
        return np.where(
            (self.lo <= 0) & (self.hi >= 0), 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi))
        )

    def contains(self, x):
        if isinstance(x, Enclosure):
            return (self.lo <= x.lo) & (x.hi <= self.hi)
        return (self.lo <= x) & (x <= self.hi)

    def contains_zero(self):
        return (self.lo <= 0.0) & (self.hi >= 0.0)

    def hull(self, other) -> "Enclosure":
        other = as_enclosure(other)
        return Enclosure._raw(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def intersect(self, other) -> "Enclosure":
        other = as_enclosure(other)
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if np.any(lo > hi):
            raise ValueError("empty intersection: the two enclosures are inconsistent")
        return Enclosure._raw(lo, hi)

    def __repr__(self):
        if np.ndim(self.lo) == 0:
            return f"Enclosure({float(self.lo)!r}, {float(self.hi)!r})"
        return f"Enclosure(lo={self.lo!r}, hi={self.hi!r})"

    def __float__(self):
        return float(self.mid)

    # -- arithmetic ----------------------------------------------------------
    def __neg__(self):
        return Enclosure._raw(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = as_enclosure(other)
        return Enclosure._raw(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = as_enclosure(other)
        return Enclosure._raw(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        return as_enclosure(other) - self

    def __mul__(self, other):
        other = as_enclosure(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        p1, p2, p3, p4 = a * c, a * d, b * c, b * d
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        return Enclosure._raw(_down(lo), _up(hi))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_enclosure(other)
        if np.any(other.contains_zero()):
            raise DomainError("division by an enclosure containing zero")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        q1, q2, q3, q4 = a / c, a / d, b / c, b / d
        lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
        hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
        return Enclosure._raw(_down(lo), _up(hi))

    def __rtruediv__(self, other):
        return as_enclosure(other) / self

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)):
            return self._pow_int(int(exponent))
        return self.pow_real(exponent)

    def _pow_int(self, n: int):
        if n == 0:
            return Enclosure._raw(np.ones_like(self.lo), np.ones_like(self.hi))
        if n < 0:
            return 1.0 / self._pow_int(-n)
        if n == 1:
            return self
        k = TRANSCENDENTAL_ULPS
        lo_n = np.power(self.lo, n)
        hi_n = np.power(self.hi, n)
        if n % 2:
            return Enclosure._raw(_down(lo_n, k), _up(hi_n, k))
        lo = np.where(self.contains_zero(), 0.0, _down(np.minimum(lo_n, hi_n), k))
        hi = _up(np.maximum(lo_n, hi_n), k)
        return Enclosure._raw(np.maximum(lo, 0.0), hi)

    def square(self):
        return self._pow_int(2)

    def pow_real(self, exponent):
        """``self ** exponent`` for a positive base and real exponent."""
        if isinstance(exponent, Enclosure):
            if np.all(exponent.lo == exponent.hi) and np.ndim(exponent.lo) == 0:
                exponent = float(exponent.lo)
            else:
                return exp(exponent * log(self))
        s = float(exponent)
        if s == int(s) and abs(s) < 2**31:
            return self._pow_int(int(s))
        if np.any(self.lo < 0):
            raise DomainError("non-integer power of an enclosure reaching below zero")
        k = TRANSCENDENTAL_ULPS
        a = np.power(self.lo, s)
        b = np.power(self.hi, s)
        if s > 0:
            return Enclosure._raw(np.maximum(_down(a, k), 0.0), _up(b, k))
        if np.any(self.lo == 0):
            raise DomainError("negative power of an enclosure touching zero")
        return Enclosure._raw(np.maximum(_down(b, k), 0.0), _up(a, k))

    def __abs__(self):
        lo = np.where(self.contains_zero(), 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))
        return Enclosure._raw(lo, self.mag)

    # -- reductions ----------------------------------------------------------
    def sum(self, axis=None):
        """Sum of an array of enclosures with a floating-point summation error bound."""
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        n = lo.size if axis is None else lo.shape[axis]
        gamma = 1.01 * n * _UNIT_ROUNDOFF
        s_lo = np.sum(lo, axis=axis)
        s_hi = np.sum(hi, axis=axis)
        e_lo = gamma * np.sum(np.abs(lo), axis=axis)
        e_hi = gamma * np.sum(np.abs(hi), axis=axis)
        return Enclosure._raw(_down(s_lo - e_lo, 2), _up(s_hi + e_hi, 2))

    def max(self):
        return Enclosure._raw(np.max(self.lo), np.max(self.hi))

    def min(self):
        return Enclosure._raw(np.min(self.lo), np.min(self.hi))


def as_enclosure(x) -> Enclosure:
    """Coerce floats/arrays to point enclosures; pass enclosures through."""
    if isinstance(x, Enclosure):
        return x
    if isinstance(x, (Fraction, str)):
        return Enclosure.exact(x)
    if isinstance(x, (Real, np.ndarray, list, tuple)) or np.isscalar(x):
        arr = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(arr)):
            raise ValueError("cannot enclose NaN")
        return Enclosure._raw(arr, arr)
    raise TypeError(f"cannot convert {type(x).__name__} to Enclosure")


def _monotone(fn, x, k=TRANSCENDENTAL_ULPS):
    x = as_enclosure(x)
    return Enclosure._raw(_down(fn(x.lo), k), _up(fn(x.hi), k))


def exp(x) -> Enclosure:
    out = _monotone(np.exp, x)
    return Enclosure._raw(np.maximum(out.lo, 0.0), out.hi)


def expm1(x) -> Enclosure:
    out = _monotone(np.expm1, x)
    return Enclosure._raw(np.maximum(out.lo, -1.0), out.hi)


def log(x) -> Enclosure:
    x = as_enclosure(x)
    if np.any(x.lo <= 0):
        raise DomainError("log requires a strictly positive enclosure")
    return _monotone(np.log, x)


def log1p(x) -> Enclosure:
    x = as_enclosure(x)
    if np.any(x.lo <= -1):
        raise DomainError("log1p requires an enclosure above -1")
    return _monotone(np.log1p, x)


def sqrt(x) -> Enclosure:
    x = as_enclosure(x)
    if np.any(x.lo < 0):
        raise DomainError("sqrt requires a non-negative enclosure")
    out = _monotone(np.sqrt, x, k=1)
    return Enclosure._raw(np.maximum(out.lo, 0.0), out.hi)


def _trig_extrema(x: Enclosure, phase: float):
    """Flags telling whether x contains a max (+1) or min (-1) of cos(t - phase)."""
    # Conservative: any multiple of pi within one ulp-scaled slack counts.
    slack = 4e-16 * np.maximum(1.0, np.abs(x.hi)) + 1e-300
    k_lo = np.ceil((x.lo - phase - slack) / np.pi)
    k_hi = np.floor((x.hi - phase + slack) / np.pi)
    has = k_hi >= k_lo
    has_even = has & ((k_hi - k_lo >= 1) | (np.mod(k_lo, 2) == 0))
    has_odd = has & ((k_hi - k_lo >= 1) | (np.mod(k_lo, 2) == 1))
    return has_even, has_odd


def cos(x) -> Enclosure:
    x = as_enclosure(x)
    k = TRANSCENDENTAL_ULPS
    ca, cb = np.cos(x.lo), np.cos(x.hi)
    lo = _down(np.minimum(ca, cb), k) - 1e-300
    hi = _up(np.maximum(ca, cb), k) + 1e-300
    has_max, has_min = _trig_extrema(x, 0.0)
    wide = (x.hi - x.lo) >= 2 * np.pi
    hi = np.where(has_max | wide, 1.0, np.minimum(hi, 1.0))
    lo = np.where(has_min | wide, -1.0, np.maximum(lo, -1.0))
    return Enclosure._raw(lo, hi)


def sin(x) -> Enclosure:
    x = as_enclosure(x)
    k = TRANSCENDENTAL_ULPS
    sa, sb = np.sin(x.lo), np.sin(x.hi)
    lo = _down(np.minimum(sa, sb), k) - 1e-300
    hi = _up(np.maximum(sa, sb), k) + 1e-300
    has_max, has_min = _trig_extrema(x, 0.5 * np.pi)
    wide = (x.hi - x.lo) >= 2 * np.pi
    hi = np.where(has_max | wide, 1.0, np.minimum(hi, 1.0))
    lo = np.where(has_min | wide, -1.0, np.maximum(lo, -1.0))
    return Enclosure._raw(lo, hi)


PI = Enclosure._raw(_down(np.pi), _up(np.pi))
HALF_PI = Enclosure._raw(_down(np.pi / 2), _up(np.pi / 2))
EULER_GAMMA = Enclosure._raw(_down(0.5772156649015329), _up(0.5772156649015329))
LOG2 = Enclosure._raw(_down(np.log(2.0)), _up(np.log(2.0)))


_OPS = {
    "add": (2, lambda a, b: a + b),
    "sub": (2, lambda a, b: a - b),
    "mul": (2, lambda a, b: a * b),
    "div": (2, lambda a, b: a / b),
    "pow_real": (2, lambda a, b: as_enclosure(a).pow_real(b)),
    "exp": (1, exp),
    "log": (1, log),
    "sqrt": (1, sqrt),
}


def enclose_arith(op: str, args) -> Enclosure:
    """Apply a named operation to enclosures, e.g. ``enclose_arith("mul", [x, y])``."""
    try:
        arity, fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}; expected one of {sorted(_OPS)}") from None
    if len(args) != arity:
        raise ValueError(f"{op} takes {arity} argument(s), got {len(args)}")
    encl = [as_enclosure(a) for a in args]
    if op == "pow_real":
        base, expo = encl
        if np.all(expo.lo == expo.hi):
            s = expo.lo
            if np.ndim(s) == 0 and float(s) == int(float(s)):
                return base._pow_int(int(float(s)))
        if np.any(base.lo <= 0):
            raise DomainError("pow_real requires a strictly positive base for real exponents")
        return base.pow_real(expo)
    return fn(*encl)
