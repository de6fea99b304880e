"""Plate geometry and overflow-safe hyperbolic ratios.

The hinged span is fixed to ``pi``; the plate occupies
``(0, pi) x (-ell, ell)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

REFERENCE_SIGMA = 0.2
REFERENCE_ELL = math.pi / 150

_KINDS = ("sinh", "cosh", "exp")


@dataclass(frozen=True)
class PlateGeometry:
    """Half-width ``half_width`` and Poisson ratio ``poisson`` of the plate."""

    half_width: float
    poisson: float

    def __post_init__(self):
        ell = float(self.half_width)
        sigma = float(self.poisson)
        if not math.isfinite(ell) or ell <= 0.0:
            raise GeometryError(f"half-width must be positive, got {self.half_width!r}")
        if not math.isfinite(sigma) or not 0.0 < sigma < 1.0:
            raise GeometryError(f"Poisson ratio must lie in (0, 1), got {self.poisson!r}")
        object.__setattr__(self, "half_width", ell)
        object.__setattr__(self, "poisson", sigma)

    @property
    def ell(self) -> float:
        return self.half_width

    @property
    def sigma(self) -> float:
        return self.poisson

    @property
    def narrow(self) -> bool:
        """False once the width 2*ell reaches the span pi (advisory only)."""
        return 2.0 * self.half_width < math.pi

    @classmethod
    def reference(cls) -> "PlateGeometry":
        return cls(REFERENCE_ELL, REFERENCE_SIGMA)


@dataclass(frozen=True)
class ScaledHyperbolic:
    """A value stored as ``mantissa * exp(log_scale)``.

    ``|mantissa|`` is kept in ``[1/2, 2)`` for nonzero values, so huge or tiny
    hyperbolic values can be carried around and divided without overflow.
    """

    log_scale: float
    mantissa: float

    @classmethod
    def of(cls, kind: str, x: float) -> "ScaledHyperbolic":
        log_scale, mant = _split(kind, float(x))
        if mant == 0.0:
            return cls(0.0, 0.0)
        frac, e2 = math.frexp(mant)
        return cls(log_scale + e2 * math.log(2.0), frac)

    @property
    def value(self) -> float:
        return self.mantissa * math.exp(self.log_scale)

    def __truediv__(self, other: "ScaledHyperbolic") -> float:
        if other.mantissa == 0.0:
            raise ZeroDivisionError("ScaledHyperbolic division by zero")
        return (self.mantissa / other.mantissa) * math.exp(self.log_scale - other.log_scale)


def _split(kind, x):
    # value = mant * exp(log_scale), log_scale = |x| (or x for exp)
    if kind == "exp":
        return x, 1.0
    ax = abs(x)
    if kind == "cosh":
        return ax, 0.5 * (1.0 + math.exp(-2.0 * ax))
    if kind == "sinh":
        return ax, math.copysign(-0.5 * math.expm1(-2.0 * ax), x)
    raise ValueError(f"unknown kind {kind!r}; expected one of {_KINDS}")


def _split_array(kind, x):
    if kind == "exp":
        return x, np.ones_like(x)
    ax = np.abs(x)
    if kind == "cosh":
        return ax, 0.5 * (1.0 + np.exp(-2.0 * ax))
    if kind == "sinh":
        return ax, np.copysign(-0.5 * np.expm1(-2.0 * ax), x)
    raise ValueError(f"unknown kind {kind!r}; expected one of {_KINDS}")


def _as_real(x):
    x = np.asarray(x)
    return x if x.dtype.kind == "f" else x.astype(float)


def stable_ratio(kind_num, arg_num, kind_den, arg_den):
    """Return ``kind_num(arg_num) / kind_den(arg_den)`` without overflow.

    Both arguments may be numpy arrays (broadcast together). Exponents are
    subtracted before exponentiation, so ``cosh(1e5)/cosh(1e5)`` is exactly 1.
    A ratio beyond the double range comes back as ``+-inf``.

    Raises
    ------
    ZeroDivisionError
        If the denominator is exactly zero (``sinh(0)``).
    """
    if np.ndim(arg_num) == 0 and np.ndim(arg_den) == 0:
        ln, mn = _split(kind_num, float(arg_num))
        ld, md = _split(kind_den, float(arg_den))
        if md == 0.0:
            raise ZeroDivisionError(f"{kind_den}({arg_den}) is zero")
        if mn == 0.0:
            return 0.0
        r, d = mn / md, ln - ld
        if abs(d) < 700.0:
            return r * math.exp(d)
        # two half-steps keep results near the double limits representable
        try:
            return (r * math.exp(0.5 * d)) * math.exp(d - 0.5 * d)
        except OverflowError:
            return math.copysign(math.inf, r)
    # floating dtypes are kept so extended-precision grids stay extended
    xn = _as_real(arg_num)
    xd = _as_real(arg_den)
    ln, mn = _split_array(kind_num, xn)
    ld, md = _split_array(kind_den, xd)
    if np.any(md == 0.0):
        raise ZeroDivisionError(f"{kind_den} denominator is zero")
    d = ln - ld
    h = 0.5 * d
    with np.errstate(under="ignore", over="ignore"):
        return ((mn / md) * np.exp(h)) * np.exp(d - h)


def alpha_coth(alpha: float, ell: float) -> float:
    """``alpha * coth(alpha * ell)``, continuous at ``alpha = 0`` (value ``1/ell``)."""
    x = alpha * ell
    if x == 0.0:
        return 1.0 / ell
    return alpha * stable_ratio("cosh", x, "sinh", x)
