"""Separation-of-variables solution for loads ``K_alpha * exp(alpha*y) * g(x)``.

Each sine mode ``m`` contributes

    sin(m x) * [P exp(alpha (y - ell)) + a cosh(m y)/cosh(m ell)
                + b sinh(m y)/sinh(m ell) + c y cosh(m y)/cosh(m ell)
                + d y sinh(m y)/sinh(m ell)] / l1_g

where the stored numbers ``P, a, b, c, d`` are the textbook coefficients
``gamma_m/(m^2-alpha^2)^2, A, B, C, D`` multiplied by
``kappa = alpha / (2 sinh(alpha ell))`` and by the edge value of their
hyperbolic factor. Every stored number stays O(1) even when
``exp(alpha*ell)`` overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .core import PlateGeometry, alpha_coth, stable_ratio
from .errors import AdmissibilityError, PlateError, SingularSystemError
from .quadrature import adaptive_simpson

ALPHA_GUARD = 1e-6
GUARD_MODES = 64
MAX_MODES = 1024
GAMMA_CUTOFF = 1e-14
TRUNCATION_RTOL = 1e-14
GAP_SAMPLES = 4096
GAP_BISECTIONS = 60


def check_alpha(alpha: float, max_mode: int = GUARD_MODES) -> float:
    """Validate the load exponent against the ``(m^2 - alpha^2)^-2`` singularity.

    ``alpha`` must be finite, nonnegative and farther than ``ALPHA_GUARD`` from
    every integer ``1..max_mode``.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 0.0:
        raise AdmissibilityError(f"alpha must be finite and >= 0, got {alpha!r}")
    n = round(alpha)
    if 1 <= n <= max_mode and abs(alpha - n) <= ALPHA_GUARD:
        raise AdmissibilityError(
            f"alpha must not be an integer: alpha={alpha!r} is within {ALPHA_GUARD:g} of {n}")
    return alpha


def _kappa_exp(alpha, ell):
    # alpha * exp(alpha ell) / sinh(alpha ell) = alpha coth(alpha ell) + alpha
    return alpha_coth(alpha, ell) + alpha


@dataclass(frozen=True)
class LoadSpec:
    """An L1-normalized load ``k_alpha * exp(alpha y) * sum gamma_m sin(m x)``.

    ``k_alpha`` may underflow to 0.0 for very large ``alpha * ell``; the
    solver never uses it directly.
    """

    alpha: float
    gammas: tuple
    l1_g: float
    k_alpha: float
    half_width: float
    guard_modes: int = GUARD_MODES

    @property
    def modes(self) -> np.ndarray:
        return np.array([m for m, _ in self.gammas], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([g for _, g in self.gammas], dtype=float)

    def g(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for m, gm in self.gammas:
            out = out + gm * _sin_mx(m, x)
        return out

    def profile(self, y):
        """``k_alpha * exp(alpha y)``, evaluated without forming either factor."""
        a, ell = self.alpha, self.half_width
        y = np.asarray(y, dtype=float)
        if a == 0.0:
            return np.full_like(y, 1.0 / (2.0 * ell * self.l1_g))
        return 0.5 * a / self.l1_g * stable_ratio("exp", a * y, "sinh", a * ell)

    def __call__(self, x, y):
        return self.profile(y) * self.g(x)


def _sin_mx(m, x):
    # exact zeros on the hinged edges
    x = np.asarray(x)
    s = np.sin(m * (x if x.dtype.kind == "f" else x.astype(float)))
    return np.where((x == 0.0) | (x == math.pi), 0.0, s)


def fourier_coefficients(g: Callable, m_max: int, abs_tol: float = 1e-12) -> np.ndarray:
    """Sine coefficients ``gamma_m = (2/pi) * int_0^pi g(x) sin(m x) dx``, m=1..m_max.

    Entries below ``GAMMA_CUTOFF`` in magnitude are set to zero and trailing
    zeros are dropped, so the result may be shorter than ``m_max``.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    gam = np.zeros(m_max)
    scale = 2.0 / math.pi
    for m in range(1, m_max + 1):
        res = adaptive_simpson(lambda x, m=m: g(x) * np.sin(m * x), 0.0, math.pi,
                               rel_tol=0.0, abs_tol=abs_tol / scale)
        gam[m - 1] = scale * res.value
    gam[np.abs(gam) < GAMMA_CUTOFF] = 0.0
    nz = np.flatnonzero(gam)
    return gam[: nz[-1] + 1] if nz.size else gam[:0]


def make_load(geometry: PlateGeometry, alpha: float, g: Callable | None = None,
              gammas: Mapping[int, float] | Sequence[float] | None = None,
              l1_g: float | None = None, m_max: int | None = None) -> LoadSpec:
    """Build the unit-L1 exponential load.

    With neither ``g`` nor ``gammas`` the load is ``sin x`` (``gamma_1 = 1``,
    ``int |g| = 2`` exactly). ``gammas`` may be a mapping ``m -> gamma_m`` or a
    dense sequence starting at ``m = 1``. ``g`` is expanded up to ``m_max``
    (default ``GUARD_MODES``) modes. ``alpha`` is checked against every
    integer up to the larger of ``m_max`` (default ``GUARD_MODES``) and the
    top mode index.
    """
    if g is not None and gammas is not None:
        raise ValueError("give either g or gammas, not both")
    if g is None and gammas is None:
        pairs = ((1, 1.0),)
        l1 = 2.0 if l1_g is None else float(l1_g)
    elif g is not None:
        m_max = GUARD_MODES if m_max is None else int(m_max)
        dense = fourier_coefficients(g, m_max)
        pairs = tuple((m + 1, float(v)) for m, v in enumerate(dense) if v != 0.0)
        l1 = (adaptive_simpson(lambda x: np.abs(g(x)), 0.0, math.pi, 1e-12, 1e-15).value
              if l1_g is None else float(l1_g))
    else:
        items = gammas.items() if isinstance(gammas, Mapping) else enumerate(gammas, start=1)
        pairs = tuple(sorted((int(m), float(v)) for m, v in items if v != 0.0))
        if any(m < 1 for m, _ in pairs):
            raise ValueError("mode indices start at 1")
        if not pairs:
            raise PlateError("load has no nonzero Fourier coefficient")
        if l1_g is None:
            l1 = _series_l1(pairs)
        else:
            l1 = float(l1_g)
    if not pairs:
        raise PlateError("load has no nonzero Fourier coefficient")
    if not l1 > 0.0:
        raise PlateError("int_0^pi |g| must be positive")
    top = max(m for m, _ in pairs)
    guard = max(top, GUARD_MODES if m_max is None else int(m_max))
    alpha = check_alpha(alpha, guard)
    ell = geometry.ell
    if alpha == 0.0:
        k = 1.0 / (2.0 * ell * l1)
    else:
        with np.errstate(under="ignore"):
            k = 0.5 * alpha / l1 * stable_ratio("exp", 0.0, "sinh", alpha * ell)
    return LoadSpec(alpha, pairs, l1, k, ell, guard)


def _series_l1(pairs):
    ms = np.array([m for m, _ in pairs], dtype=float)
    vs = np.array([v for _, v in pairs])
    f = lambda x: np.abs(np.sin(np.outer(x, ms)) @ vs)
    # split at a grid fine enough to isolate the kinks of |g|
    n = int(8 * ms.max())
    edges = np.linspace(0.0, math.pi, n + 1)
    return sum(adaptive_simpson(f, lo, hi, 1e-13, 1e-16).value
               for lo, hi in zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class ModeCoefficients:
    """Scaled coefficients of one sine mode (see module docstring)."""

    m: int
    particular: float
    a: float
    b: float
    c: float
    d: float

    def unscaled_coefficients(self, geometry: PlateGeometry, alpha: float):
        """Unscaled ``(A, B, C, D)`` for unit ``K_alpha``; overflows for large ``alpha*ell``."""
        ell, m = geometry.ell, self.m
        kappa = 0.5 / ell if alpha == 0.0 else 0.5 * alpha / math.sinh(alpha * ell)
        ch, sh = math.cosh(m * ell), math.sinh(m * ell)
        return (self.a / (kappa * ch), self.b / (kappa * sh),
                self.c / (kappa * ch), self.d / (kappa * sh))

    def gap_amplitude(self, ell: float, alpha: float) -> float:
        """``Y(ell) - Y(-ell)`` for this mode, before division by ``l1_g``."""
        return 2.0 * self.b + 2.0 * self.c * ell - self.particular * math.expm1(-2.0 * alpha * ell)


def _cramer(m11, m12, m21, m22, r1, r2, name, m):
    det = m11 * m22 - m12 * m21
    scale = math.hypot(m11, m12) * math.hypot(m21, m22)
    if not abs(det) > 1e-12 * scale:
        raise SingularSystemError(f"near-singular ({name}) system for mode m={m}: det={det:.3e}")
    return (r1 * m22 - m12 * r2) / det, (m11 * r2 - m21 * r1) / det


def mode_systems(geometry: PlateGeometry, alpha: float, m: int, gamma_m: float):
    """Scaled 2x2 systems for ``(a, d)`` and ``(b, c)``.

    Returns ``((M_ad, r_ad), (M_bc, r_bc))`` as nested tuples; exposed so
    residuals of a solved mode can be checked independently.
    """
    ell, sig = geometry.ell, geometry.sigma
    ml = m * ell
    th = math.tanh(ml)
    cth = 1.0 / th
    m2 = float(m * m)
    amp = gamma_m / (m2 - alpha * alpha) ** 2
    kc = 0.5 * alpha_coth(alpha, ell)   # kappa * cosh(alpha ell)
    ks = 0.5 * alpha                    # kappa * sinh(alpha ell)
    rhs_moment = amp * (sig * m2 - alpha * alpha)
    rhs_shear = alpha * amp * ((2.0 - sig) * m2 - alpha * alpha)
    ad = (((1.0 - sig) * m2, m * (2.0 * cth + (1.0 - sig) * ml),
           (sig - 1.0) * m**3 * th, m2 * ((1.0 + sig) + (sig - 1.0) * ml * cth)),
          (rhs_moment * kc, rhs_shear * ks))
    bc = (((1.0 - sig) * m2, m * (2.0 * th + (1.0 - sig) * ml),
           (sig - 1.0) * m**3 * cth, m2 * ((1.0 + sig) + (sig - 1.0) * ml * th)),
          (rhs_moment * ks, rhs_shear * kc))
    return ad, bc


def solve_mode_coefficients(geometry: PlateGeometry, alpha: float, m: int,
                            gamma_m: float) -> ModeCoefficients:
    """Solve the two decoupled 2x2 systems of mode ``m`` by Cramer's rule."""
    m = int(m)
    if m < 1:
        raise ValueError("mode index must be >= 1")
    if gamma_m == 0.0:
        return ModeCoefficients(m, 0.0, 0.0, 0.0, 0.0, 0.0)
    alpha = check_alpha(alpha, max(m, 1))
    ad, bc = mode_systems(geometry, alpha, m, gamma_m)
    a, d = _cramer(*ad[0], *ad[1], "A,D", m)
    b, c = _cramer(*bc[0], *bc[1], "B,C", m)
    particular = gamma_m / (m * m - alpha * alpha) ** 2 * 0.5 * _kappa_exp(alpha, geometry.ell)
    return ModeCoefficients(m, particular, a, b, c, d)


def closed_form_m1(geometry: PlateGeometry, alpha: float) -> ModeCoefficients:
    """Explicit first-mode coefficients for the ``sin x`` load, in the scaled form.

    Written from the explicit formulas rather than from the linear systems;
    ``cosh(alpha ell)`` and ``sinh(alpha ell)`` only ever appear multiplied by
    ``kappa``, which keeps every term bounded.
    """
    alpha = check_alpha(alpha, 1)
    ell, s = geometry.ell, geometry.sigma
    a2 = alpha * alpha
    kc = 0.5 * alpha_coth(alpha, ell)
    ks = 0.5 * alpha
    sh, ch = math.sinh(ell), math.cosh(ell)
    den = (a2 - 1.0) ** 2
    d_minus = (3.0 + s) * ch * sh - (1.0 - s) * ell
    d_plus = (3.0 + s) * ch * sh + (1.0 - s) * ell
    A = ((1 + s) * (s - a2) * sh * kc + (1 - s) * (a2 - s) * ell * ch * kc
         + 2 * alpha * (a2 + s - 2) * ch * ks + (1 - s) * alpha * (a2 + s - 2) * ell * sh * ks
         ) / ((1 - s) * den * d_minus)
    B = ((1 + s) * (s - a2) * ch * ks + (1 - s) * (a2 - s) * ell * sh * ks
         + 2 * alpha * (a2 + s - 2) * sh * kc + (1 - s) * alpha * (a2 + s - 2) * ell * ch * kc
         ) / ((1 - s) * den * d_plus)
    C = (alpha * (2 - s - a2) * sh * kc + (s - a2) * ch * ks) / (den * d_plus)
    D = (alpha * (2 - s - a2) * ch * ks + (s - a2) * sh * kc) / (den * d_minus)
    particular = 0.5 * _kappa_exp(alpha, ell) / den
    return ModeCoefficients(1, particular, A * ch, B * sh, C * ch, D * sh)


@dataclass(frozen=True)
class GapProfile:
    mode_amplitudes: tuple
    g_infinity: float
    x_max: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for m, amp in self.mode_amplitudes:
            out = out + amp * _sin_mx(m, x)
        return out


@dataclass(frozen=True)
class PlateSolution:
    geometry: PlateGeometry
    load: LoadSpec
    modes: tuple = field(default_factory=tuple)

    def evaluate(self, x, y):
        """Displacement ``u(x, y)``; accepts broadcastable arrays."""
        ell = self.geometry.ell
        dtype = np.result_type(x, y, float)
        x = np.asarray(x, dtype=dtype)
        y = np.asarray(y, dtype=dtype)
        slack = 1e-12 * ell
        if np.any((x < 0.0) | (x > math.pi * (1.0 + 1e-15))) or np.any(np.abs(y) > ell + slack):
            raise PlateError("evaluation point outside the closed plate")
        y = np.clip(y, -ell, ell)
        alpha = self.load.alpha
        with np.errstate(under="ignore"):
            part = np.exp(alpha * (y - ell))
        out = np.zeros(np.broadcast(x, y).shape, dtype=dtype)
        for mc in self.modes:
            m = mc.m
            rc = stable_ratio("cosh", m * y, "cosh", m * ell)
            rs = stable_ratio("sinh", m * y, "sinh", m * ell)
            prof = mc.particular * part + (mc.a + mc.c * y) * rc + (mc.b + mc.d * y) * rs
            out = out + prof * _sin_mx(m, x)
        return out / self.load.l1_g

    __call__ = evaluate

    def load_value(self, x, y):
        return self.load(x, y)


def solve_plate(geometry: PlateGeometry, load: LoadSpec, max_modes: int = MAX_MODES) -> PlateSolution:
    """Solve every nonzero mode of ``load`` in increasing ``m``.

    Stops once a mode's gap contribution drops below ``TRUNCATION_RTOL`` of the
    running total of absolute contributions, or after ``max_modes`` modes.
    """
    if load.half_width != geometry.ell:
        raise PlateError("load was built for a different half-width")
    ell, alpha = geometry.ell, load.alpha
    modes = []
    running = 0.0
    for m, gm in load.gammas:
        if m > max_modes:
            break
        mc = solve_mode_coefficients(geometry, alpha, m, gm)
        modes.append(mc)
        contrib = abs(mc.gap_amplitude(ell, alpha))
        if running > 0.0 and contrib < TRUNCATION_RTOL * running:
            break
        running += contrib
    return PlateSolution(geometry, load, tuple(modes))


def gap_profile(solution: PlateSolution) -> GapProfile:
    """Edge difference ``u(x, ell) - u(x, -ell)`` and its maximum modulus."""
    ell, alpha = solution.geometry.ell, solution.load.alpha
    amps = tuple((mc.m, mc.gap_amplitude(ell, alpha) / solution.load.l1_g)
                 for mc in solution.modes)
    ms = np.array([m for m, _ in amps], dtype=float)
    vs = np.array([v for _, v in amps])
    if not np.any(vs):
        return GapProfile(amps, 0.0, 0.0)
    x, g = kernels.trig_abs_max(ms, vs, GAP_SAMPLES, GAP_BISECTIONS)
    return GapProfile(amps, g, x)


def solve_exponential_load(geometry: PlateGeometry, alpha: float, **load_kwargs) -> PlateSolution:
    """Shorthand for ``solve_plate(geometry, make_load(geometry, alpha, ...))``."""
    return solve_plate(geometry, make_load(geometry, alpha, **load_kwargs))
