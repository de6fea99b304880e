"""Torsional eigenpairs and the gap constants of resonant loads.

A torsional eigenfunction is ``w(x, y) = v(y) sin(m x)`` with ``v`` odd. With
``s = sqrt(nu)`` the profile is

    v(y) = [s - (1-sigma) m^2] sinh(p y)/sinh(p ell)
           + [s + (1-sigma) m^2] sin(q y)/sin(q ell),

``p = sqrt(s + m^2)``, ``q = sqrt(s - m^2)`` (``sin`` becomes ``sinh`` with
``q = sqrt(m^2 - s)`` on the hyperbolic branch). The eigenvalue is the root
of ``Z(s)`` inside a known bracket, one root per bracket.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .core import PlateGeometry, stable_ratio
from .errors import (BracketError, DegenerateConfigurationError, PlateError,
                     PoleError)
from .quadrature import adaptive_simpson

POLE_MARGIN = 1e-8
POLE_REJECT = 1e-10
ROOT_RTOL = 1e-13
ROOT_MAXITER = 200
DEGENERATE_RTOL = 1e-12


class Branch(str, Enum):
    TRIG = "trig"
    HYPERBOLIC = "hyperbolic"


def _kappa(sigma):
    return (sigma / (2.0 - sigma)) ** 2


def critical_s(geometry: PlateGeometry) -> float:
    """Positive root ``s`` of ``tanh(sqrt(2) s ell) = (sigma/(2-sigma))^2 sqrt(2) s ell``."""
    k = _kappa(geometry.sigma)
    t = brentq(lambda t: math.tanh(t) - k * t, 1e-8, 1.0 / k, xtol=1e-15, rtol=1e-15, maxiter=500)
    return t / (math.sqrt(2.0) * geometry.ell)


def branch_classifier(geometry: PlateGeometry, m: int) -> Branch:
    """Trig when ``tanh(sqrt2 m ell) > kappa sqrt2 m ell``, Hyperbolic when smaller."""
    t = math.sqrt(2.0) * m * geometry.ell
    lhs = math.tanh(t)
    rhs = _kappa(geometry.sigma) * t
    if abs(lhs - rhs) <= DEGENERATE_RTOL * max(lhs, rhs):
        raise DegenerateConfigurationError(
            f"m={m} sits on the branch threshold (critical s = {critical_s(geometry):.12g})")
    return Branch.TRIG if lhs > rhs else Branch.HYPERBOLIC


def pole_distance(geometry: PlateGeometry, m: int, s: float) -> float:
    """Relative distance from ``s`` to the nearest pole of ``tan(ell sqrt(s - m^2))``."""
    m2 = m * m
    if s <= m2:
        return math.inf
    w = math.pi / geometry.ell
    k = max(0, round(math.sqrt(s - m2) / w - 0.5))
    best = math.inf
    for kk in (k - 1, k, k + 1):
        if kk >= 0:
            sp = m2 + (w * (kk + 0.5)) ** 2
            best = min(best, abs(s - sp) / sp)
    return best


def characteristic_residual(geometry: PlateGeometry, m: int, lam: float) -> float:
    """``Z(sqrt(lam))``: positive left of each eigenvalue, negative right of it.

    ``lam > m^4`` uses the trigonometric form, ``(1-sigma^2) m^4 < lam < m^4``
    the hyperbolic one; the two agree at ``lam = m^4``.

    Raises
    ------
    PoleError
        ``sqrt(lam)`` within relative ``1e-10`` of a tangent pole.
    """
    sigma = geometry.sigma
    if not lam > (1.0 - sigma * sigma) * m**4:
        raise PlateError(f"lambda={lam!r} below (1-sigma^2) m^4")
    s = math.sqrt(lam)
    hyperbolic = s < m * m
    if not hyperbolic and pole_distance(geometry, m, s) < POLE_REJECT:
        raise PoleError(f"lambda={lam!r} is on a tangent pole for m={m}")
    return kernels.z_scalar(s, int(m), geometry.ell, sigma, hyperbolic)


def eigen_bracket(geometry: PlateGeometry, m: int, j: int,
                  branch: Branch | None = None) -> tuple[float, float]:
    """Open interval in ``lambda`` known to hold exactly one eigenvalue ``nu_{m,j}``."""
    if m < 1 or j < 1:
        raise ValueError("m and j start at 1")
    if branch is None:
        branch = branch_classifier(geometry, m)
    m4 = float(m) ** 4
    if branch is Branch.HYPERBOLIC and j == 1:
        return (1.0 - geometry.sigma**2) * m4, m4
    w2 = (math.pi / geometry.ell) ** 2
    return (m * m + w2 * (j - 1) ** 2) ** 2, (m * m + w2 * (j - 0.5) ** 2) ** 2


@dataclass(frozen=True)
class TorsionalMode:
    m: int
    j: int
    nu: float
    branch: Branch
    geometry: PlateGeometry
    iterations: int = 0

    @property
    def sqrt_nu(self) -> float:
        return math.sqrt(self.nu)

    def profile(self, y):
        return eigenfunction_profile(self, y)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.result_type(x, float))
        s = np.sin(self.m * x)
        s = np.where((x == 0.0) | (x == math.pi), 0.0, s)
        return self.profile(y) * s


def torsional_eigenvalue(geometry: PlateGeometry, m: int, j: int) -> TorsionalMode:
    """Find ``nu_{m,j}`` by safeguarded secant inside the shrunken bracket."""
    branch = branch_classifier(geometry, m)
    lam_lo, lam_hi = eigen_bracket(geometry, m, j, branch)
    hyperbolic = branch is Branch.HYPERBOLIC and j == 1
    s_lo = math.sqrt(lam_lo) * (1.0 + POLE_MARGIN)
    s_hi = math.sqrt(lam_hi) * (1.0 - POLE_MARGIN)
    root, its, ok = kernels.find_root(m, geometry.ell, geometry.sigma, hyperbolic,
                                      s_lo, s_hi, 0.5 * ROOT_RTOL, ROOT_MAXITER)
    if math.isnan(root):
        raise BracketError(f"no sign change in the bracket of (m={m}, j={j}); "
                           "degenerate configuration")
    if not ok:
        raise BracketError(f"root finder did not converge for (m={m}, j={j})")
    if not hyperbolic:
        arg = geometry.ell * math.sqrt(root - m * m) / math.pi
        if arg > 0 and abs(arg - round(arg)) <= POLE_REJECT * max(arg, 1.0):
            raise DegenerateConfigurationError(
                f"sin(q ell) vanishes for (m={m}, j={j}); profile undefined")
    return TorsionalMode(int(m), int(j), root * root,
                         Branch.HYPERBOLIC if hyperbolic else Branch.TRIG, geometry, its)


def eigenfunction_profile(mode: TorsionalMode, y):
    """Cross-section ``v_{m,j}(y)``; odd, with ``v(ell) = 2 sqrt(nu)``."""
    g = mode.geometry
    ell, sigma, m = g.ell, g.sigma, mode.m
    y_arr = np.asarray(y, dtype=np.result_type(y, float))
    if np.any(np.abs(y_arr) > ell * (1.0 + 1e-12)):
        raise PlateError("profile evaluated outside [-ell, ell]")
    y_arr = np.clip(y_arr, -ell, ell)
    s = mode.sqrt_nu
    c = (1.0 - sigma) * m * m
    p = math.sqrt(s + m * m)
    first = (s - c) * stable_ratio("sinh", p * y_arr, "sinh", p * ell)
    if mode.branch is Branch.HYPERBOLIC:
        q = math.sqrt(m * m - s)
        second = (s + c) * stable_ratio("sinh", q * y_arr, "sinh", q * ell)
    else:
        q = math.sqrt(s - m * m)
        second = (s + c) * np.sin(q * y_arr) / math.sin(q * ell)
    out = first + second
    return float(out) if np.ndim(y) == 0 else out


def profile_zeros(mode: TorsionalMode) -> list[float]:
    """Zeros of ``v`` in ``(0, ell)``: sign scan on ``64 j`` samples, then Brent."""
    ell = mode.geometry.ell
    ys = np.linspace(0.0, ell, 64 * mode.j + 1)[1:]
    vs = eigenfunction_profile(mode, ys)
    f = lambda t: float(eigenfunction_profile(mode, t))
    zeros = []
    for i in np.flatnonzero(np.signbit(vs[:-1]) != np.signbit(vs[1:])):
        zeros.append(brentq(f, ys[i], ys[i + 1], xtol=4e-16 * ell, rtol=1e-15, maxiter=200))
    return zeros


def l1_norm(mode: TorsionalMode, rel_tol: float = 1e-12) -> float:
    """``||w_{m,j}||_{L1}`` over the plate.

    The x-factor integrates to 2 and ``v`` is odd, so this is
    ``4 * int_0^ell |v|``, with ``[0, ell]`` cut at the zeros of ``v``.
    """
    ell = mode.geometry.ell
    cuts = [0.0, *profile_zeros(mode), ell]
    prof = lambda t: eigenfunction_profile(mode, t)
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += abs(adaptive_simpson(prof, lo, hi, rel_tol, 1e-300).value)
    return 4.0 * total


@dataclass(frozen=True)
class EigenGapEntry:
    m: int
    j: int
    nu: float
    l1_norm: float
    c: float
    branch: Branch = Branch.TRIG


def gap_constant(geometry: PlateGeometry, m: int, j: int) -> EigenGapEntry:
    """Maximal gap ``C_{m,j} = 4 / (sqrt(nu) ||w||_1)`` of the resonant unit-L1 load."""
    mode = torsional_eigenvalue(geometry, m, j)
    norm = l1_norm(mode)
    return EigenGapEntry(mode.m, mode.j, mode.nu, norm, 4.0 / (mode.sqrt_nu * norm), mode.branch)


@dataclass(frozen=True)
class EigenTable:
    """Cells indexed ``[j-1][m-1]``; a cell is ``None`` when its computation failed."""

    geometry: PlateGeometry
    m_max: int
    j_max: int
    cells: tuple
    errors: dict = field(default_factory=dict)

    def values(self) -> np.ndarray:
        out = np.full((self.j_max, self.m_max), np.nan)
        for jj, row in enumerate(self.cells):
            for mm, cell in enumerate(row):
                if cell is not None:
                    out[jj, mm] = cell.c
        return out

    def entry(self, m: int, j: int) -> EigenGapEntry | None:
        return self.cells[j - 1][m - 1]


def eigen_gap_table(geometry: PlateGeometry, m_max: int = 5, j_max: int = 5) -> EigenTable:
    if m_max < 1 or j_max < 1:
        raise ValueError("m_max and j_max must be >= 1")
    rows, errors = [], {}
    for j in range(1, j_max + 1):
        row = []
        for m in range(1, m_max + 1):
            try:
                row.append(gap_constant(geometry, m, j))
            except (PlateError, ArithmeticError) as exc:
                errors[(m, j)] = f"{type(exc).__name__}: {exc}"
                row.append(None)
        rows.append(tuple(row))
    return EigenTable(geometry, m_max, j_max, tuple(rows), errors)


@dataclass(frozen=True)
class ScalingReport:
    ells: tuple
    c_values: tuple
    ratios: tuple
    slope: float
    slope_residual: float

    @property
    def r_min(self) -> float:
        return min(self.ratios)

    @property
    def r_max(self) -> float:
        return max(self.ratios)


def scaling_exponent_check(sigma: float, ell_grid: Sequence[float], m: int = 1,
                           j: int = 1) -> ScalingReport:
    """``C_{m,j}(ell) / ell^3`` along a grid, plus the log-log slope of ``C`` against ``ell``."""
    ells = [float(e) for e in ell_grid]
    if len(ells) < 2:
        raise ValueError("need at least two half-widths")
    if any(not 0.0 < e <= math.pi / 20 for e in ells):
        raise PlateError("half-widths must lie in (0, pi/20]")
    cs = [gap_constant(PlateGeometry(e, sigma), m, j).c for e in ells]
    x, y = np.log(ells), np.log(cs)
    (slope, icpt), res, *_ = np.polyfit(x, y, 1, full=True)
    resid = float(np.sqrt(res[0] / len(ells))) if len(res) else 0.0
    return ScalingReport(tuple(ells), tuple(cs), tuple(c / e**3 for c, e in zip(cs, ells)),
                         float(slope), resid)


@dataclass(frozen=True)
class ComboSpec:
    """Resonant-load combination: entries ``(m, j, weight)`` with ``sum |weight| <= 1``."""

    entries: tuple

    def __post_init__(self):
        norm = []
        for e in self.entries:
            m, j, w = e
            if int(m) != m or int(j) != j or m < 1 or j < 1:
                raise PlateError(f"bad mode indices in entry {e!r}")
            w = float(w)
            if not math.isfinite(w) or w == 0.0:
                raise PlateError(f"weights must be finite and nonzero, got {e!r}")
            norm.append((int(m), int(j), w))
        if not norm:
            raise PlateError("combination is empty")
        ms = [m for m, _, _ in norm]
        if len(set(ms)) != len(ms):
            raise PlateError("mode indices m must be distinct")
        total = sum(abs(w) for _, _, w in norm)
        if total > 1.0 + 1e-12:
            raise PlateError(f"sum of |weights| is {total:.15g} > 1")
        object.__setattr__(self, "entries", tuple(sorted(norm)))

    @property
    def m_o(self) -> int:
        return self.entries[0][0]


@dataclass(frozen=True)
class ComboResult:
    max_gap: float
    m_o: int
    j_o: int
    argmax_weights: tuple
    actual_gap: float
    weighted_bound: float
    c_values: tuple


def combo_max_gap(geometry: PlateGeometry, spec: ComboSpec,
                  c_of: Callable[[int, int], float] | None = None) -> ComboResult:
    """Largest maximal gap over all admissible weights for the modes in ``spec``.

    The maximum is ``C_{m_o, j(m_o)}`` with ``m_o`` the smallest mode, reached by
    putting all weight on ``m_o``. Also reports the maximal gap of the weights
    actually given. ``c_of(m, j)`` overrides how the constants are obtained.

    Raises
    ------
    PlateError
        If ``m -> C_{m, j(m)}`` is not nonincreasing.
    """
    if c_of is None:
        c_of = lambda m, j: gap_constant(geometry, m, j).c
    cs = [c_of(m, j) for m, j, _ in spec.entries]
    for (m0, _, _), (m1, _, _), c0, c1 in zip(spec.entries, spec.entries[1:], cs, cs[1:]):
        if c1 > c0 * (1.0 + 1e-12):
            raise PlateError(f"C is not nonincreasing in m: C(m={m1})={c1:.6g} > C(m={m0})={c0:.6g}")
    ms = np.array([m for m, _, _ in spec.entries], dtype=float)
    amps = np.array([w * c for (_, _, w), c in zip(spec.entries, cs)])
    _, actual = kernels.trig_abs_max(ms, amps, 4096, 60)
    m_o, j_o, _ = spec.entries[0]
    weights = tuple((m, 1.0 if m == m_o else 0.0) for m, _, _ in spec.entries)
    bound = float(np.sum(np.abs(amps)))
    return ComboResult(cs[0], m_o, j_o, weights, actual, bound, tuple(cs))
