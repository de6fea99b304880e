"""Independent checks of the analytic solutions.

Nothing here calls the eigenvalue root finder or the 2x2 coefficient solver:
residuals are taken from finite differences of whatever callable is handed in,
and eigenvalue brackets are found by brute-force sign scans.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import PlateGeometry
from .eigen import POLE_MARGIN
from .errors import PlateError, PoleError
from .quadrature import QuadResult, adaptive_simpson, quadrature

__all__ = ["ResidualReport", "biharmonic_residual", "bracket_scan", "quadrature",
           "adaptive_simpson", "QuadResult", "fd_weights", "simplex_grid_max"]

BC_FAMILIES = ("hinged_u", "hinged_uxx", "free_moment", "free_shear")


def fd_weights(deriv: int, offsets: Sequence[int], dtype=float) -> np.ndarray:
    """Weights for ``d^deriv/dx^deriv`` at 0 from samples at integer ``offsets``.

    Fornberg's recursion in exact rational arithmetic, so the weights carry no
    rounding before the final cast to ``dtype``.
    """
    z = [Fraction(int(k)) for k in offsets]
    n = len(z)
    if n <= deriv:
        raise ValueError("need more points than the derivative order")
    c = [[Fraction(0)] * (deriv + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    for i in range(1, n):
        c2 = Fraction(1)
        for j in range(i):
            c3 = z[i] - z[j]
            c2 *= c3
            for k in range(min(i, deriv), -1, -1):
                prev = c[i - 1][k - 1] if k else 0
                c[i][k] = c1 * (k * prev - z[i - 1] * c[i - 1][k]) / c2
            for k in range(min(i, deriv), -1, -1):
                prev = c[j][k - 1] if k else 0
                c[j][k] = (z[i] * c[j][k] - k * prev) / c3
        c1 = c2
    w = [row[deriv] for row in c]
    return np.array([dtype(q.numerator) / dtype(q.denominator) for q in w], dtype=dtype)


@dataclass(frozen=True)
class ResidualReport:
    """Grid-refinement record.

    ``interior_max_residual`` is the max over every interior node of each grid.
    ``fixed_node_residual`` is the max over the coarsest grid's interior nodes,
    which all finer (nested) grids contain; it is ``None`` when the grids do
    not nest. ``fitted_order`` is the log2 slope of the fixed-node series when
    present, else of the all-node series, whose own slope is kept in
    ``all_node_order``.
    """

    grid_steps: tuple
    interior_max_residual: tuple
    bc_max_residual: dict
    fitted_order: float
    fit_residual: float
    load_scale: float = 1.0
    bc_orders: dict = field(default_factory=dict)
    fixed_node_residual: tuple | None = None
    all_node_order: float = math.nan

    @property
    def relative_interior(self) -> tuple:
        return tuple(r / self.load_scale for r in self.interior_max_residual)


def _pi(dtype):
    # pi rounded in the grid precision, not the double value widened
    return 4 * np.arctan(dtype(1))


def _fit_order(steps, res):
    steps = np.asarray(steps, dtype=float)
    res = np.asarray(res, dtype=float)
    if np.any(res <= 0.0) or steps.size < 2:
        return math.nan, math.nan
    (slope, _), r, *_ = np.polyfit(np.log2(steps), np.log2(res), 1, full=True)
    return float(slope), float(np.sqrt(r[0] / steps.size)) if len(r) else 0.0


def biharmonic_residual(u: Callable, f: Callable, geometry: PlateGeometry,
                        grid_steps: Sequence[float], bc_order: int = 4,
                        dtype=np.longdouble) -> ResidualReport:
    """Finite-difference residuals of ``Delta^2 u = f`` and of the edge conditions.

    For every step ``h`` the grid has ``n_y = round(2 ell / h)`` intervals across
    the width (rows on ``y = +-ell``) and ``round(pi / h)`` along the span. The
    interior residual is the 13-point stencil minus ``f`` on nodes two or more
    steps from the boundary. Edge derivatives use one-sided differences of
    order ``bc_order``; tangential derivatives are central.

    ``u`` and ``f`` take broadcastable ``(x, y)`` arrays. Grids are built in
    ``dtype``; the default extended precision keeps the ``h^-4`` amplification
    of rounding in ``u`` below the truncation error on fine grids. Callables
    that return doubles still work, with that headroom lost.
    """
    ell, sigma = geometry.ell, geometry.sigma
    steps, interior, fields, shapes = [], [], [], []
    bc = {k: [] for k in BC_FAMILIES}
    load_scale = 0.0
    for h in grid_steps:
        ny = int(round(2.0 * ell / h))
        if ny < 8:
            raise PlateError(f"grid step {h!r} too coarse: fewer than 8 intervals across 2*ell")
        nx = int(round(math.pi / h))
        xs = np.linspace(dtype(0.0), _pi(dtype), nx + 1)
        ys = np.linspace(dtype(-ell), dtype(ell), ny + 1)
        # node spacing as realized in the grid's own precision
        hx, hy = (xs[-1] - xs[0]) / nx, (ys[-1] - ys[0]) / ny
        X, Y = np.meshgrid(xs, ys)
        U = np.asarray(u(X, Y))
        if U.dtype.kind != "f":
            U = U.astype(float)
        F = np.asarray(f(X[2:-2, 2:-2], Y[2:-2, 2:-2]))
        if U.dtype == np.float64:
            lap2 = kernels.stencil13(U, float(hx), float(hy))
        else:
            lap2 = kernels.numpy_backend.stencil13(U, hx, hy)
        res = np.abs(lap2 - F)
        interior.append(float(np.max(res)))
        fields.append(res)
        shapes.append((ny, nx))
        load_scale = max(load_scale, float(np.max(np.abs(F))))
        steps.append(float(max(hx, hy)))

        # hinged edges x = 0, pi
        bc["hinged_u"].append(float(max(np.max(np.abs(U[:, 0])), np.max(np.abs(U[:, -1])))))
        w2 = fd_weights(2, range(bc_order + 2), U.dtype.type) / hx**2
        n2 = w2.size
        uxx0 = U[:, :n2] @ w2
        uxxpi = U[:, ::-1][:, :n2] @ w2
        bc["hinged_uxx"].append(float(max(np.max(np.abs(uxx0)), np.max(np.abs(uxxpi)))))

        # free edges y = +-ell, on interior x columns
        wy1 = fd_weights(1, range(bc_order + 1), U.dtype.type) / hy
        wy2 = fd_weights(2, range(bc_order + 2), U.dtype.type) / hy**2
        wy3 = fd_weights(3, range(bc_order + 3), U.dtype.type) / hy**3
        moment, shear = 0.0, 0.0
        for sign, rows in ((1.0, U[::-1]), (-1.0, U)):
            # rows[0] is the edge row; rows[k] lies k steps inward
            uy = -sign * np.tensordot(wy1, rows[: wy1.size], axes=1)
            uyy = np.tensordot(wy2, rows[: wy2.size], axes=1)
            uyyy = -sign * np.tensordot(wy3, rows[: wy3.size], axes=1)
            edge = rows[0]
            uxx = (edge[:-2] - 2.0 * edge[1:-1] + edge[2:]) / hx**2
            uxxy = (uy[:-2] - 2.0 * uy[1:-1] + uy[2:]) / hx**2
            moment = max(moment, float(np.max(np.abs(uyy[1:-1] + sigma * uxx))))
            shear = max(shear, float(np.max(np.abs(uyyy[1:-1] + (2.0 - sigma) * uxxy))))
        bc["free_moment"].append(moment)
        bc["free_shear"].append(shear)

    fixed = _fixed_node_maxima(fields, shapes)
    all_order, all_res = _fit_order(steps, interior)
    order, fit_res = _fit_order(steps, fixed) if fixed is not None else (all_order, all_res)
    bc_orders = {k: _fit_order(steps, v)[0] for k, v in bc.items()}
    return ResidualReport(tuple(steps), tuple(interior), {k: tuple(v) for k, v in bc.items()},
                          order, fit_res, load_scale or 1.0, bc_orders, fixed, all_order)


def _fixed_node_maxima(fields, shapes):
    # residual fields cover nodes 2..n-2; map the coarsest grid's ones into each grid
    ny0, nx0 = min(shapes)
    out = []
    for res, (ny, nx) in zip(fields, shapes):
        if ny % ny0 or nx % nx0 or ny // ny0 != nx // nx0:
            return None
        r = ny // ny0
        rows = np.arange(2, ny0 - 1) * r - 2
        cols = np.arange(2, nx0 - 1) * r - 2
        out.append(float(np.max(res[np.ix_(rows, cols)])))
    return tuple(out)


def _pole_distances(s, m2, w):
    # vectorized twin of eigen.pole_distance
    t = np.sqrt(np.maximum(s - m2, 0.0)) / w - 0.5
    k = np.maximum(np.round(t), 0.0)
    best = np.full_like(s, np.inf)
    for dk in (-1.0, 0.0, 1.0):
        kk = k + dk
        sp = m2 + (w * (kk + 0.5)) ** 2
        best = np.where(kk >= 0.0, np.minimum(best, np.abs(s - sp) / sp), best)
    return np.where(s > m2, best, np.inf)


def bracket_scan(geometry: PlateGeometry, m: int, lambda_lo: float, lambda_hi: float,
                 n_samples: int) -> list[tuple[float, float]]:
    """All sign changes of the characteristic function on a uniform ``sqrt(lambda)`` grid.

    Samples within ``POLE_MARGIN`` (relative) of a tangent pole, or where the
    function is undefined, are dropped; a sign change whose sub-interval
    straddles a pole is not reported. Returns ``(lambda_a, lambda_b)`` pairs.

    Raises
    ------
    PoleError
        When every sample falls inside a pole neighborhood.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if not lambda_lo < lambda_hi:
        raise ValueError("need lambda_lo < lambda_hi")
    ell, sigma = geometry.ell, geometry.sigma
    m2 = float(m * m)
    lo = max(lambda_lo, 0.0)
    if lo >= lambda_hi:
        return []
    s = np.linspace(math.sqrt(lo), math.sqrt(lambda_hi), n_samples)
    floor = (1.0 - sigma) * m2 * (1.0 + POLE_MARGIN)
    valid = s > floor
    if not valid.any():
        return []
    near = _pole_distances(s, m2, math.pi / ell) < POLE_MARGIN
    keep = valid & ~near
    if not keep.any():
        raise PoleError("scan range lies entirely inside pole neighborhoods")
    s = s[keep]
    z = np.empty_like(s)
    hyp = s < m2
    if hyp.any():
        z[hyp] = kernels.z_values(s[hyp], m, ell, sigma, True)
    if (~hyp).any():
        z[~hyp] = kernels.z_values(s[~hyp], m, ell, sigma, False)
    w = math.pi / ell
    # pole index k with s_pole = m^2 + (w (k + 1/2))^2; a change in floor(...) means a pole was crossed
    branch_id = np.where(s > m2, np.floor(np.sqrt(np.maximum(s - m2, 0.0)) / w - 0.5), -1.0)
    out = []
    for i in np.flatnonzero(np.signbit(z[:-1]) != np.signbit(z[1:])):
        if branch_id[i] != branch_id[i + 1]:
            continue
        out.append((float(s[i] ** 2), float(s[i + 1] ** 2)))
    return out


def simplex_grid_max(deltas: Sequence[float], n_steps: int = 100):
    """Exhaustive max of ``sum deltas_k x_k`` over ``x_k = i_k / n_steps``, ``sum x_k <= 1``.

    Returns ``(value, weights)``.
    """
    value, counts = kernels.simplex_linear_max(np.asarray(deltas, dtype=float), int(n_steps))
    return value, np.asarray(counts, dtype=float) / n_steps
