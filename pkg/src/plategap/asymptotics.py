"""Closed-form maximal gap for the edge-concentrating load ``e^{alpha y} sin x``."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import PlateGeometry, stable_ratio
from .errors import PlateError
from .quadrature import adaptive_simpson
from .series import ALPHA_GUARD, GUARD_MODES, check_alpha, closed_form_m1


def e_of_ell_alpha(geometry: PlateGeometry, alpha: float) -> float:
    """Maximal gap under the unit-L1 load ``alpha e^{alpha y} sin x / (4 sinh(alpha ell))``."""
    alpha = check_alpha(alpha, GUARD_MODES)
    cf = closed_form_m1(geometry, alpha)
    # cf.b = alpha B sinh(ell) / (2 sinh(alpha ell)); likewise cf.c with cosh(ell)
    return alpha / (2.0 * (1.0 - alpha * alpha) ** 2) + cf.b + cf.c * geometry.ell


def e_of_ell(geometry: PlateGeometry) -> float:
    """Limit of the maximal gap as the load concentrates on the edge ``y = ell``."""
    ell, s = geometry.ell, geometry.sigma
    sh, ch = math.sinh(ell), math.cosh(ell)
    return sh * sh / ((1.0 - s) * ((1.0 - s) * ell + (3.0 + s) * sh * ch))


def first_order_correction(geometry: PlateGeometry) -> float:
    """Coefficient ``c1`` in ``E(ell, alpha) = E(ell) - c1/alpha + o(1/alpha)``."""
    ell, s = geometry.ell, geometry.sigma
    shch = math.sinh(ell) * math.cosh(ell)
    return ((1.0 + s) * shch + (1.0 - s) * ell) / (
        2.0 * (1.0 - s) * ((3.0 + s) * shch + (1.0 - s) * ell))


def concentrated_load(geometry: PlateGeometry, alpha: float):
    """The unit-L1 load ``f_alpha(x, y)`` as a vectorized callable."""
    ell = geometry.ell

    def f(x, y):
        y = np.asarray(y, dtype=float)
        if alpha == 0.0:
            prof = np.full_like(y, 1.0 / (4.0 * ell))
        else:
            prof = 0.25 * alpha * stable_ratio("exp", alpha * y, "sinh", alpha * ell)
        return prof * np.sin(x)

    return f


def weak_limit_residual(geometry: PlateGeometry, alpha: float, v: Callable,
                        rel_tol: float = 1e-11) -> float:
    """``|int f_alpha v - 1/2 int_0^pi sin(x) v(x, ell) dx|`` by nested adaptive quadrature.

    ``v(x, y)`` must accept numpy arrays.
    """
    alpha = check_alpha(alpha, GUARD_MODES)
    ell = geometry.ell
    f = concentrated_load(geometry, alpha)
    # points where the y-integrand has decayed to 1e-18 of its edge value
    y_split = max(-ell, ell - 41.5 / alpha) if alpha > 0.0 else -ell

    def inner(xs):
        out = np.empty(len(xs))
        for i, x in enumerate(np.atleast_1d(xs)):
            g = lambda y: f(x, y) * v(x, y)
            val = adaptive_simpson(g, y_split, ell, rel_tol, 1e-300).value
            if y_split > -ell:
                val += adaptive_simpson(g, -ell, y_split, rel_tol, 1e-300).value
            out[i] = val
        return out

    lhs = adaptive_simpson(inner, 0.0, math.pi, rel_tol, 1e-300).value
    rhs = 0.5 * adaptive_simpson(lambda x: np.sin(x) * v(x, np.full_like(x, ell)),
                                 0.0, math.pi, rel_tol, 1e-300).value
    return abs(lhs - rhs)


@dataclass(frozen=True)
class AlphaSweep:
    geometry: PlateGeometry
    alpha_grid: tuple
    values: tuple
    limit: float
    nudged: tuple = field(default=())

    @property
    def strictly_increasing(self) -> bool:
        v = np.asarray(self.values)
        return bool(np.all(np.diff(v) > 0.0))

    def rows(self):
        """CSV-ready rows; the last one carries the limit ``E(ell)``."""
        out = [{"alpha": a, "g_infinity": v, "nudged": int(n)}
               for a, v, n in zip(self.alpha_grid, self.values, self.nudged)]
        out.append({"alpha": "limit", "g_infinity": self.limit, "nudged": ""})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "g_infinity", "nudged"])
        for r in self.rows():
            w.writerow([_fmt(r["alpha"]), _fmt(r["g_infinity"]), r["nudged"]])
        return buf.getvalue()


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def nudge_alpha(alpha: float, upper: float = math.inf) -> tuple[float, bool]:
    """Move ``alpha`` off a guarded integer by ``2 * ALPHA_GUARD``."""
    n = round(alpha)
    if 1 <= n <= GUARD_MODES and abs(alpha - n) <= ALPHA_GUARD:
        up = n + 2.0 * ALPHA_GUARD
        return (up if up <= upper else n - 2.0 * ALPHA_GUARD), True
    return alpha, False


def sweep_alpha(geometry: PlateGeometry, alpha_min: float, alpha_max: float,
                points: int, spacing: str = "log") -> AlphaSweep:
    """Evaluate ``E(ell, alpha)`` on a grid; integer collisions are nudged and flagged."""
    if points < 1:
        raise PlateError("points must be >= 1")
    if not (alpha_min >= 0.0 and alpha_max >= alpha_min) or (points > 1 and alpha_max == alpha_min):
        raise PlateError(f"invalid alpha range [{alpha_min}, {alpha_max}]")
    if spacing == "log":
        if alpha_min <= 0.0:
            raise PlateError("log spacing needs alpha_min > 0")
        grid = np.geomspace(alpha_min, alpha_max, points) if points > 1 else np.array([alpha_min])
    elif spacing == "linear":
        grid = np.linspace(alpha_min, alpha_max, points) if points > 1 else np.array([alpha_min])
    else:
        raise PlateError(f"unknown spacing {spacing!r}")
    alphas, flags = zip(*(nudge_alpha(float(a), alpha_max) for a in grid))
    values = tuple(e_of_ell_alpha(geometry, a) for a in alphas)
    return AlphaSweep(geometry, tuple(alphas), values, e_of_ell(geometry), tuple(flags))
