"""Invariant suites behind ``plategap validate``.

Every check returns a :class:`Check`; a suite is a list of them plus timing.
``fast`` is sized to finish well under half a minute; ``full`` adds the slow
quadrature-heavy and randomized checks.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .asymptotics import (e_of_ell, e_of_ell_alpha, first_order_correction,
                          sweep_alpha, weak_limit_residual)
from .core import PlateGeometry
from .eigen import (EigenTable, ComboSpec, combo_max_gap, eigen_bracket, eigen_gap_table,
                    eigenfunction_profile, gap_constant, scaling_exponent_check,
                    torsional_eigenvalue)
from .oracle import biharmonic_residual, bracket_scan, simplex_grid_max
from .series import (closed_form_m1, gap_profile, make_load, solve_mode_coefficients,
                     solve_plate)

# Reference 5-digit values of the resonant maximal gap at ell = pi/150, sigma = 0.2;
# rows j = 1..5, columns m = 1..5.
REFERENCE_TABLE = (
    (4.3629e-3, 1.0904e-3, 4.8439e-4, 2.7229e-4, 1.7411e-4),
    (4.3566e-8, 4.3555e-8, 4.3536e-8, 4.3509e-8, 4.3474e-8),
    (4.1216e-9, 4.1214e-9, 4.1209e-9, 4.1203e-9, 4.1195e-9),
    (9.4439e-10, 9.4436e-10, 9.4432e-10, 9.4426e-10, 9.4418e-10),
    (3.2251e-10, 3.2250e-10, 3.2249e-10, 3.2248e-10, 3.2247e-10),
)
TABLE_RTOL = 5e-4

# 27-point cross-solver grid
CROSS_ELLS = (math.pi / 300, math.pi / 150, math.pi / 50)
CROSS_SIGMAS = (0.1, 0.2, 0.3)
CROSS_ALPHAS = (0.5, 10.5, 100.3)

SCALING_ELLS = tuple(math.pi / n for n in (50, 100, 150, 200, 400, 800))


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    level: str
    checks: list
    seconds: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"level": self.level, "passed": self.passed, "seconds": self.seconds,
                "n_checks": len(self.checks), "n_failed": sum(not c.passed for c in self.checks),
                "checks": [asdict(c) for c in self.checks]}


def table_cells(table: EigenTable) -> list[dict]:
    """Per-cell comparison against ``REFERENCE_TABLE``."""
    out = []
    for j in range(1, 6):
        for m in range(1, 6):
            ref = REFERENCE_TABLE[j - 1][m - 1]
            cell = table.entry(m, j)
            value = cell.c if cell is not None else math.nan
            rel = abs(value - ref) / ref if cell is not None else math.inf
            out.append({"m": m, "j": j, "value": value, "reference": ref,
                        "rel_error": rel, "passed": bool(rel <= TABLE_RTOL)})
    return out


def check_zero_residual(geometry) -> Check:
    zero = lambda x, y: np.zeros(np.broadcast(x, y).shape)
    h = 2.0 * geometry.ell / 8
    rep = biharmonic_residual(zero, zero, geometry, [h, h / 2])
    vals = list(rep.interior_max_residual) + [v for r in rep.bc_max_residual.values() for v in r]
    return Check("zero_solution_residual", all(v == 0.0 for v in vals),
                 {"max_residual": max(vals)})


def check_table(geometry) -> Check:
    t0 = time.perf_counter()
    table = eigen_gap_table(geometry, 5, 5)
    secs = time.perf_counter() - t0
    cells = table_cells(table)
    return Check("table_reproduction", all(c["passed"] for c in cells) and secs < 10.0,
                 {"cells": cells, "seconds": secs})


def check_e_of_ell(geometry) -> Check:
    e = e_of_ell(geometry)
    return Check("e_of_ell_two_digits", f"{e:.2g}" == "0.0065", {"e_of_ell": e})


def check_asymptotics(geometry) -> Check:
    e, c1 = e_of_ell(geometry), first_order_correction(geometry)
    a1, a2 = 1e4, 1e5
    scaled = a1 * (e - e_of_ell_alpha(geometry, a1))
    r1 = abs(e - e_of_ell_alpha(geometry, a1) - c1 / a1)
    r2 = abs(e - e_of_ell_alpha(geometry, a2) - c1 / a2)
    ok = abs(scaled - c1) <= 0.01 * c1 and a2 * r2 < a1 * r1
    return Check("first_order_asymptotics", bool(ok),
                 {"alpha_times_gap_deficit": scaled, "c1": c1, "alpha_r_1e4": a1 * r1,
                  "alpha_r_1e5": a2 * r2})


def check_sweep(geometry, points) -> Check:
    sw = sweep_alpha(geometry, 1.5, 1e6, points)
    below = all(v < sw.limit for v in sw.values)
    return Check("alpha_sweep_monotone", sw.strictly_increasing and below,
                 {"points": points, "last": sw.values[-1], "limit": sw.limit,
                  "nudged": int(sum(sw.nudged))})


def check_brackets(geometry, samples) -> Check:
    bad = []
    for m in range(1, 6):
        for j in range(1, 6):
            lo, hi = eigen_bracket(geometry, m, j)
            found = bracket_scan(geometry, m, lo, hi, samples)
            nu = torsional_eigenvalue(geometry, m, j).nu
            if len(found) != 1 or not found[0][0] <= nu <= found[0][1]:
                bad.append({"m": m, "j": j, "sign_changes": len(found)})
    return Check("bracket_uniqueness", not bad, {"samples": samples, "failures": bad})


def check_residual_oracle(geometry) -> Check:
    h = 2.0 * geometry.ell / 8
    steps = [h, h / 2, h / 4]
    sol = solve_plate(geometry, make_load(geometry, 10.5))
    mode = torsional_eigenvalue(geometry, 1, 1)
    detail, ok = {}, True
    for name, u, f in (("load_alpha_10.5", sol, sol.load_value),
                       ("eigenpair_1_1", mode, lambda x, y: mode.nu * mode(x, y))):
        rep = biharmonic_residual(u, f, geometry, steps)
        free = {k: rep.bc_max_residual[k] for k in ("free_moment", "free_shear")}
        decays = all(v[0] > v[-1] for v in free.values())
        ok &= rep.fitted_order >= 1.7 and decays
        detail[name] = {"fitted_order": rep.fitted_order, "all_node_order": rep.all_node_order,
                        "fixed_node_residual": rep.fixed_node_residual, "free_edge": free}
    return Check("pde_residual_order", bool(ok), detail)


def check_cross_solver() -> Check:
    worst = 0.0
    for ell in CROSS_ELLS:
        for sigma in CROSS_SIGMAS:
            g = PlateGeometry(ell, sigma)
            for alpha in CROSS_ALPHAS:
                a = solve_mode_coefficients(g, alpha, 1, 1.0)
                b = closed_form_m1(g, alpha)
                for f in ("particular", "a", "b", "c", "d"):
                    x, y = getattr(a, f), getattr(b, f)
                    worst = max(worst, abs(x - y) / max(abs(y), 1e-300))
    return Check("cross_solver", worst <= 1e-10, {"max_rel_diff": worst})


def check_symmetry(geometry) -> Check:
    worst_gap, scale = 0.0, 0.0
    for gam in ({1: 1.0}, {1: 1.0, 3: 0.3, 4: -0.2}):
        sol = solve_plate(geometry, make_load(geometry, 0.0, gammas=gam))
        worst_gap = max(worst_gap, gap_profile(sol).g_infinity)
        ys = np.linspace(-geometry.ell, geometry.ell, 5)
        scale = max(scale, float(np.max(np.abs(sol(np.full(5, math.pi / 2), ys)))))
    ys = np.linspace(0.0, geometry.ell, 33)
    parity = 0.0
    for m, j in ((1, 1), (2, 3), (5, 5)):
        mode = torsional_eigenvalue(geometry, m, j)
        parity = max(parity, float(np.max(np.abs(eigenfunction_profile(mode, ys)
                                                 + eigenfunction_profile(mode, -ys)))))
    ok = worst_gap <= 1e-14 * scale and parity <= 1e-13
    return Check("symmetry", bool(ok), {"max_gap_even_load": worst_gap, "displacement_scale": scale,
                                        "profile_parity": parity})


def check_scaling(sigma=0.2) -> Check:
    rep = scaling_exponent_check(sigma, SCALING_ELLS, 1, 1)
    ok = abs(rep.slope - 3.0) <= 0.2 and rep.r_min > 0.0
    return Check("ell_cubed_scaling", bool(ok),
                 {"slope": rep.slope, "ratio_min": rep.r_min, "ratio_max": rep.r_max,
                  "c_values": list(rep.c_values)})


def check_combos(geometry, count=100, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    table = eigen_gap_table(geometry, 5, 5).values()
    c_of = lambda m, j: float(table[j - 1, m - 1])
    bad = 0
    for _ in range(count):
        k = int(rng.integers(1, 6))
        ms = np.sort(rng.choice(np.arange(1, 6), size=k, replace=False))
        j0 = int(rng.integers(1, 6))
        w = rng.dirichlet(np.ones(k)) * rng.uniform(0.2, 1.0) * rng.choice([-1.0, 1.0], size=k)
        spec = ComboSpec(tuple((int(m), j0, float(x)) for m, x in zip(ms, w)))
        res = combo_max_gap(geometry, spec, c_of)
        grid, _ = simplex_grid_max([c_of(m, j0) for m in ms], 100)
        bad += grid > res.max_gap + 1e-12 or res.actual_gap > res.max_gap * (1 + 1e-12)
    return Check("combo_maximizer", bad == 0, {"instances": count, "failures": int(bad)})


def check_weak_limit(geometry) -> Check:
    vals = [weak_limit_residual(geometry, a, lambda x, y: y * np.sin(x)) for a in (1e2, 1e3, 1e4)]
    flat = weak_limit_residual(geometry, 1e3, lambda x, y: np.sin(x) + 0.0 * y)
    ok = vals[0] > vals[1] > vals[2] and flat < 1e-12
    return Check("weak_limit", bool(ok), {"residuals": vals, "sin_residual": flat})


def check_hyperbolic(geometry) -> Check:
    entry = gap_constant(geometry, 3000, 1)
    lo, hi = eigen_bracket(geometry, 3000, 1)
    found = bracket_scan(geometry, 3000, lo, hi, 10_000)
    ok = entry.branch.value == "hyperbolic" and len(found) == 1 and found[0][0] <= entry.nu <= found[0][1]
    return Check("hyperbolic_branch", bool(ok), {"nu": entry.nu, "c": entry.c})


def run_suite(level: str = "fast", geometry: PlateGeometry | None = None) -> SuiteReport:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    g = PlateGeometry.reference() if geometry is None else geometry
    t0 = time.perf_counter()
    checks = [check_zero_residual(g), check_table(g), check_e_of_ell(g), check_asymptotics(g),
              check_sweep(g, 200), check_brackets(g, 10_000), check_residual_oracle(g),
              check_cross_solver(), check_symmetry(g)]
    if level == "full":
        checks += [check_scaling(g.sigma), check_combos(g), check_weak_limit(g),
                   check_hyperbolic(g)]
    return SuiteReport(level, checks, time.perf_counter() - t0)
