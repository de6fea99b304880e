"""Pure numpy/Python implementations of the hot kernels.

These double as the reference path for the numba versions in
``_kernels_numba``; both modules expose the same function names.
"""
import math
import numpy as np


def z_scalar(s, m, ell, sigma, hyperbolic):
    """Characteristic function Z(s) of the torsional eigenproblem at one point."""
    m2 = m * m
    c = (1.0 - sigma) * m2
    ratio = (s + c) / (s - c)
    p = math.sqrt(s + m2)
    first = ratio * ratio * math.tanh(ell * p) / p
    if hyperbolic:
        q = math.sqrt(m2 - s)
        second = ell if q == 0.0 else math.tanh(ell * q) / q
    else:
        q = math.sqrt(s - m2)
        second = ell if q == 0.0 else math.tan(ell * q) / q
    return first - second


def z_values(s, m, ell, sigma, hyperbolic):
    s = np.asarray(s, dtype=float)
    m2 = float(m * m)
    c = (1.0 - sigma) * m2
    ratio = (s + c) / (s - c)
    p = np.sqrt(s + m2)
    first = ratio * ratio * np.tanh(ell * p) / p
    q = np.sqrt(m2 - s) if hyperbolic else np.sqrt(s - m2)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.tanh(ell * q) / q if hyperbolic else np.tan(ell * q) / q
    t = np.where(q == 0.0, ell, t)
    return first - t


def find_root(m, ell, sigma, hyperbolic, lo, hi, rtol, maxiter):
    """Bisection-safeguarded secant for Z on ``[lo, hi]``.

    Returns ``(root, iterations, converged)``; ``root`` is nan when the
    endpoints do not bracket a sign change.
    """
    fa = z_scalar(lo, m, ell, sigma, hyperbolic)
    fb = z_scalar(hi, m, ell, sigma, hyperbolic)
    if fa == 0.0:
        return lo, 0, True
    if fb == 0.0:
        return hi, 0, True
    if (fa > 0.0) == (fb > 0.0):
        return math.nan, 0, False
    a, b = lo, hi
    x0, f0 = a, fa
    x1, f1 = b, fb
    width_old = b - a
    for it in range(1, maxiter + 1):
        width = b - a
        tol = rtol * max(abs(a), abs(b))
        if width <= tol:
            return 0.5 * (a + b), it, True
        cand = math.nan
        if f1 != f0:
            cand = x1 - f1 * (x1 - x0) / (f1 - f0)
        # bisect when secant leaves the bracket or the bracket stops halving
        if not (a < cand < b) or (it % 3 == 0 and width > 0.5 * width_old):
            cand = 0.5 * (a + b)
        elif abs(cand - x1) < 0.5 * tol:
            cand = x1 + 0.5 * tol if (cand - a) < (b - cand) else x1 - 0.5 * tol
            if not (a < cand < b):
                cand = 0.5 * (a + b)
        if it % 3 == 0:
            width_old = width
        fc = z_scalar(cand, m, ell, sigma, hyperbolic)
        if fc == 0.0:
            return cand, it, True
        if (fc > 0.0) == (fa > 0.0):
            a, fa = cand, fc
        else:
            b, fb = cand, fc
        x0, f0 = x1, f1
        x1, f1 = cand, fc
    return 0.5 * (a + b), maxiter, False


def stencil13(u, hx, hy):
    """13-point discrete biharmonic on the interior nodes of ``u[y, x]``.

    Floating input dtypes (including ``longdouble``) are preserved.
    """
    u = np.asarray(u)
    if u.dtype.kind != "f":
        u = u.astype(float)
    c = u[2:-2, 2:-2]
    d4x = (u[2:-2, :-4] - 4.0 * u[2:-2, 1:-3] + 6.0 * c
           - 4.0 * u[2:-2, 3:-1] + u[2:-2, 4:]) / hx**4
    d4y = (u[:-4, 2:-2] - 4.0 * u[1:-3, 2:-2] + 6.0 * c
           - 4.0 * u[3:-1, 2:-2] + u[4:, 2:-2]) / hy**4
    lx = (u[:, :-2] - 2.0 * u[:, 1:-1] + u[:, 2:]) / hx**2
    lxy = (lx[:-2] - 2.0 * lx[1:-1] + lx[2:]) / hy**2
    return d4x + 2.0 * lxy[1:-1, 1:-1] + d4y


def _trig_eval(ms, amps, x):
    p = 0.0
    dp = 0.0
    for k in range(len(ms)):
        p += amps[k] * math.sin(ms[k] * x)
        dp += amps[k] * ms[k] * math.cos(ms[k] * x)
    return p, dp


def trig_abs_max(ms, amps, n_samples, n_bisect):
    """Max over ``[0, pi]`` of ``|sum amps[k] sin(ms[k] x)|``.

    Dense sampling, then bisection on the sign of ``d|P|/dx`` around the best
    sample. Returns ``(x_star, value)``.
    """
    ms = np.asarray(ms, dtype=float)
    amps = np.asarray(amps, dtype=float)
    xs = np.linspace(0.0, math.pi, n_samples)
    vals = np.abs(np.sin(np.outer(xs, ms)) @ amps)
    i = int(np.argmax(vals))
    best_x, best = float(xs[i]), float(vals[i])
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, n_samples - 1)])
    p, dp = _trig_eval(ms, amps, lo)
    glo = math.copysign(1.0, p) * dp
    p, dp = _trig_eval(ms, amps, hi)
    ghi = math.copysign(1.0, p) * dp
    if glo > 0.0 and ghi < 0.0:
        for _ in range(n_bisect):
            mid = 0.5 * (lo + hi)
            p, dp = _trig_eval(ms, amps, mid)
            if math.copysign(1.0, p) * dp > 0.0:
                lo = mid
            else:
                hi = mid
        x = 0.5 * (lo + hi)
        v = abs(_trig_eval(ms, amps, x)[0])
        if v > best:
            best_x, best = x, v
    return best_x, best


def _compositions(dims, total):
    """All nonnegative integer vectors of length ``dims`` with sum <= total."""
    if dims == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(dims - 1, total - first):
            yield (first,) + rest


def simplex_linear_max(delta, n_steps):
    """Exact max of ``sum delta_k x_k`` over the grid ``x = counts / n_steps``,
    ``counts >= 0``, ``sum(counts) <= n_steps``.

    Every grid point is scored. The last (up to three) coordinates are scored
    in one vectorized table; the leading ones are enumerated.
    Returns ``(value, counts)`` with the value recomputed at the realized
    weights ``counts / n_steps``, so a vertex scores exactly ``delta_k``.
    """
    delta = np.asarray(delta, dtype=float)
    d = delta.size
    n = int(n_steps)
    tail = min(d, 3)
    head = d - tail
    grids = np.indices((n + 1,) * tail).reshape(tail, -1).T
    sums = grids.sum(axis=1)
    keep = sums <= n
    table, sums = grids[keep], sums[keep]
    order = np.argsort(sums, kind="stable")
    table, sums = table[order], sums[order]
    vals = table @ delta[head:] / n
    run = np.maximum.accumulate(vals)
    arg = np.maximum.accumulate(np.where(vals == run, np.arange(vals.size), 0))
    best, best_counts = -math.inf, None
    for h in _compositions(head, n):
        cut = int(np.searchsorted(sums, n - sum(h), side="right"))
        v = (float(np.dot(delta[:head], h)) / n if head else 0.0) + run[cut - 1]
        if v > best:
            best = v
            best_counts = np.concatenate([np.asarray(h, dtype=np.int64),
                                          table[arg[cut - 1]].astype(np.int64)])
    return float(np.dot(delta, best_counts / n)), best_counts

