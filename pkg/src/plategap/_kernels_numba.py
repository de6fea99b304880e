"""numba-compiled versions of the hot kernels (same signatures as ``_kernels_numpy``)."""
import math

import numpy as np
from numba import njit

from . import _kernels_numpy as _ref

z_scalar = njit(cache=True)(_ref.z_scalar)
_trig_eval = njit(cache=True)(_ref._trig_eval)


@njit(cache=True)
def _find_root(m, ell, sigma, hyperbolic, lo, hi, rtol, maxiter):
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
        if not (a < cand < b) or (it % 3 == 0 and width > 0.5 * width_old):
            cand = 0.5 * (a + b)
        elif abs(cand - x1) < 0.5 * tol:
            if (cand - a) < (b - cand):
                cand = x1 + 0.5 * tol
            else:
                cand = x1 - 0.5 * tol
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


def find_root(m, ell, sigma, hyperbolic, lo, hi, rtol, maxiter):
    r, it, ok = _find_root(int(m), float(ell), float(sigma), bool(hyperbolic),
                           float(lo), float(hi), float(rtol), int(maxiter))
    return float(r), int(it), bool(ok)


@njit(cache=True)
def _z_values(s, m, ell, sigma, hyperbolic):
    out = np.empty(s.size)
    for i in range(s.size):
        out[i] = z_scalar(s[i], m, ell, sigma, hyperbolic)
    return out


def z_values(s, m, ell, sigma, hyperbolic):
    s = np.asarray(s, dtype=float)
    return _z_values(s.ravel(), int(m), float(ell), float(sigma),
                     bool(hyperbolic)).reshape(s.shape)


@njit(cache=True)
def _stencil13(u, hx, hy):
    ny, nx = u.shape
    out = np.empty((ny - 4, nx - 4))
    hx4 = hx ** 4
    hy4 = hy ** 4
    hxy = hx * hx * hy * hy
    for j in range(2, ny - 2):
        for i in range(2, nx - 2):
            c = u[j, i]
            d4x = u[j, i - 2] - 4.0 * u[j, i - 1] + 6.0 * c - 4.0 * u[j, i + 1] + u[j, i + 2]
            d4y = u[j - 2, i] - 4.0 * u[j - 1, i] + 6.0 * c - 4.0 * u[j + 1, i] + u[j + 2, i]
            lm = u[j - 1, i - 1] - 2.0 * u[j - 1, i] + u[j - 1, i + 1]
            l0 = u[j, i - 1] - 2.0 * c + u[j, i + 1]
            lp = u[j + 1, i - 1] - 2.0 * u[j + 1, i] + u[j + 1, i + 1]
            out[j - 2, i - 2] = d4x / hx4 + 2.0 * (lm - 2.0 * l0 + lp) / hxy + d4y / hy4
    return out


def stencil13(u, hx, hy):
    return _stencil13(np.ascontiguousarray(u, dtype=float), float(hx), float(hy))


@njit(cache=True)
def _trig_abs_max(ms, amps, n_samples, n_bisect):
    best = -1.0
    best_x = 0.0
    ibest = 0
    step = math.pi / (n_samples - 1)
    for i in range(n_samples):
        x = math.pi if i == n_samples - 1 else i * step
        v = abs(_trig_eval(ms, amps, x)[0])
        if v > best:
            best, best_x, ibest = v, x, i
    lo = max(ibest - 1, 0) * step
    hi = math.pi if ibest + 1 >= n_samples - 1 else (ibest + 1) * step
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
            best, best_x = v, x
    return best_x, best


def trig_abs_max(ms, amps, n_samples, n_bisect):
    x, v = _trig_abs_max(np.asarray(ms, dtype=float), np.asarray(amps, dtype=float),
                         int(n_samples), int(n_bisect))
    return float(x), float(v)


@njit(cache=True)
def _simplex_linear_max(delta, n):
    d = delta.size
    counts = np.zeros(d, dtype=np.int64)
    best_counts = np.zeros(d, dtype=np.int64)
    best = -math.inf
    total = 0
    acc = 0.0
    while True:
        v = acc / n
        if v > best:
            best = v
            best_counts[:] = counts
        # odometer step over {counts >= 0, sum(counts) <= n}
        k = d - 1
        while k >= 0:
            if total < n:
                counts[k] += 1
                total += 1
                acc += delta[k]
                break
            total -= counts[k]
            acc -= delta[k] * counts[k]
            counts[k] = 0
            k -= 1
        if k < 0:
            break
        # re-sum to stop drift from incremental updates
        if counts[d - 1] == 0:
            acc = 0.0
            for i in range(d):
                acc += delta[i] * counts[i]
    return best, best_counts


def simplex_linear_max(delta, n_steps):
    delta = np.asarray(delta, dtype=float)
    n = int(n_steps)
    _, c = _simplex_linear_max(delta, n)
    return float(np.dot(delta, c / n)), c
