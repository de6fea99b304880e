import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plategap import (PlateError, PlateGeometry, PoleError, biharmonic_residual, bracket_scan,
                      eigen_bracket, simplex_grid_max, torsional_eigenvalue)
from plategap.oracle import fd_weights


def zero(x, y):
    return np.zeros(np.broadcast(x, y).shape)


def test_zero_solution(geo):
    h = 2 * geo.ell / 8
    rep = biharmonic_residual(zero, zero, geo, [h, h / 2])
    assert all(r == 0.0 for r in rep.interior_max_residual)
    assert all(v == 0.0 for vals in rep.bc_max_residual.values() for v in vals)


def test_polynomial_interior_exact(geo):
    # Delta^2 of x^2 y^2 is 8; the 13-point stencil is exact on quartics
    h = 2 * geo.ell / 8
    rep = biharmonic_residual(lambda x, y: x**2 * y**2, lambda x, y: 8.0 + 0 * x * y, geo,
                              [h, h / 2])
    assert max(rep.interior_max_residual) < 1e-6


def test_too_coarse(geo):
    with pytest.raises(PlateError):
        biharmonic_residual(zero, zero, geo, [geo.ell])


def test_eigenpair_residual_order(geo):
    mode = torsional_eigenvalue(geo, 2, 1)
    h = 2 * geo.ell / 8
    rep = biharmonic_residual(mode, lambda x, y: mode.nu * mode(x, y), geo, [h, h / 2, h / 4])
    assert rep.fitted_order == pytest.approx(2.0, abs=0.15)
    assert rep.fixed_node_residual is not None
    for fam in ("free_moment", "free_shear"):
        v = rep.bc_max_residual[fam]
        assert v[0] > v[1] > v[2]
    # the extended-precision pi node is not math.pi, so sin(m x) there is only ~1e-19
    assert max(rep.bc_max_residual["hinged_u"]) < 1e-15 * mode.sqrt_nu


@pytest.mark.parametrize("deriv,offsets,exact", [
    (1, [-1, 0, 1], [Fraction(-1, 2), 0, Fraction(1, 2)]),
    (2, [-1, 0, 1], [1, -2, 1]),
    (4, [-2, -1, 0, 1, 2], [1, -4, 6, -4, 1]),
    (1, [0, 1, 2], [Fraction(-3, 2), 2, Fraction(-1, 2)]),
])
def test_fd_weights_known(deriv, offsets, exact):
    w = fd_weights(deriv, offsets)
    assert np.array_equal(w, np.array([float(e) for e in exact]))


@given(st.integers(1, 3), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_fd_weights_moments(deriv, shift):
    offsets = list(range(-shift, -shift + deriv + 5))
    w = fd_weights(deriv, offsets, dtype=np.longdouble)
    for p in range(len(offsets)):
        moment = sum(wi * np.longdouble(o) ** p for wi, o in zip(w, offsets))
        expected = math.factorial(deriv) if p == deriv else 0
        assert abs(float(moment) - expected) < 1e-12 * max(1, max(abs(o) for o in offsets) ** p)


def test_fd_weights_too_few():
    with pytest.raises(ValueError):
        fd_weights(3, [0, 1, 2])


class TestBracketScan:
    @pytest.mark.parametrize("m,j", [(1, 1), (3, 2), (5, 5)])
    def test_single_change(self, geo, m, j):
        lo, hi = eigen_bracket(geo, m, j)
        found = bracket_scan(geo, m, lo, hi, 2000)
        assert len(found) == 1
        assert found[0][0] <= torsional_eigenvalue(geo, m, j).nu <= found[0][1]

    def test_several_brackets(self, geo):
        lo, _ = eigen_bracket(geo, 1, 1)
        _, hi = eigen_bracket(geo, 1, 3)
        found = bracket_scan(geo, 1, lo, hi, 20000)
        assert len(found) == 3

    def test_empty_below_floor(self, geo):
        assert bracket_scan(geo, 2, 1.0, 2.0, 100) == []

    def test_all_near_pole(self, geo):
        w = math.pi / geo.ell
        sp = 1.0 + (w * 0.5) ** 2
        with pytest.raises(PoleError):
            bracket_scan(geo, 1, (sp * (1 - 1e-10)) ** 2, (sp * (1 + 1e-10)) ** 2, 10)

    def test_hyperbolic(self, geo):
        lo, hi = eigen_bracket(geo, 3000, 1)
        found = bracket_scan(geo, 3000, lo, hi, 5000)
        assert len(found) == 1

    @pytest.mark.parametrize("args", [(10.0, 5.0, 10), (1.0, 2.0, 1)])
    def test_bad_arguments(self, geo, args):
        with pytest.raises(ValueError):
            bracket_scan(geo, 1, *args)


def brute_simplex(deltas, n):
    best = -math.inf
    for counts in itertools.product(range(n + 1), repeat=len(deltas)):
        if sum(counts) <= n:
            best = max(best, sum(d * c / n for d, c in zip(deltas, counts)))
    return best


@given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=4), st.integers(1, 8))
@settings(max_examples=60, deadline=None)
def test_simplex_matches_brute_force(deltas, n):
    value, weights = simplex_grid_max(deltas, n)
    assert value == pytest.approx(brute_simplex(deltas, n), abs=1e-15)
    assert weights.sum() <= 1.0 + 1e-15
    assert value == pytest.approx(float(np.dot(deltas, weights)), abs=1e-15)


def test_simplex_vertex_exact():
    deltas = [4.3629e-3, 1.0904e-3, 4.8439e-4]
    value, weights = simplex_grid_max(deltas, 100)
    assert value == deltas[0]
    assert list(weights) == [1.0, 0.0, 0.0]


def test_simplex_all_negative():
    value, weights = simplex_grid_max([-1.0, -2.0], 10)
    assert value == 0.0
    assert not weights.any()
