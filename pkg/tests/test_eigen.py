import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plategap import (Branch, BracketError, ComboSpec, DegenerateConfigurationError, PlateError,
                      PlateGeometry, PoleError, adaptive_simpson, branch_classifier,
                      characteristic_residual, combo_max_gap, critical_s, eigen_bracket,
                      eigen_gap_table, eigenfunction_profile, gap_constant, l1_norm,
                      scaling_exponent_check, torsional_eigenvalue)
from plategap.eigen import pole_distance, profile_zeros

# 10^6-sample sign scan of Z on the (1,1) bracket, refined by bisection
NU_11 = 10943.629551933543

MODES = [(m, j) for m in range(1, 6) for j in range(1, 6)]


def test_critical_s(geo):
    s = critical_s(geo)
    assert 2.5e3 < s < 3e3
    t = math.sqrt(2) * s * geo.ell
    assert math.tanh(t) == pytest.approx((0.2 / 1.8) ** 2 * t, rel=1e-12)


@pytest.mark.parametrize("m", range(1, 6))
def test_small_modes_trig(geo, m):
    assert branch_classifier(geo, m) is Branch.TRIG


def test_large_mode_hyperbolic(geo):
    assert branch_classifier(geo, 3000) is Branch.HYPERBOLIC


def test_degenerate_threshold():
    # choose ell so that m = 7 sits exactly on the threshold
    base = PlateGeometry(1.0, 0.2)
    ell = critical_s(base) * 1.0 / 7
    with pytest.raises(DegenerateConfigurationError):
        branch_classifier(PlateGeometry(ell, 0.2), 7)


@pytest.mark.parametrize("m,j", MODES)
def test_eigenvalue_inside_bracket(geo, m, j):
    mode = torsional_eigenvalue(geo, m, j)
    lo, hi = eigen_bracket(geo, m, j)
    assert lo < mode.nu < hi
    assert mode.nu > m**4
    assert mode.branch is Branch.TRIG


@pytest.mark.parametrize("m,j", MODES)
def test_residual_small(geo, m, j):
    mode = torsional_eigenvalue(geo, m, j)
    lo, hi = eigen_bracket(geo, m, j)
    zl = characteristic_residual(geo, m, (math.sqrt(lo) * (1 + 1e-8)) ** 2)
    zh = characteristic_residual(geo, m, (math.sqrt(hi) * (1 - 1e-8)) ** 2)
    assert zl > 0.0 > zh
    assert abs(characteristic_residual(geo, m, mode.nu)) <= 1e-9 * max(abs(zl), abs(zh))


def test_nu11_fixture(geo):
    assert torsional_eigenvalue(geo, 1, 1).nu == pytest.approx(NU_11, rel=1e-13)


def test_residual_rejects_pole(geo):
    w = math.pi / geo.ell
    s_pole = 1.0 + (w * 0.5) ** 2
    with pytest.raises(PoleError):
        characteristic_residual(geo, 1, s_pole**2)
    assert pole_distance(geo, 1, s_pole) == 0.0


def test_residual_below_floor(geo):
    with pytest.raises(PlateError):
        characteristic_residual(geo, 2, 0.5 * 16)


def test_hyperbolic_mode(geo):
    m = 3000
    lo, hi = eigen_bracket(geo, m, 1)
    assert lo == pytest.approx((1 - 0.04) * m**4)
    assert hi == m**4
    assert characteristic_residual(geo, m, lo * (1 + 1e-8)) * characteristic_residual(
        geo, m, hi * (1 - 1e-8)) < 0.0
    mode = torsional_eigenvalue(geo, m, 1)
    assert mode.branch is Branch.HYPERBOLIC
    assert lo < mode.nu < hi
    assert eigenfunction_profile(mode, geo.ell) == pytest.approx(2 * mode.sqrt_nu, rel=1e-12)


class TestProfile:
    @pytest.mark.parametrize("m,j", [(1, 1), (2, 2), (5, 5)])
    def test_endpoint_values(self, geo, m, j):
        mode = torsional_eigenvalue(geo, m, j)
        assert eigenfunction_profile(mode, 0.0) == 0.0
        assert eigenfunction_profile(mode, geo.ell) == pytest.approx(2 * mode.sqrt_nu, rel=1e-12)
        assert eigenfunction_profile(mode, -geo.ell) == pytest.approx(-2 * mode.sqrt_nu, rel=1e-12)

    @pytest.mark.parametrize("j", range(1, 6))
    def test_zero_count(self, geo, j):
        assert len(profile_zeros(torsional_eigenvalue(geo, 1, j))) == j - 1

    @given(st.floats(0.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_odd(self, t):
        geo = PlateGeometry.reference()
        mode = torsional_eigenvalue(geo, 2, 3)
        y = t * geo.ell
        assert eigenfunction_profile(mode, y) == -eigenfunction_profile(mode, -y)

    def test_outside(self, geo):
        mode = torsional_eigenvalue(geo, 1, 1)
        with pytest.raises(PlateError):
            eigenfunction_profile(mode, 2 * geo.ell)

    def test_mode_callable(self, geo):
        mode = torsional_eigenvalue(geo, 3, 1)
        assert mode(math.pi, geo.ell) == 0.0
        assert mode(math.pi / 6, geo.ell) == pytest.approx(2 * mode.sqrt_nu, rel=1e-12)


class TestNorm:
    def test_sign_definite_j1(self, geo):
        mode = torsional_eigenvalue(geo, 1, 1)
        direct = adaptive_simpson(lambda y: eigenfunction_profile(mode, y), 0.0, geo.ell,
                                  1e-13, 1e-300).value
        assert l1_norm(mode) == pytest.approx(4.0 * abs(direct), rel=1e-11)

    def test_matches_table_inversion(self, geo):
        norm = l1_norm(torsional_eigenvalue(geo, 1, 1))
        assert norm == pytest.approx(4.0 / (math.sqrt(NU_11) * 4.3629e-3), rel=5e-4)

    def test_two_dimensional_quadrature(self, geo):
        # integrate |w| over the plate directly, x-factor not factored out
        mode = torsional_eigenvalue(geo, 3, 2)
        cuts = [0.0, *profile_zeros(mode), geo.ell]
        iy = sum(abs(adaptive_simpson(lambda y: eigenfunction_profile(mode, y), a, b,
                                      1e-12, 1e-300).value) for a, b in zip(cuts, cuts[1:]))
        ix = sum(adaptive_simpson(lambda x: np.abs(np.sin(3 * x)), k * math.pi / 3,
                                  (k + 1) * math.pi / 3, 1e-12, 1e-300).value for k in range(3))
        assert ix == pytest.approx(2.0, rel=1e-12)
        assert l1_norm(mode) == pytest.approx(2 * ix * iy, rel=1e-10)


class TestTable:
    def test_definition(self, table):
        for row in table.cells:
            for e in row:
                assert e.c * math.sqrt(e.nu) * e.l1_norm == pytest.approx(4.0, rel=1e-12)

    @pytest.mark.parametrize("m,j,ref", [(1, 1, 4.3629e-3), (2, 1, 1.0904e-3), (1, 2, 4.3566e-8)])
    def test_examples(self, geo, m, j, ref):
        assert gap_constant(geo, m, j).c == pytest.approx(ref, rel=5e-4)

    def test_monotone(self, table):
        v = table.values()
        assert np.all(np.diff(v, axis=1) < 0.0)
        assert np.all(np.diff(v, axis=0) < 0.0)
        assert np.unravel_index(np.argmax(v), v.shape) == (0, 0)

    def test_entry_and_errors(self, table):
        assert table.entry(3, 2) is table.cells[1][2]
        assert table.errors == {}

    def test_bad_size(self, geo):
        with pytest.raises(ValueError):
            eigen_gap_table(geo, 0, 3)

    def test_ratio_example(self, table, geo):
        assert table.entry(1, 1).c / geo.ell**3 == pytest.approx(474.9, rel=1e-3)


class TestScaling:
    def test_report_shape(self):
        ells = [math.pi / 100, math.pi / 200]
        rep = scaling_exponent_check(0.2, ells, 1, 1)
        assert rep.ells == tuple(ells)
        assert rep.ratios[0] == pytest.approx(rep.c_values[0] / ells[0] ** 3)

    def test_second_branch_is_cubic(self):
        ells = [math.pi / n for n in (50, 100, 200, 400)]
        rep = scaling_exponent_check(0.2, ells, 1, 2)
        assert rep.slope == pytest.approx(3.0, abs=0.05)
        assert rep.r_max / rep.r_min < 1.1

    def test_first_branch_is_linear(self):
        # C_11 ~ ell / (6 (1 - sigma)) for thin plates
        ells = [math.pi / n for n in (100, 200, 400, 800)]
        rep = scaling_exponent_check(0.2, ells, 1, 1)
        assert rep.slope == pytest.approx(1.0, abs=0.01)
        for e, c in zip(rep.ells, rep.c_values):
            assert c == pytest.approx(e / (6 * 0.8), rel=2e-2)

    @pytest.mark.parametrize("ells", [[math.pi / 10, math.pi / 50], [0.01]])
    def test_bad_grid(self, ells):
        with pytest.raises((PlateError, ValueError)):
            scaling_exponent_check(0.2, ells)


class TestCombo:
    def test_single_mode(self, geo, c_lookup):
        res = combo_max_gap(geo, ComboSpec(((1, 1, 1.0),)), c_lookup)
        assert res.max_gap == pytest.approx(4.3629e-3, rel=5e-4)
        assert res.actual_gap == pytest.approx(res.max_gap, rel=1e-12)

    def test_two_modes(self, geo, c_lookup):
        res = combo_max_gap(geo, ComboSpec(((3, 1, 0.4), (2, 1, -0.5))), c_lookup)
        assert (res.m_o, res.j_o) == (2, 1)
        assert res.max_gap == pytest.approx(1.0904e-3, rel=5e-4)
        assert res.argmax_weights == ((2, 1.0), (3, 0.0))

    def test_equal_weights(self, geo, c_lookup):
        res = combo_max_gap(geo, ComboSpec(((1, 1, 0.5), (2, 1, 0.5))), c_lookup)
        c1, c2 = c_lookup(1, 1), c_lookup(2, 1)
        assert res.max_gap == c1
        assert res.actual_gap <= 0.5 * c1 + 0.5 * c2
        xs = np.linspace(0.0, math.pi, 200001)
        dense = np.max(np.abs(0.5 * c1 * np.sin(xs) + 0.5 * c2 * np.sin(2 * xs)))
        assert res.actual_gap == pytest.approx(dense, rel=1e-9)
        assert res.actual_gap >= dense

    def test_default_lookup(self, geo):
        res = combo_max_gap(geo, ComboSpec(((4, 2, 0.3),)))
        assert res.max_gap == pytest.approx(4.3509e-8, rel=5e-4)

    @pytest.mark.parametrize("entries", [((1, 1, 0.6), (2, 1, 0.6)), ((1, 1, 0.5), (1, 2, 0.2)),
                                         ((1, 1, 0.0),), ((0, 1, 0.5),), (), ((1, 1, math.nan),)])
    def test_bad_specs(self, entries):
        with pytest.raises(PlateError):
            ComboSpec(entries)

    def test_not_nonincreasing(self, geo):
        spec = ComboSpec(((1, 1, 0.5), (2, 1, 0.5)))
        with pytest.raises(PlateError, match="nonincreasing"):
            combo_max_gap(geo, spec, lambda m, j: float(m))


def test_no_sign_change_raises(monkeypatch, geo):
    from plategap import eigen
    monkeypatch.setattr(eigen.kernels, "find_root", lambda *a: (math.nan, 0, False))
    with pytest.raises(BracketError, match="no sign change"):
        torsional_eigenvalue(geo, 1, 1)
