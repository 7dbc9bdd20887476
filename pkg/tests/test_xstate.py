"""X-form state assembly, closed-form spectra and marginals."""

import numpy as np
import pytest

from helpers import random_xstate
from xychain import (CorrelatorSet, PhysicalityError, XState, assemble,
                     diagonal_spectrum, single_spin_reduced, spectrum)

MIXED = XState(sz=0.0, xx=0.0, yy=0.0, zz=0.0)
X_CORRELATED = XState(sz=0.0, xx=1.0, yy=0.0, zz=0.0)
PRODUCT = XState(sz=-1.0, xx=0.0, yy=0.0, zz=1.0)


def corr(sz, xx, yy, zz, n=1):
    return CorrelatorSet(n=n, sz=sz, xx=xx, yy=yy, zz=zz)


class TestAssemble:
    def test_maximally_mixed(self):
        state = assemble(corr(0.0, 0.0, 0.0, 0.0))
        assert np.allclose(state.matrix(), np.eye(4) / 4.0)

    def test_x_correlated(self):
        state = assemble(corr(0.0, 1.0, 0.0, 0.0))
        m = state.matrix()
        assert np.allclose(np.diag(m), 0.25)
        assert m[0, 3] == m[1, 2] == 0.25
        assert sorted(np.linalg.eigvalsh(m)) == pytest.approx(
            [0.0, 0.0, 0.5, 0.5], abs=1e-15)

    def test_pure_product(self):
        state = assemble(corr(-1.0, 0.0, 0.0, 1.0))
        assert np.allclose(state.matrix(), np.diag([0.0, 0.0, 0.0, 1.0]))

    def test_rejects_unphysical(self):
        with pytest.raises(PhysicalityError):
            assemble(corr(0.0, 1.0, 1.0, 0.0))

    def test_clamps_quadrature_noise(self):
        state = assemble(corr(0.0, 1.0 + 5e-13, 0.0, 0.0))
        assert min(spectrum(state).levels()) == 0.0

    def test_matrix_properties(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            m = random_xstate(rng).matrix()
            assert np.trace(m) == pytest.approx(1.0, abs=1e-15)
            assert np.allclose(m, m.T)
            # X form: nothing off the two diagonals
            mask = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))
            assert np.all(m[~mask] == 0.0)

    def test_swap_symmetry(self):
        swap = np.zeros((4, 4))
        swap[0, 0] = swap[3, 3] = swap[1, 2] = swap[2, 1] = 1.0
        rng = np.random.default_rng(2)
        for _ in range(20):
            m = random_xstate(rng).matrix()
            assert np.allclose(swap @ m @ swap, m, atol=1e-15)


class TestSpectrum:
    def test_maximally_mixed(self):
        pair = spectrum(MIXED)
        assert pair.eta == pytest.approx((0.25, 0.25), abs=1e-15)
        assert pair.xi == pytest.approx((0.25, 0.25), abs=1e-15)

    def test_x_correlated(self):
        pair = spectrum(X_CORRELATED)
        assert pair.eta == pytest.approx((0.5, 0.0), abs=1e-15)
        assert pair.xi == pytest.approx((0.5, 0.0), abs=1e-15)

    def test_matches_dense_eigensolve(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            state = random_xstate(rng)
            analytic = np.sort(spectrum(state).levels())
            dense = np.sort(np.linalg.eigvalsh(state.matrix()))
            assert np.max(np.abs(analytic - dense)) < 1e-12

    def test_closure(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            levels = spectrum(random_xstate(rng)).levels()
            assert sum(levels) == pytest.approx(1.0, abs=1e-12)
            assert all(v >= 0.0 for v in levels)


class TestDiagonalSpectrum:
    def test_maximally_mixed(self):
        assert diagonal_spectrum(MIXED) == pytest.approx((0.25,) * 4, abs=1e-15)

    def test_pure_product(self):
        assert diagonal_spectrum(PRODUCT) == pytest.approx(
            (0.0, 1.0, 0.0, 0.0), abs=1e-15)

    def test_equals_matrix_diagonal_and_sums_to_one(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            state = random_xstate(rng)
            zeta0, zeta1, eps0, eps1 = diagonal_spectrum(state)
            diag = np.diag(state.matrix())
            assert (zeta0, eps0, eps1, zeta1) == pytest.approx(tuple(diag), abs=1e-15)
            assert zeta0 + zeta1 + eps0 + eps1 == pytest.approx(1.0, abs=1e-12)


class TestSingleSpinReduced:
    def test_unpolarized(self):
        assert single_spin_reduced(MIXED) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_fully_polarized(self):
        assert single_spin_reduced(PRODUCT) == pytest.approx((0.0, 1.0), abs=1e-15)

    def test_matches_partial_trace(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            state = random_xstate(rng)
            m = state.matrix().reshape(2, 2, 2, 2)
            for axes in (((1, 3)), ((0, 2))):   # trace out either site
                reduced = np.trace(m, axis1=axes[0], axis2=axes[1])
                assert single_spin_reduced(state) == pytest.approx(
                    tuple(np.diag(reduced)), abs=1e-14)
