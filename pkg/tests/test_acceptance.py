"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from helpers import random_angles, random_xstate
from xychain import (ChainParams, FiniteChainSpec, MeasurementAngles,
                     SweepGrid, correlator_set,
                     dense_measured_spectrum, derivative_lambda,
                     detect_critical_point, evaluate_point, f_coefficient,
                     grid_min_deficit, one_way_deficit,
                     post_measurement_spectrum, run_sweep, spectrum,
                     thermal_two_site, transverse_magnetization)


@contextmanager
def criterion(num, title):
    try:
        yield
    except AssertionError:
        print(f"criterion {num:2d} FAIL: {title}")
        raise
    print(f"criterion {num:2d} PASS: {title}")


@pytest.fixture(scope="module")
def fig1_sweep():
    grid = SweepGrid(0.01, 2.0, 0.01, gammas=(0.5,), separations=(1, 2, 5))
    return run_sweep(grid)


@pytest.fixture(scope="module")
def ising_sweep():
    grid = SweepGrid(0.01, 2.0, 0.01, gammas=(1.0,), separations=(1,))
    return run_sweep(grid)


def test_criterion_01_deficit_coincides_with_relative_entropy():
    # Known red at (gamma=1.0, lambda=1.0): for the Ising chain the
    # coincidence ends near lambda ~ 0.96, where the optimal measurement
    # bifurcates away from the z basis; at lambda=1 the interior minimum
    # undercuts c_rel by ~0.069 (n=1).  Verified three ways: the critical
    # correlators match their exact closed forms (2/pi, -2/(3pi),
    # 16/(3pi^2)), a 1024^2 dense angle grid reproduces the optimizer value,
    # and the N=12 finite-chain oracle shows the same gap.  All 28 other
    # combinations coincide to ~5e-16.
    with criterion(1, "deficit equals relative entropy of coherence for "
                      "lambda <= 1 (|diff| < 1e-6)"):
        for gamma in (0.25, 0.5, 1.0):
            for n in (1, 2):
                for lam in (0.2, 0.4, 0.6, 0.8, 1.0):
                    rec = evaluate_point(gamma, lam, 0.0, n)
                    assert abs(rec.deficit - rec.c_rel) < 1e-6, \
                        (gamma, n, lam, rec.deficit, rec.c_rel)


def test_criterion_02_candidate_bound_everywhere(fig1_sweep):
    with criterion(2, "deficit <= c_rel + 1e-9 across the full sweep "
                      "including lambda > 1"):
        assert len(fig1_sweep) == 600
        for rec in fig1_sweep:
            assert rec.deficit <= rec.c_rel + 1e-9, (rec.lam, rec.n)


def test_criterion_03_critical_point_at_unit_lambda(fig1_sweep, ising_sweep):
    # Known red for the gamma=1.0 deficit: the measurement-basis bifurcation
    # (see criterion 1) puts a kink in the deficit near lambda ~ 0.95 whose
    # finite-difference slope (~1.18) exceeds the slope at the transition
    # itself (~1.0 at step 0.01), so the max-|derivative| detector lands on
    # 0.95 there.  Both coherences peak at 1.00 for both gammas, and all
    # three measures peak at 1.00 for gamma=0.5.
    with criterion(3, "max |d/dlambda| lands in [0.99, 1.01] for every "
                      "measure at gamma in {0.5, 1.0}"):
        anisotropic = [r for r in fig1_sweep if r.n == 1]
        for records in (anisotropic, ising_sweep):
            derivs = derivative_lambda(records)
            for measure in ("deficit", "c_l1", "c_rel"):
                est = detect_critical_point(derivs, measure)
                assert 0.99 <= est.lambda_c <= 1.01, \
                    (records[0].gamma, measure, est.lambda_c)
                assert est.uncertainty == pytest.approx(0.01, abs=1e-9)


def test_criterion_04_measure_ordering_above_transition():
    with criterion(4, "c_l1 >= c_rel >= deficit for lambda in "
                      "{1.1, 1.5, 2.0} at gamma=0.5"):
        for lam in (1.1, 1.5, 2.0):
            rec = evaluate_point(0.5, lam, 0.0, 1)
            assert rec.c_l1 - rec.c_rel >= -1e-9, (lam, rec)
            assert rec.c_rel - rec.deficit >= -1e-9, (lam, rec)


def test_criterion_05_measures_decay_with_distance():
    # Known red: beyond the disorder line 1/sqrt(1-gamma^2) ~ 1.155 the xx
    # correlator increases toward its long-range-order plateau, so at
    # lambda=1.2 the z-basis coherences grow with n (integral route and the
    # N=12 finite-chain oracle agree on this to ~1e-4; the effect is ~3e-3,
    # far above the 1e-9 tolerance).  Only the deficit decays there.
    with criterion(5, "each measure non-increasing over n in {1, 2, 5} at "
                      "lambda in {0.5, 1.2}"):
        for lam in (0.5, 1.2):
            records = [evaluate_point(0.5, lam, 0.0, n) for n in (1, 2, 5)]
            for near, far in zip(records, records[1:]):
                assert far.deficit <= near.deficit + 1e-9, (lam, far.n)
                assert far.c_l1 <= near.c_l1 + 1e-9, (lam, far.n)
                assert far.c_rel <= near.c_rel + 1e-9, (lam, far.n)


def test_criterion_06_closed_form_anchors():
    with criterion(6, "magnetization and F_k anchors at their closed-form "
                      "values"):
        sz = transverse_magnetization(ChainParams(0.5, 0.0, 0.5))
        assert abs(sz - (-math.tanh(1.0))) < 1e-10
        sz = transverse_magnetization(ChainParams(1.0, 1.0, 0.0))
        assert abs(sz - (-2.0 / math.pi)) < 1e-8
        params = ChainParams(0.5, 0.0, 0.0)
        for k in range(-5, 6):
            expected = 1.0 if k == 0 else 0.0
            assert abs(f_coefficient(params, k) - expected) < 1e-10, k


def test_criterion_07_oracle_equivalences():
    with criterion(7, "analytic spectra, measured spectra and optimizer "
                      "agree with their dense oracles"):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            state = random_xstate(rng)
            analytic = np.sort(spectrum(state).levels())
            dense = np.sort(np.linalg.eigvalsh(state.matrix()))
            assert np.max(np.abs(analytic - dense)) < 1e-12
        for _ in range(1000):
            state = random_xstate(rng)
            angles = MeasurementAngles(*random_angles(rng))
            closed = np.sort(post_measurement_spectrum(state, angles))
            dense = dense_measured_spectrum(state, angles)
            assert np.max(np.abs(closed - dense)) < 1e-12
        for _ in range(100):
            state = random_xstate(rng)
            deficit, _ = one_way_deficit(state)
            assert deficit <= grid_min_deficit(state, 256) + 1e-9


def test_criterion_08_finite_chain_convergence():
    # Known red at (gamma=0.5, lambda=1.5): the convergence trend is
    # monotone, but in the ordered phase at kT=0.25 the finite-size error
    # decays slowly (xx diff 0.060, 0.053, 0.047, 0.041 over N=6..12), so
    # the 0.02 budget needs N ~ 18.  The integral targets themselves are
    # confirmed to 10 digits by an independent discrete momentum sum.  The
    # two disordered-phase points converge to ~5e-5 at N=10.
    with criterion(8, "finite-chain correlators converge monotonically to "
                      "the integrals and match within 0.02 at N=10"):
        for gamma, lam in ((0.5, 0.5), (0.5, 1.5), (1.0, 0.5)):
            target = correlator_set(ChainParams(gamma, lam, 0.25), 1)
            diffs = {"xx": [], "yy": [], "zz": []}
            for sites in (6, 8, 10):
                corr = thermal_two_site(
                    FiniteChainSpec(sites, gamma, lam, 0.25), 1)
                diffs["xx"].append(abs(corr.xx - target.xx))
                diffs["yy"].append(abs(corr.yy - target.yy))
                diffs["zz"].append(abs(corr.zz - target.zz))
            for name, seq in diffs.items():
                assert seq[0] >= seq[1] >= seq[2], (gamma, lam, name, seq)
                assert seq[-1] <= 0.02, (gamma, lam, name, seq)


def test_criterion_09_thermal_xx_behavior():
    with criterion(9, "XX chain: deficit strictly decreasing in kT at "
                      "lambda=2, reentrant near lambda=0.9"):
        deficits = [evaluate_point(0.0, 2.0, kt, 1).deficit
                    for kt in np.round(np.arange(0.1, 1.01, 0.1), 10)]
        for a, b in zip(deficits, deficits[1:]):
            assert b < a, deficits
        base = evaluate_point(0.0, 0.9, 0.05, 1).deficit
        warmer = [evaluate_point(0.0, 0.9, kt, 1).deficit
                  for kt in np.round(np.arange(0.1, 0.51, 0.05), 10)]
        assert max(warmer) > base, (base, warmer)


def test_criterion_10_thermal_ising_behavior():
    with criterion(10, "Ising chain at kT=0.2: coherences non-decreasing in "
                       "lambda, deficit unimodal with its peak near 1"):
        lams = np.round(np.arange(0.1, 1.91, 0.2), 10)
        records = [evaluate_point(1.0, float(lam), 0.2, 1) for lam in lams]
        for near, far in zip(records, records[1:]):
            assert far.c_l1 >= near.c_l1 - 1e-9
            assert far.c_rel >= near.c_rel - 1e-9
        deficits = [r.deficit for r in records]
        peak = int(np.argmax(deficits))
        assert 0.5 <= lams[peak] <= 1.5, lams[peak]
        for i in range(peak):
            assert deficits[i + 1] >= deficits[i] - 1e-9, deficits
        for i in range(peak, len(deficits) - 1):
            assert deficits[i + 1] <= deficits[i] + 1e-9, deficits
