"""
Power estimators.

Proves:
  1. EstimatorConfig validation and its grid / moment-order defaults
  2. PowerEstimate ordering and squared error
  3. the ordered power grid: node count, ordering, caching, priors
  4. ML and MMSE recover on-grid powers from exact moments
  5. MMSE equals the quadrature posterior mean in one dimension
  6. MMSE tends to the grid centroid when the covariance is huge
  7. MMSE falls back to the ML node, flagged degenerate, when all weights underflow
  8. zero-forcing: exact inversion, NotIdentifiableError on complex roots
  9. classical estimation and its flagged ML fallback
 10. estimate() dispatch
 11. iterative MMSE produces one estimate per step; one step is MMSE at the P_max/2 covariance;
     exact moments keep the trajectory on the truth
 12. estimates ignore the order of the true powers
 13. grid refinement: the single-station error stays within half a step, nested grids keep on-grid truth
 14. ML and MMSE agree as C vanishes
"""

import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad

from CellSense.errors import (InvalidConfigError, NotIdentifiableError)
from CellSense.estimators import (CLASSICAL, ML, MMSE, ZF, EstimatorConfig, PowerEstimate, classical_estimate,
                                  classical_from_moments, estimate, iterative_mmse, ml_estimate, mmse_estimate,
                                  power_grid, recovered_moments, shifted_gram_moments, zf_estimate)
from CellSense.estimators import iterative as iterative_module
from CellSense.estimators.base import SEQUENTIAL
from CellSense.simulation import (NetworkScenario, ReceivedBlock, synthesize)
from CellSense.spectral import MomentVector
from CellSense.theory import (ANALYTIC, NoiseCovariance, noise_covariance, theoretical_d)

TRUTH = (4.0, 2.0, 1.0)
# step 0.25 on [0, 8]: every true power is a node
ON_GRID = EstimatorConfig(P_max=8.0, grid_points=33)


# ── configuration and results ────────────────────────────────────────────────

@pytest.mark.parametrize("kwargs", [
    dict(P_max=0.0),
    dict(grid_points=1),
    dict(K=0),
    dict(prior="jeffreys"),
    dict(covariance_method="bootstrap"),
])
def test_config_validation(kwargs):
    with pytest.raises(InvalidConfigError):
        EstimatorConfig(**kwargs)


def test_config_defaults():
    cfg = EstimatorConfig()
    assert cfg.resolve_grid_points(3) == 64
    assert cfg.resolve_grid_points(4) == 24
    assert cfg.resolve_K(3) == 3
    assert EstimatorConfig(K=5).resolve_K(3) == 5


def test_power_estimate_sorted():
    assert PowerEstimate(powers=(1.0, 4.0, 2.0), method=ZF).powers == (4.0, 2.0, 1.0)


def test_squared_error():
    estimate_ = PowerEstimate(powers=(7.93, 1.62, -2.5), method=CLASSICAL)
    assert estimate_.squared_error(TRUTH) == pytest.approx(3.93 ** 2 + 0.38 ** 2 + 3.5 ** 2)
    assert estimate_.M == 3


# ── grid ─────────────────────────────────────────────────────────────────────

def test_power_grid_nodes():
    grid = power_grid(2, 5, 4.0, 2)
    assert grid.nodes.shape == (math.comb(6, 2), 2)
    assert np.all(grid.nodes[:, 0] >= grid.nodes[:, 1])
    assert grid.step == 1.0
    assert grid.d.shape == (15, 2)
    np.testing.assert_array_equal(grid.log_prior, 0.0)
    assert power_grid(2, 5, 4.0, 2) is grid


def test_sequential_prior():
    grid = power_grid(2, 5, 4.0, 2, SEQUENTIAL)
    assert np.all(np.isfinite(grid.log_prior))
    index = int(np.flatnonzero((grid.nodes[:, 0] == 4.0) & (grid.nodes[:, 1] == 0.0))[0])
    assert grid.log_prior[index] == pytest.approx(-math.log(4.0))


# ── grid estimators ──────────────────────────────────────────────────────────

def test_ml_recovers_on_grid_truth():
    C = noise_covariance(TRUTH, 256, 3, method=ANALYTIC)
    result = ml_estimate(theoretical_d(TRUTH, 3), C, 3, ON_GRID)
    assert result.powers == TRUTH
    assert result.method == ML
    assert result.grid_resolution == 33


def test_mmse_concentrates_on_truth():
    C = NoiseCovariance(C=noise_covariance(TRUTH, 256, 3, method=ANALYTIC).C * 1e-6, n_eff=256)
    result = mmse_estimate(theoretical_d(TRUTH, 3), C, 3, ON_GRID)
    np.testing.assert_allclose(result.powers, TRUTH, atol=1e-6)
    assert not result.degenerate
    assert result.method == MMSE


def test_mmse_matches_quadrature():
    d1, variance, P_max = 3.0, 0.25, 10.0
    cfg = EstimatorConfig(P_max=P_max, grid_points=4001)
    result = mmse_estimate(MomentVector(values=(d1,)), NoiseCovariance(C=[[variance]], n_eff=1), 1, cfg)

    def weight(P):
        return math.exp(-0.5 * (d1 - P) ** 2 / variance)

    numerator, _ = quad(lambda P: P * weight(P), 0.0, P_max, points=[d1])
    denominator, _ = quad(weight, 0.0, P_max, points=[d1])
    assert result.powers[0] == pytest.approx(numerator / denominator, abs=1e-6)


def test_mmse_with_huge_covariance_is_centroid():
    cfg = EstimatorConfig(P_max=8.0, grid_points=9)
    C = NoiseCovariance(C=1e16 * np.eye(2), n_eff=1)
    result = mmse_estimate(MomentVector(values=(3.0, 20.0)), C, 2, cfg)
    np.testing.assert_allclose(result.powers, power_grid(2, 9, 8.0, 2).nodes.mean(axis=0), rtol=1e-8)


def test_mmse_degenerate_posterior():
    cfg = EstimatorConfig(P_max=4.0, grid_points=5)
    result = mmse_estimate(MomentVector(values=(2.1,)), NoiseCovariance(C=[[1e-8]], n_eff=1), 1, cfg)
    assert result.degenerate
    assert result.powers == (2.0,)


# ── algebraic estimators ─────────────────────────────────────────────────────

def test_zf_exact():
    result = zf_estimate(theoretical_d(TRUTH, 3), 3)
    np.testing.assert_allclose(result.powers, TRUTH, atol=1e-8)
    assert result.method == ZF


def test_zf_complex_roots():
    with pytest.raises(NotIdentifiableError):
        zf_estimate(MomentVector(values=(2.0, 5.0)), 2)


def test_classical_exact_moments():
    result = classical_from_moments(theoretical_d(TRUTH, 3), 3, 256)
    np.testing.assert_allclose(result.powers, TRUTH, atol=1e-8)
    assert not result.fallback
    assert result.method == CLASSICAL


def test_classical_fallback_is_flagged():
    cfg = EstimatorConfig(P_max=8.0, grid_points=9)
    result = classical_from_moments(MomentVector(values=(2.0, 5.0)), 2, 64, cfg)
    assert result.fallback
    assert result.method == CLASSICAL
    assert len(result.roots) == 2
    assert all(0.0 <= power <= 8.0 for power in result.powers)


def test_shifted_gram_moments():
    m = shifted_gram_moments(np.sqrt(8.0) * np.eye(8), 0.5, 2)
    np.testing.assert_allclose(m.values, (0.5, 0.25))
    assert m.c == 1.0


def test_classical_estimate_on_block():
    scenario = NetworkScenario(M=2, N=32, L=256, powers=(2.0, 1.0), sigma2=0.01).validate()
    result = classical_estimate(synthesize(scenario, 0), 0.01, 2, EstimatorConfig(P_max=4.0, grid_points=17))
    assert result.M == 2
    assert result.method == CLASSICAL


# ── dispatch ─────────────────────────────────────────────────────────────────

def test_estimate_dispatch():
    d = theoretical_d(TRUTH, 3)
    np.testing.assert_allclose(estimate(ZF, d, 3).powers, TRUTH, atol=1e-8)
    C = noise_covariance(TRUTH, 256, 3, method=ANALYTIC)
    assert estimate(ML, d, 3, ON_GRID, C=C).powers == TRUTH
    assert estimate(CLASSICAL, d, 3, N=256).method == CLASSICAL


def test_estimate_dispatch_errors():
    d = theoretical_d(TRUTH, 3)
    with pytest.raises(InvalidConfigError):
        estimate("bayes", d, 3)
    with pytest.raises(InvalidConfigError):
        estimate(MMSE, d, 3)
    with pytest.raises(InvalidConfigError):
        estimate(CLASSICAL, d, 3)


# ── iterative ────────────────────────────────────────────────────────────────

def _blocks(count: int):
    scenario = NetworkScenario(M=2, N=32, L=64, powers=(2.0, 1.0), sigma2=0.01, master_seed=3).validate()
    return [synthesize(scenario, seed) for seed in range(count)]


def test_recovered_moments():
    d = recovered_moments(_blocks(1)[0], 3)
    assert d.K == 3
    assert d.c == 0.0
    assert d.n_eff == 32


def test_iterative_trajectory():
    cfg = EstimatorConfig(P_max=4.0, grid_points=17, covariance_method=ANALYTIC)
    trajectory = iterative_mmse(_blocks(3), 2, cfg)
    assert len(trajectory) == 3
    assert all(step.method == MMSE and step.M == 2 for step in trajectory)
    assert len(iterative_mmse(_blocks(3), 2, cfg, steps=2)) == 2
    with pytest.raises(InvalidConfigError):
        iterative_mmse(_blocks(2), 2, cfg, steps=3)


def test_single_step_uses_the_midpoint_covariance():
    cfg = EstimatorConfig(P_max=4.0, grid_points=17, covariance_method=ANALYTIC)
    blocks = _blocks(2)
    trajectory = iterative_mmse(blocks, 2, cfg, steps=1)
    C = noise_covariance((2.0, 2.0), 32, 2, method=ANALYTIC)
    assert trajectory == [mmse_estimate(recovered_moments(blocks[0], 2), C, 2, cfg)]


def test_noiseless_moments_give_a_constant_trajectory(monkeypatch):
    # so many carriers that the analytic covariance is far below the grid resolution
    scenario = NetworkScenario(M=3, N=10 ** 15, L=10 ** 15, powers=TRUTH)
    blocks = [ReceivedBlock(Y=np.zeros((1, 1)), channels=None, scenario=scenario, trial_seed=seed) for seed in range(4)]
    monkeypatch.setattr(iterative_module, "recovered_moments", lambda block, K, M=None: theoretical_d(TRUTH, K))
    cfg = EstimatorConfig(P_max=8.0, grid_points=33, covariance_method=ANALYTIC)
    trajectory = iterative_mmse(blocks, 3, cfg)
    assert [step.powers for step in trajectory] == [TRUTH] * 4


# ── invariants ───────────────────────────────────────────────────────────────

def test_estimates_ignore_the_order_of_the_powers():
    C = noise_covariance(TRUTH, 256, 3, method=ANALYTIC)
    reference = theoretical_d(TRUTH, 3)
    for order in itertools.permutations(TRUTH):
        d = theoretical_d(order, 3)
        assert d == reference
        assert mmse_estimate(d, C, 3, ON_GRID) == mmse_estimate(reference, C, 3, ON_GRID)
        assert ml_estimate(d, C, 3, ON_GRID).powers == TRUTH
        np.testing.assert_allclose(zf_estimate(d, 3).powers, TRUTH, atol=1e-8)
    assert NetworkScenario(M=3, N=8, L=8, powers=TRUTH).with_powers((1.0, 4.0, 2.0)).powers == TRUTH


@pytest.mark.parametrize("grid_points", [16, 32, 64])
def test_single_station_error_shrinks_with_the_grid(grid_points):
    cfg = EstimatorConfig(P_max=8.0, grid_points=grid_points)
    step = 8.0 / (grid_points - 1)
    d = MomentVector(values=(2.3,))
    C = NoiseCovariance(C=[[1e-6]], n_eff=1)
    for result in (ml_estimate(d, C, 1, cfg), mmse_estimate(d, C, 1, cfg)):
        assert abs(result.powers[0] - 2.3) <= step / 2 + 1e-12


@pytest.mark.parametrize("grid_points", [17, 33, 65])
def test_nested_grids_keep_on_grid_truth(grid_points):
    cfg = EstimatorConfig(P_max=8.0, grid_points=grid_points)
    C = noise_covariance(TRUTH, 256, 3, method=ANALYTIC)
    assert ml_estimate(theoretical_d(TRUTH, 3), C, 3, cfg).powers == TRUTH


def test_ml_and_mmse_agree_as_the_covariance_vanishes():
    truth = (3.9, 2.1, 1.05)
    C = NoiseCovariance(C=noise_covariance(truth, 256, 3, method=ANALYTIC).C * 1e-6, n_eff=256)
    d = theoretical_d(truth, 3)
    ml = np.asarray(ml_estimate(d, C, 3, ON_GRID).powers)
    mmse = np.asarray(mmse_estimate(d, C, 3, ON_GRID).powers)
    assert np.max(np.abs(ml - mmse)) <= 0.25
