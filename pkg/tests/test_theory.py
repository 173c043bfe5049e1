"""
Closed-form moments, symmetric polynomials and the noise covariance.

Proves:
  1. E|h|^(2p) = p! for a unit-power complex Gaussian
  2. d(4, 2, 1) = (7, 70, 930) and the literal sum equals p! h_p(P)
  3. d -> power sums -> Newton-Girard roots recovers the powers
  4. complex and negative roots raise NotIdentifiableError carrying the roots
  5. analytic covariance C_ab = (d_(a+b) - d_a d_b) / N
  6. NoiseCovariance symmetrization, accumulation, PSD check and regularized precision;
     an indefinite matrix is clipped to a positive precision
  7. monte-carlo covariance is reproducible and independent of the worker count
  8. the third-order variance dwarfs the first at N = 512, and a silent noiseless network gives C = 0
"""

import math

import numpy as np
import pytest

from CellSense.errors import (DomainError, InvalidConfigError, NotIdentifiableError, ShapeMismatchError)
from CellSense.spectral import MomentVector
from CellSense.theory import (ANALYTIC, MONTE_CARLO, NoiseCovariance, analytic_covariance, complete_homogeneous,
                              d_to_power_sums, elementary_symmetric, gaussian_abs_moment, newton_girard_roots,
                              noise_covariance, theoretical_d, theoretical_d_grid)


# ── moments ──────────────────────────────────────────────────────────────────

def test_gaussian_abs_moment_is_factorial():
    for p in range(9):
        assert gaussian_abs_moment(p) == pytest.approx(math.factorial(p), rel=1e-14)
    with pytest.raises(DomainError):
        gaussian_abs_moment(-1)


def test_reference_moments():
    np.testing.assert_allclose(theoretical_d((4.0, 2.0, 1.0), 3).values, (7.0, 70.0, 930.0), rtol=1e-14)


def test_literal_sum_matches_symmetric_form():
    rng = np.random.default_rng(0)
    for _ in range(40):
        M = int(rng.integers(1, 6))
        powers = np.sort(rng.uniform(0.0, 5.0, size=M))[::-1]
        literal = theoretical_d(powers, 6).as_array()
        vectorized = theoretical_d_grid(powers[None, :], 6)[0]
        np.testing.assert_allclose(literal, vectorized, rtol=1e-12)


def test_complete_homogeneous_broadcasts():
    h = complete_homogeneous(np.array([[4.0, 2.0, 1.0], [1.0, 1.0, 0.0]]), 2)
    # h_2(1, 1, 0) = 1 + 1 + 1
    np.testing.assert_allclose(h, [[7.0, 35.0], [2.0, 3.0]])


def test_invalid_order():
    with pytest.raises(DomainError):
        theoretical_d((1.0,), 0)


# ── symmetric polynomials ────────────────────────────────────────────────────

def test_power_sums_of_reference():
    S = d_to_power_sums(MomentVector(values=(7.0, 70.0, 930.0)), 3)
    np.testing.assert_allclose(S, (7.0, 21.0, 73.0))


def test_power_sums_need_enough_moments():
    with pytest.raises(ShapeMismatchError):
        d_to_power_sums(MomentVector(values=(7.0, 70.0)), 3)


def test_elementary_symmetric():
    # P = (4, 2, 1): e1 = 7, e2 = 8 + 4 + 2, e3 = 8
    np.testing.assert_allclose(elementary_symmetric((7.0, 21.0, 73.0)), (1.0, 7.0, 14.0, 8.0))


def test_newton_girard_roots():
    np.testing.assert_allclose(newton_girard_roots((7.0, 21.0, 73.0)), (4.0, 2.0, 1.0), atol=1e-8)


def test_zero_root_is_kept():
    np.testing.assert_allclose(newton_girard_roots((3.0, 9.0)), (3.0, 0.0), atol=1e-12)


def test_exact_inversion_from_moments():
    rng = np.random.default_rng(5)
    for _ in range(20):
        powers = np.sort(rng.choice(np.arange(0.5, 6.01, 0.5), size=3, replace=False))[::-1]
        d = theoretical_d(powers, 3)
        np.testing.assert_allclose(newton_girard_roots(d_to_power_sums(d, 3)), powers, atol=1e-8)


def test_complex_roots_not_identifiable():
    # S = (2, 1): x^2 - 2x + 1.5 has complex roots
    with pytest.raises(NotIdentifiableError) as info:
        newton_girard_roots((2.0, 1.0))
    assert info.value.roots is not None
    assert len(info.value.roots) == 2


def test_negative_roots_not_identifiable():
    # roots 2 and -1
    with pytest.raises(NotIdentifiableError):
        newton_girard_roots((1.0, 5.0))


# ── covariance ───────────────────────────────────────────────────────────────

def test_analytic_covariance_single_station():
    # d_p = p! for P = (1,), so C_ab = ((a + b)! - a! b!) / N
    C = analytic_covariance((1.0,), 4, 2)
    np.testing.assert_allclose(C, np.array([[1.0, 4.0], [4.0, 20.0]]) / 4)


def test_analytic_method_accumulates():
    covariance = noise_covariance((4.0, 2.0, 1.0), 256, 3, method=ANALYTIC, accumulations=4)
    np.testing.assert_allclose(covariance.C, analytic_covariance((4.0, 2.0, 1.0), 256, 3) / 4)
    assert covariance.n_eff == 1024
    assert covariance.origin == ANALYTIC
    assert covariance.is_psd()


def test_covariance_symmetrized_and_accumulated():
    covariance = NoiseCovariance(C=[[2.0, 1.0], [0.0, 2.0]], n_eff=16)
    np.testing.assert_allclose(covariance.C, [[2.0, 0.5], [0.5, 2.0]])
    accumulated = covariance.accumulated(2)
    np.testing.assert_allclose(accumulated.C, [[1.0, 0.25], [0.25, 1.0]])
    assert accumulated.n_eff == 32
    with pytest.raises(InvalidConfigError):
        covariance.accumulated(0)


def test_psd_check():
    assert not NoiseCovariance(C=[[1.0, 2.0], [2.0, 1.0]], n_eff=1).is_psd()


def test_precision_of_well_conditioned_matrix():
    C = np.array([[2.0, 0.5], [0.5, 1.0]])
    np.testing.assert_allclose(NoiseCovariance(C=C, n_eff=1).precision(), np.linalg.inv(C))


def test_precision_of_singular_matrix_is_finite():
    precision = NoiseCovariance(C=[[1.0, 1.0], [1.0, 1.0]], n_eff=1).precision()
    assert np.all(np.isfinite(precision))


def test_precision_of_indefinite_matrix_is_positive(caplog):
    covariance = NoiseCovariance(C=[[1.0, 2.0], [2.0, 1.0]], n_eff=1)
    with caplog.at_level("WARNING", logger="CellSense.theory.covariance"):
        precision = covariance.precision()
    assert np.linalg.eigvalsh(precision).min() > 0
    assert "indefinite" in caplog.text


def test_higher_orders_dominate_the_covariance():
    C = noise_covariance((4.0, 2.0, 1.0), 512, 3, method=ANALYTIC).C
    assert C[2, 2] / C[0, 0] > 1e3


@pytest.mark.slow
def test_higher_orders_dominate_the_simulated_covariance():
    C = noise_covariance((4.0, 2.0, 1.0), 512, 3, trials=100).C
    assert C[2, 2] / C[0, 0] > 1e3


def test_silent_noiseless_network_has_no_moment_noise():
    covariance = noise_covariance((0.0,), 32, 2, trials=5)
    assert np.max(np.abs(covariance.C)) < 1e-12


def test_truncated():
    covariance = NoiseCovariance(C=np.diag([1.0, 2.0, 3.0]), n_eff=8)
    assert covariance.truncated(2).K == 2


def test_monte_carlo_covariance_reproducible():
    first = noise_covariance((2.0, 1.0), 32, 2, trials=20)
    second = noise_covariance((2.0, 1.0), 32, 2, trials=20)
    np.testing.assert_array_equal(first.C, second.C)
    assert first.origin == MONTE_CARLO
    assert first.K == 2
    assert first.is_psd()


def test_monte_carlo_covariance_worker_independent():
    serial = noise_covariance((2.0, 1.0), 16, 2, trials=8, workers=1)
    parallel = noise_covariance((2.0, 1.0), 16, 2, trials=8, workers=2)
    np.testing.assert_array_equal(serial.C, parallel.C)


def test_covariance_argument_checks():
    with pytest.raises(InvalidConfigError):
        noise_covariance((1.0,), 16, 1, method="exact")
    with pytest.raises(InvalidConfigError):
        noise_covariance((1.0,), 16, 1, trials=1)
