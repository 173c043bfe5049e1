import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import (dataclass, replace)
from typing import Sequence

import numpy as np

from .moments import theoretical_d
from ..errors import InvalidConfigError
from ..freeprob.pipeline import recover_hph_moments
from ..simulation.received import synthesize
from ..simulation.scenario import NetworkScenario
from ..spectral.moments import empirical_moments
from ..utils import (COVARIANCE_SEED_INDEX, derive_trial_seed)

logger = logging.getLogger(__name__)

MONTE_CARLO: str = "monte-carlo"
ANALYTIC: str = "analytic"
COVARIANCE_METHODS: tuple[str, ...] = (MONTE_CARLO, ANALYTIC)

CONDITION_LIMIT: float = 1e12
REGULARIZATION: float = 1e-8


@dataclass(frozen=True)
class NoiseCovariance:
    """
    Covariance of the error w = d_observed - d_theory of recovered moments.

    Attributes:
        C: K x K symmetric positive-semidefinite matrix.
        n_eff: effective subcarrier count C was computed for.
        origin: ``monte-carlo`` or ``analytic``.
    """
    C: np.ndarray
    n_eff: int
    origin: str = MONTE_CARLO

    def __post_init__(self) -> None:
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        if C.shape[0] != C.shape[1]:
            raise InvalidConfigError(f"noise covariance must be square, got shape {C.shape}")
        object.__setattr__(self, "C", 0.5 * (C + C.T))

    @property
    def K(self) -> int:
        return self.C.shape[0]

    def is_psd(self) -> bool:
        eigenvalues: np.ndarray = np.linalg.eigvalsh(self.C)
        return bool(eigenvalues.min() >= -1e-10 * max(np.linalg.norm(self.C), np.finfo(float).tiny))

    def accumulated(self, k: int) -> "NoiseCovariance":
        """Covariance of moments averaged over k independent blocks: C/k for k*n_eff carriers."""
        if k < 1:
            raise InvalidConfigError(f"accumulation factor must be at least 1, got {k}")
        return replace(self, C=self.C / k, n_eff=self.n_eff * k)

    def truncated(self, K: int) -> "NoiseCovariance":
        return replace(self, C=self.C[:K, :K])

    def precision(self) -> np.ndarray:
        """
        Inverse of C, regularized by adding 1e-8 diag(C) when the condition number exceeds 1e12.

        An indefinite C (rounding makes large-K covariances slightly so) first has its negative
        eigenvalues clipped to zero so the precision stays positive semidefinite.
        """
        C: np.ndarray = self.C
        if not self.is_psd():
            logger.warning("noise covariance is indefinite, clipping its negative eigenvalues")
            eigenvalues, vectors = np.linalg.eigh(C)
            C = (vectors * np.clip(eigenvalues, 0.0, None)) @ vectors.T
        if np.linalg.cond(C) > CONDITION_LIMIT:
            logger.info("noise covariance ill-conditioned, regularizing")
            diagonal: np.ndarray = np.diag(C)
            floor: float = max(float(np.max(diagonal)), np.finfo(float).tiny)
            C = C + REGULARIZATION * np.diag(np.where(diagonal > 0, diagonal, floor))
        return np.linalg.pinv(C, hermitian=True)


def _recovered_error(scenario: NetworkScenario, trial_seed: int, K: int, d_theory: np.ndarray) -> np.ndarray:
    block = synthesize(scenario, trial_seed)
    m_Y = empirical_moments(block.Y, K)
    d = recover_hph_moments(m_Y, scenario.N, scenario.L, scenario.M, scenario.sigma2)
    return d.as_array() - d_theory


def _recovered_error_job(job: tuple[NetworkScenario, int, int, np.ndarray]) -> np.ndarray:
    return _recovered_error(*job)


def analytic_covariance(powers: Sequence[float], N: int, K: int) -> np.ndarray:
    """
    Channel-sampling covariance of the finite-N moments for carriers with independent gains.

    Averaging N independent copies of X = sum_k P_k |h_k|^2 gives
    C_ab = (d_{a+b} - d_a d_b) / N.
    """
    d: np.ndarray = np.concatenate([[1.0], theoretical_d(powers, 2 * K).as_array()])
    orders: np.ndarray = np.arange(1, K + 1)
    return (d[orders[:, None] + orders[None, :]] - np.outer(d[orders], d[orders])) / N


def noise_covariance(
        powers: Sequence[float],
        N: int,
        K: int,
        trials: int = 200,
        method: str = MONTE_CARLO,
        template: NetworkScenario = None,
        accumulations: int = 1,
        workers: int = 1,
) -> NoiseCovariance:
    """
    Covariance of recovered moments at hypothesized powers.

    ``monte-carlo`` runs synthesize -> empirical_moments -> recover_hph_moments ``trials``
    times and returns the sample covariance of d - d_theory, so it captures the free
    deconvolution residuals as well as channel sampling. ``analytic`` evaluates
    :func:`analytic_covariance`.

    :param powers: Hypothesized station powers.
    :param N: Subcarrier count of one block.
    :param K: Moment order.
    :param trials: Number of simulated blocks (monte-carlo only), at least 2.
    :param method: ``monte-carlo`` or ``analytic``.
    :param template: Scenario supplying L, sigma2, channel model, alphabet and master seed.
                     Defaults to L = 2N, no noise, i.i.d. channels.
    :param accumulations: Number of blocks whose moments are averaged; C is divided by it.
    :param workers: Processes used for the monte-carlo trials.
    :raises InvalidConfigError: On an unknown method or fewer than 2 trials.
    """
    if method not in COVARIANCE_METHODS:
        raise InvalidConfigError(f"covariance method must be one of {COVARIANCE_METHODS}, got {method!r}")
    if method == ANALYTIC:
        covariance = NoiseCovariance(C=analytic_covariance(powers, N, K), n_eff=N, origin=ANALYTIC)
        return covariance.accumulated(accumulations)
    if trials < 2:
        raise InvalidConfigError(f"monte-carlo covariance needs at least 2 trials, got {trials}")

    if template is None:
        template = NetworkScenario(M=len(powers), N=N, L=2 * N, powers=tuple(powers))
    master_seed: int = derive_trial_seed(template.master_seed, COVARIANCE_SEED_INDEX)
    scenario: NetworkScenario = replace(template.with_powers(powers), N=N, master_seed=master_seed).validate()
    d_theory: np.ndarray = theoretical_d(scenario.powers, K).as_array()
    jobs = [(scenario, derive_trial_seed(master_seed, trial), K, d_theory) for trial in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = list(pool.map(_recovered_error_job, jobs))
    else:
        errors = [_recovered_error_job(job) for job in jobs]
    C: np.ndarray = np.atleast_2d(np.cov(np.asarray(errors), rowvar=False, ddof=1))
    logger.debug("monte-carlo covariance diag %s at powers %s", np.diag(C), scenario.powers)
    return NoiseCovariance(C=C, n_eff=N, origin=MONTE_CARLO).accumulated(accumulations)
