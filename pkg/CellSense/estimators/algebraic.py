import logging

import numpy as np

from .base import (CLASSICAL, ZF, EstimatorConfig, PowerEstimate)
from .bayesian import ml_estimate
from ..errors import (NotIdentifiableError, NumericInputError)
from ..simulation.received import ReceivedBlock
from ..spectral.moments import MomentVector
from ..theory.covariance import (ANALYTIC, NoiseCovariance, noise_covariance)
from ..theory.symmetric import (d_to_power_sums, newton_girard_roots)

logger = logging.getLogger(__name__)


def zf_estimate(d_obs: MomentVector, M: int) -> PowerEstimate:
    """
    Solve d_p(P) = d_obs_p, p = 1..M, exactly through power sums and Newton-Girard.

    No covariance is involved, so every moment is trusted equally.

    :raises NotIdentifiableError: When the resulting polynomial has complex or negative roots.
    """
    power_sums: tuple[float, ...] = d_to_power_sums(d_obs, M)
    return PowerEstimate(powers=newton_girard_roots(power_sums), method=ZF)


def shifted_gram_moments(Y: np.ndarray, sigma2: float, K: int) -> MomentVector:
    """Moments of (1/L) Y Y^H - sigma2 I, the large-L estimate of H P H^H."""
    Y = np.asarray(Y)
    if not np.all(np.isfinite(Y)):
        raise NumericInputError("received matrix contains non-finite entries")
    n_rows, n_columns = Y.shape
    eigenvalues: np.ndarray = np.linalg.eigvalsh(Y @ Y.conj().T / n_columns) - sigma2
    orders: np.ndarray = np.arange(1, K + 1)
    values: np.ndarray = np.mean(eigenvalues[None, :] ** orders[:, None], axis=1)
    return MomentVector(values=tuple(values), c=n_rows / n_columns, n_eff=n_rows)


def classical_from_moments(d: MomentVector, M: int, N: int, cfg: EstimatorConfig = None) -> PowerEstimate:
    """
    Classical estimate from moments treated as the moments of H P H^H.

    The zero-forcing solution is tried first; if its roots are unusable the grid ML solution
    under the analytic covariance at P_1 = ... = P_M = P_max/2 is returned, flagged ``fallback``.
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    try:
        solution: PowerEstimate = zf_estimate(d, M)
        return PowerEstimate(powers=solution.powers, method=CLASSICAL)
    except NotIdentifiableError as error:
        K: int = cfg.resolve_K(M)
        hypothesis: tuple[float, ...] = (cfg.P_max / 2.0,) * M
        C: NoiseCovariance = noise_covariance(hypothesis, N, K, method=ANALYTIC)
        solution = ml_estimate(d, C, M, cfg)
        logger.info("classical roots unusable (%s), falling back to grid ML %s", error, solution.powers)
        return PowerEstimate(
            powers=solution.powers, method=CLASSICAL, residual=solution.residual,
            grid_resolution=solution.grid_resolution, fallback=True,
            roots=tuple(complex(root) for root in error.roots) if error.roots is not None else None,
        )


def classical_estimate(block: ReceivedBlock, sigma2: float, M: int, cfg: EstimatorConfig = None) -> PowerEstimate:
    """
    The large-L baseline: moments of (1/L) Y Y^H - sigma2 I are used directly as the moments
    of H P H^H, without free deconvolution.

    :param block: The received block.
    :param sigma2: Known noise variance.
    :param M: Station count.
    :param cfg: Grid settings for the ML fallback.
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    d: MomentVector = shifted_gram_moments(block.Y, sigma2, max(M, cfg.resolve_K(M)))
    return classical_from_moments(d, M, block.Y.shape[0], cfg)
