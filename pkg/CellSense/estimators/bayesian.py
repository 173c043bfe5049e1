import logging

import numpy as np
from scipy.special import logsumexp

from .base import (ML, MMSE, EstimatorConfig, PowerEstimate, PowerGrid, power_grid)
from ..errors import ShapeMismatchError
from ..spectral.moments import MomentVector
from ..theory.covariance import NoiseCovariance
from ..theory.moments import theoretical_d_grid

logger = logging.getLogger(__name__)


def _quadratic_forms(d_obs: np.ndarray, d_nodes: np.ndarray, precision: np.ndarray) -> np.ndarray:
    w: np.ndarray = d_obs[None, :] - d_nodes
    return np.einsum("nk,kl,nl->n", w, precision, w)


def _prepare(
        d_obs: MomentVector, C: NoiseCovariance, M: int, cfg: EstimatorConfig
) -> tuple[np.ndarray, np.ndarray, PowerGrid]:
    K: int = cfg.resolve_K(M)
    if d_obs.K < K or C.K < K:
        raise ShapeMismatchError(f"estimation at K = {K} needs {K} moments and a {K}x{K} covariance")
    grid: PowerGrid = power_grid(M, cfg.resolve_grid_points(M), float(cfg.P_max), K, cfg.prior)
    return d_obs.as_array()[:K], C.truncated(K).precision(), grid


def _residual(powers: np.ndarray, d_obs: np.ndarray, precision: np.ndarray) -> float:
    d_at: np.ndarray = theoretical_d_grid(powers[None, :], len(d_obs))
    return float(_quadratic_forms(d_obs, d_at, precision)[0])


def ml_estimate(d_obs: MomentVector, C: NoiseCovariance, M: int, cfg: EstimatorConfig) -> PowerEstimate:
    """
    Grid node minimizing w(P)^T C^-1 w(P), w(P) = d_obs - d(P).

    :param d_obs: Recovered (possibly accumulated) moments.
    :param C: Noise covariance of d_obs.
    :param M: Station count.
    :param cfg: Grid settings.
    """
    d, precision, grid = _prepare(d_obs, C, M, cfg)
    forms: np.ndarray = _quadratic_forms(d, grid.d, precision)
    best: int = int(np.argmin(forms))
    return PowerEstimate(
        powers=tuple(grid.nodes[best]), method=ML, residual=float(forms[best]), grid_resolution=grid.grid_points
    )


def mmse_estimate(d_obs: MomentVector, C: NoiseCovariance, M: int, cfg: EstimatorConfig) -> PowerEstimate:
    """
    Posterior mean of the powers over the ordered grid.

    Every node P is weighted by prior(P) exp(-w(P)^T C^-1 w(P) / 2). Weights are normalized
    in the log domain; when all of them would underflow to zero the posterior has collapsed
    below the grid resolution and the ML node is returned with ``degenerate`` set.

    :param d_obs: Recovered (possibly accumulated) moments.
    :param C: Noise covariance of d_obs.
    :param M: Station count.
    :param cfg: Grid settings.
    """
    d, precision, grid = _prepare(d_obs, C, M, cfg)
    forms: np.ndarray = _quadratic_forms(d, grid.d, precision)
    log_weights: np.ndarray = grid.log_prior - 0.5 * forms
    if not np.any(np.exp(log_weights) > 0):
        best: int = int(np.argmin(forms))
        logger.info("posterior weights underflow, returning the ML node %s", grid.nodes[best])
        return PowerEstimate(
            powers=tuple(grid.nodes[best]), method=MMSE, residual=float(forms[best]),
            grid_resolution=grid.grid_points, degenerate=True,
        )
    weights: np.ndarray = np.exp(log_weights - logsumexp(log_weights))
    posterior_mean: np.ndarray = weights @ grid.nodes
    return PowerEstimate(
        powers=tuple(posterior_mean), method=MMSE, residual=_residual(posterior_mean, d, precision),
        grid_resolution=grid.grid_points,
    )
