import logging
from typing import Sequence

from .base import (EstimatorConfig, PowerEstimate)
from .bayesian import mmse_estimate
from ..errors import InvalidConfigError
from ..freeprob.pipeline import recover_hph_moments
from ..simulation.received import ReceivedBlock
from ..spectral.moments import (MomentVector, accumulate, empirical_moments)
from ..theory.covariance import (NoiseCovariance, noise_covariance)

logger = logging.getLogger(__name__)


def recovered_moments(block: ReceivedBlock, K: int, M: int = None) -> MomentVector:
    """The deconvolved moments d_1..d_K of one received block, for M expected stations."""
    scenario = block.scenario
    m_Y: MomentVector = empirical_moments(block.Y, K)
    M = scenario.M if M is None else M
    return recover_hph_moments(m_Y, scenario.N, scenario.L, M, scenario.sigma2)


def iterative_mmse(
        blocks: Sequence[ReceivedBlock],
        M: int,
        cfg: EstimatorConfig,
        steps: int = None,
        workers: int = 1,
) -> list[PowerEstimate]:
    """
    MMSE estimation with the noise covariance refined at every step.

    Step 1 uses the covariance of the hypothesis P_1 = ... = P_M = P_max/2. Step t adds the
    t-th block's recovered moments to the running average and recomputes C at the previous
    estimate for an effective t*N subcarriers.

    :param blocks: Received blocks, one consumed per step.
    :param M: Station count.
    :param cfg: Estimator settings, including how C is recomputed.
    :param steps: Number of steps; defaults to the number of blocks.
    :param workers: Processes used by monte-carlo covariance evaluations.
    :return: The estimate after every step.
    """
    steps = len(blocks) if steps is None else steps
    if not 1 <= steps <= len(blocks):
        raise InvalidConfigError(f"steps must lie in 1..{len(blocks)}, got {steps}")
    K: int = cfg.resolve_K(M)
    scenario = blocks[0].scenario
    hypothesis: tuple[float, ...] = (cfg.P_max / 2.0,) * M
    observed: list[MomentVector] = []
    trajectory: list[PowerEstimate] = []
    for step in range(1, steps + 1):
        observed.append(recovered_moments(blocks[step - 1], K, M))
        C: NoiseCovariance = noise_covariance(
            hypothesis, scenario.N, K, trials=cfg.covariance_trials, method=cfg.covariance_method,
            template=scenario, accumulations=step, workers=workers,
        )
        estimate: PowerEstimate = mmse_estimate(accumulate(observed), C, M, cfg)
        logger.info("step %d: powers %s", step, estimate.powers)
        trajectory.append(estimate)
        hypothesis = estimate.powers
    return trajectory
