import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import (ChannelRealization, gen_channels)
from .scenario import NetworkScenario
from ..spectral.moments import MomentVector
from ..utils import (NOISE_STREAM, SYMBOL_STREAM, complex_normal, derive_generator)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReceivedBlock:
    """
    One received N x L block together with the ground truth it was built from.

    Attributes:
        Y: N x L complex received matrix.
        channels: The channel realization used to build Y.
        scenario: The scenario Y was drawn under.
        trial_seed: Seed of the trial; (scenario, trial_seed) rebuilds Y bit-exactly.
    """
    Y: np.ndarray
    channels: ChannelRealization
    scenario: NetworkScenario
    trial_seed: int = 0


def gen_symbols(scenario: NetworkScenario, trial_seed: int) -> np.ndarray:
    """
    Draw the transmitted symbols of all stations, stacked station by station.

    Entries are i.i.d. with zero mean and unit variance: circular complex normal for the
    ``gaussian`` alphabet, uniform over (+-1 +-1j)/sqrt(2) for ``qpsk``.

    :return: MN x L complex matrix; rows k*N .. (k+1)*N - 1 belong to station k.
    """
    rng: np.random.Generator = derive_generator(scenario.master_seed, trial_seed, SYMBOL_STREAM)
    shape: tuple[int, int] = (scenario.M * scenario.N, scenario.L)
    if scenario.alphabet == "qpsk":
        signs: np.ndarray = 2.0 * rng.integers(0, 2, size=(2,) + shape) - 1.0
        return (signs[0] + 1j * signs[1]) / math.sqrt(2.0)
    return complex_normal(rng, shape)


def synthesize(scenario: NetworkScenario, trial_seed: int) -> ReceivedBlock:
    """
    Build the received block Y = sum_k sqrt(P_k) diag(h_k) S_k + sigma * N.

    The channels, symbols and noise come from three separate streams of the trial seed, so the
    block is a deterministic function of (master_seed, trial_seed).

    :param scenario: The experiment scenario.
    :param trial_seed: Seed of the trial.
    :return: The received block with its channel realization.
    """
    channels: ChannelRealization = gen_channels(scenario, trial_seed)
    symbols: np.ndarray = gen_symbols(scenario, trial_seed).reshape(scenario.M, scenario.N, scenario.L)
    amplitudes: np.ndarray = np.sqrt(np.asarray(scenario.powers, dtype=float))
    weighted: np.ndarray = amplitudes[:, None] * channels.h
    Y: np.ndarray = np.einsum("kn,knl->nl", weighted, symbols)
    noise_rng: np.random.Generator = derive_generator(scenario.master_seed, trial_seed, NOISE_STREAM)
    Y = Y + scenario.sigma * complex_normal(noise_rng, (scenario.N, scenario.L))
    logger.debug("synthesized trial %d: N=%d L=%d M=%d", trial_seed, scenario.N, scenario.L, scenario.M)
    return ReceivedBlock(Y=Y, channels=channels, scenario=scenario, trial_seed=trial_seed)


def true_hph_moments(channels: ChannelRealization, powers: Sequence[float], K: int) -> MomentVector:
    """
    Finite-N moments of the diagonal matrix H P H^H, the target of the deconvolution.

    nu_p = (1/N) sum_j (sum_k P_k |h_kj|^2)^p for p = 1..K.
    """
    diagonal: np.ndarray = np.asarray(powers, dtype=float) @ channels.gains()
    orders: np.ndarray = np.arange(1, K + 1)
    values: np.ndarray = np.mean(diagonal[None, :] ** orders[:, None], axis=1)
    return MomentVector(values=tuple(values), c=0.0, n_eff=channels.N)
