import logging
from dataclasses import dataclass

import numpy as np

from .scenario import NetworkScenario
from ..errors import InvalidConfigError
from ..utils import (CHANNEL_STREAM, complex_normal, derive_generator)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelRealization:
    """
    Frequency responses of all stations for one trial.

    Attributes:
        h: M x N complex matrix; row k is the response of station k on every carrier
           (the diagonal of its frequency-domain channel matrix).
    """
    h: np.ndarray

    @property
    def M(self) -> int:
        return self.h.shape[0]

    @property
    def N(self) -> int:
        return self.h.shape[1]

    def gains(self) -> np.ndarray:
        """Per-carrier power gains |h_kj|^2."""
        return np.abs(self.h) ** 2


def gen_channels(scenario: NetworkScenario, trial_seed: int) -> ChannelRealization:
    """
    Draw the channel frequency responses of one trial.

    Each row is the N-point DFT of a length-tau_d circular complex Gaussian tap vector with
    per-tap variance 1/tau_d, zero-padded to N, so E|h_kj|^2 = 1 on every carrier. tau_d = N
    gives white responses, tau_d = 1 a flat channel.

    :param scenario: The experiment scenario.
    :param trial_seed: Seed of the trial.
    :return: The channel realization.
    :raises InvalidConfigError: If tau_d lies outside 1..N.
    """
    tau_d: int = scenario.tau_d
    if tau_d is None or not 1 <= tau_d <= scenario.N:
        raise InvalidConfigError(f"channel length tau_d = {tau_d} outside 1..N = {scenario.N}")
    rng: np.random.Generator = derive_generator(scenario.master_seed, trial_seed, CHANNEL_STREAM)
    impulse_response: np.ndarray = np.zeros((scenario.M, scenario.N), dtype=complex)
    impulse_response[:, :tau_d] = complex_normal(rng, (scenario.M, tau_d), variance=1.0 / tau_d)
    return ChannelRealization(h=np.fft.fft(impulse_response, axis=1))
