import math
from typing import Callable, Iterable

import numpy as np


CHANNEL_STREAM: int = 0
SYMBOL_STREAM: int = 1
NOISE_STREAM: int = 2
# trial index reserved for the master seed of covariance simulations
COVARIANCE_SEED_INDEX: int = 2 ** 40


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """
    Derive the 64-bit seed of one Monte-Carlo trial from the master seed.

    The scheme is a counter: the trial index is appended to the spawn key of a
    ``numpy.random.SeedSequence`` rooted at the master seed, and the first 64 bits of
    its generated state become the trial seed. The result only depends on
    ``(master_seed, trial_index)``, never on which worker runs the trial.

    Example:
        derive_trial_seed(7, 0) == derive_trial_seed(7, 0)  # always True

    :param master_seed: The experiment master seed.
    :param trial_index: Zero-based trial counter.
    :return: A nonnegative integer below 2**64.
    """
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial_index),))
    low, high = sequence.generate_state(2, dtype=np.uint32)
    return int(high) << 32 | int(low)


def derive_generator(master_seed: int, trial_seed: int, stream: int) -> np.random.Generator:
    """
    Build the random generator of one named stream of one trial.

    Streams keep channels, symbols and noise statistically independent while letting each be
    regenerated on its own, so a block can be rebuilt bit-exactly from its seeds.

    :param master_seed: The scenario master seed.
    :param trial_seed: The trial seed (see :func:`derive_trial_seed`).
    :param stream: One of CHANNEL_STREAM, SYMBOL_STREAM, NOISE_STREAM.
    :return: A fresh ``numpy.random.Generator``.
    """
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial_seed), int(stream)))
    return np.random.default_rng(sequence)


def complex_normal(rng: np.random.Generator, shape: tuple[int, ...], variance: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian samples with E|z|^2 = variance."""
    scale: float = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def snr_db_to_sigma2(snr_db: float, reference_power: float = 1.0) -> float:
    """Noise variance giving ``snr_db`` against ``reference_power`` (20 dB -> 0.01 for unit power)."""
    return reference_power * 10.0 ** (-snr_db / 10.0)


def sigma2_to_snr_db(sigma2: float, reference_power: float = 1.0) -> float:
    if sigma2 <= 0:
        return math.inf
    return 10.0 * math.log10(reference_power / sigma2)


def _numpy_to_python(value: any) -> any:
    if isinstance(value, np.generic):
        return value.item()
    return value


def _float_to_text(value: any) -> any:
    # repr keeps every bit, so reruns produce byte-identical files
    if isinstance(value, float):
        return repr(value)
    return value


def _sequence_to_text(value: any) -> any:
    if isinstance(value, (list, tuple, np.ndarray)):
        return ";".join(str(convert_value(item)) for item in value)
    return value


DEFAULT_CONVERSIONS: tuple[Callable[[any], any], ...] = (_numpy_to_python, _sequence_to_text, _float_to_text)


def convert_value(value: any, conversion_functions_list: Iterable[Callable[[any], any]] = None) -> any:
    """
    Convert a value before it is written to an artifact cell.

    Each conversion function is applied in order and receives the output of the previous one.
    When no list is given the default conversions are used: numpy scalars become Python
    scalars, sequences are joined with ``;`` and floats are written with ``repr``.

    Args:
        value (any): The value to be converted.
        conversion_functions_list (Iterable, optional): Custom conversion functions, applied in order.

    Returns:
        any: The converted value.

    Example:
        convert_value(np.float64(0.5)) == "0.5"
    """
    conversion_functions = DEFAULT_CONVERSIONS if conversion_functions_list is None else conversion_functions_list
    for func in conversion_functions:
        value = func(value)
    return value
