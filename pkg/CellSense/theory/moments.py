"""Closed-form moments of H P H^H for i.i.d. unit-power complex Gaussian channel gains.

With |h|^2 a unit-mean exponential variable the p-th moment of sum_i P_i |h_i|^2 is
p! h_p(P), h_p the complete homogeneous symmetric polynomial. The literal double-sum form
(:func:`theoretical_d`) and the symmetric-polynomial form (:func:`theoretical_d_grid`) are
both kept: the first is the reference, the second is what the grid estimators evaluate.
"""
import itertools
import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from ..errors import DomainError
from ..spectral.moments import MomentVector


def gaussian_abs_moment(p: int) -> float:
    """
    E|h|^(2p) for a unit-power circular complex Gaussian h = h_r + i h_i.

    Expands (h_r^2 + h_i^2)^p binomially and uses E[h_r^(2i)] = (2i)! / (4^i i!):

        E|h|^(2p) = 4^-p sum_{i=0}^{p} C(p, i) (2i)! (2[p-i])! / (i! (p-i)!)

    which evaluates to p!.

    :param p: Moment order, p >= 0.
    :raises DomainError: If p is negative.
    """
    if p < 0:
        raise DomainError(f"moment order must be nonnegative, got {p}")
    total: Fraction = Fraction(0)
    for i in range(p + 1):
        total += Fraction(
            math.comb(p, i) * math.factorial(2 * i) * math.factorial(2 * (p - i)),
            math.factorial(i) * math.factorial(p - i),
        )
    return float(total / 4 ** p)


def _central_binomial_convolution(n: int) -> int:
    # sum_k C(2k, k) C(2n-2k, n-k), which equals 4^n
    return sum(math.comb(2 * k, k) * math.comb(2 * (n - k), n - k) for k in range(n + 1))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All (k_1, ..., k_parts) of nonnegative integers summing to total."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        bounds = (-1,) + cuts + (total + parts - 1,)
        yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(parts))


def theoretical_d(powers: Sequence[float], K: int) -> MomentVector:
    """
    Asymptotic moments d_1..d_K of H P H^H.

    d_p = p!/4^p sum_{k_1+...+k_M = p} prod_i {sum_{k=0}^{k_i} (2k)!(2[k_i-k])! / ((k!)^2 ([k_i-k]!)^2)} P_i^(k_i)

    Example:
        theoretical_d([4, 2, 1], 3).values == (7.0, 70.0, 930.0)
    """
    if K < 1:
        raise DomainError(f"moment order K must be at least 1, got {K}")
    powers = [float(power) for power in powers]
    values: list[float] = []
    for p in range(1, K + 1):
        terms: list[float] = []
        for exponents in _compositions(p, len(powers)):
            term: float = 1.0
            for power, exponent in zip(powers, exponents):
                term *= _central_binomial_convolution(exponent) * power ** exponent
            terms.append(term)
        values.append(math.factorial(p) / 4 ** p * math.fsum(terms))
    return MomentVector(values=tuple(values))


def complete_homogeneous(powers: np.ndarray, K: int) -> np.ndarray:
    """
    h_1..h_K of the power vectors stored along the last axis of ``powers``.

    Uses Newton's identity p h_p = sum_{i=1}^{p} S_i h_{p-i} with power sums S_i, so it
    broadcasts over any number of leading axes (one row per grid node).
    """
    powers = np.asarray(powers, dtype=float)
    power_sums: np.ndarray = np.stack([np.sum(powers ** i, axis=-1) for i in range(1, K + 1)], axis=-1)
    h: np.ndarray = np.zeros(powers.shape[:-1] + (K + 1,))
    h[..., 0] = 1.0
    for p in range(1, K + 1):
        h[..., p] = sum(power_sums[..., i - 1] * h[..., p - i] for i in range(1, p + 1)) / p
    return h[..., 1:]


def theoretical_d_grid(nodes: np.ndarray, K: int) -> np.ndarray:
    """Vectorized d_p = p! h_p(P) for an (n_nodes, M) array of power vectors."""
    factorials: np.ndarray = np.array([math.factorial(p) for p in range(1, K + 1)], dtype=float)
    return complete_homogeneous(nodes, K) * factorials
