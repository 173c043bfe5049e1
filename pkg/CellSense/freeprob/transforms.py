"""Free moment/cumulant transforms.

Moments and free cumulants are linked by the recursion over non-crossing partitions

    m_n = sum_{s=1}^{n} kappa_s * [x^(n-s)] (1 + m_1 x + m_2 x^2 + ...)^s

with m_0 = 1. Both directions only need the first K entries of their input.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..spectral.moments import MomentVector


@dataclass(frozen=True)
class CumulantVector:
    """Free cumulants (kappa_1, ..., kappa_K)."""
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(value) for value in self.values))
        if not self.values:
            raise DomainError("a cumulant vector needs at least one cumulant")

    @property
    def K(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _series_powers(moments: np.ndarray, K: int) -> np.ndarray:
    """Row s holds the coefficients of x^0..x^K in (1 + sum_i m_i x^i)^s, s = 0..K."""
    series: np.ndarray = np.zeros(K + 1)
    series[0] = 1.0
    series[1:len(moments) + 1] = moments[:K]
    powers: np.ndarray = np.zeros((K + 1, K + 1))
    powers[0, 0] = 1.0
    for s in range(1, K + 1):
        powers[s] = np.convolve(powers[s - 1], series)[:K + 1]
    return powers


def moments_to_free_cumulants(m: MomentVector) -> CumulantVector:
    """
    The moments/cumulants transform.

    Example:
        the moments (a, a^2, a^3) of a point mass at a give the cumulants (a, 0, 0).
    """
    moments: np.ndarray = m.as_array()
    K: int = m.K
    powers: np.ndarray = _series_powers(moments, K)
    cumulants: np.ndarray = np.zeros(K)
    for n in range(1, K + 1):
        lower_terms: float = sum(cumulants[s - 1] * powers[s, n - s] for s in range(1, n))
        cumulants[n - 1] = moments[n - 1] - lower_terms
    return CumulantVector(values=tuple(cumulants))


def free_cumulants_to_moments(k: CumulantVector, c: float = 0.0, n_eff: int = 0) -> MomentVector:
    """
    The cumulants/moments transform, inverse of :func:`moments_to_free_cumulants`.

    :param k: The free cumulants.
    :param c: Aspect ratio recorded on the output.
    :param n_eff: Effective subcarrier count recorded on the output.
    """
    cumulants: np.ndarray = k.as_array()
    K: int = k.K
    moments: np.ndarray = np.zeros(K)
    for n in range(1, K + 1):
        # only m_1..m_{n-1} enter the coefficients used at order n
        powers: np.ndarray = _series_powers(moments[:n - 1], n)
        moments[n - 1] = sum(cumulants[s - 1] * powers[s, n - s] for s in range(1, n + 1))
    return MomentVector(values=tuple(moments), c=c, n_eff=n_eff)
