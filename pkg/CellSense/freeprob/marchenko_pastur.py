import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from ..errors import DomainError
from ..spectral.moments import MomentVector


@dataclass(frozen=True)
class MarchenkoPasturLaw:
    """
    Limit eigenvalue law of (1/L) A A^H for an N x L matrix A of i.i.d. unit-variance
    entries with N/L -> c.

    The law has a density on [a, b] = [(1 - sqrt(c))^2, (1 + sqrt(c))^2] and, when c > 1,
    an atom of mass 1 - 1/c at zero.
    """
    c: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise DomainError(f"Marchenko-Pastur ratio must be positive, got {self.c}")

    @property
    def support(self) -> tuple[float, float]:
        root: float = math.sqrt(self.c)
        return (1.0 - root) ** 2, (1.0 + root) ** 2

    @property
    def atom(self) -> float:
        return max(0.0, 1.0 - 1.0 / self.c)

    def density(self, x: float | np.ndarray) -> float | np.ndarray:
        """Absolutely continuous part of the law; zero outside (a, b) and at x <= 0."""
        a, b = self.support
        x_array: np.ndarray = np.asarray(x, dtype=float)
        inside: np.ndarray = np.clip(x_array - a, 0.0, None) * np.clip(b - x_array, 0.0, None)
        positive: np.ndarray = x_array > 0
        safe_x: np.ndarray = np.where(positive, x_array, 1.0)
        values: np.ndarray = np.where(positive, np.sqrt(inside) / (2.0 * np.pi * self.c * safe_x), 0.0)
        return float(values) if values.ndim == 0 else values

    def moments(self, K: int) -> MomentVector:
        """
        First K moments, m_n = sum_{k=1}^{n} (1/n) C(n, k) C(n, k-1) c^(k-1).

        The Narayana numbers count the non-crossing partitions of n points into k blocks,
        which is why all free cumulants of the law equal c^(k-1).
        """
        if K < 1:
            raise DomainError(f"moment order K must be at least 1, got {K}")
        values: list[float] = []
        for n in range(1, K + 1):
            values.append(sum(
                comb(n, k, exact=True) * comb(n, k - 1, exact=True) // n * self.c ** (k - 1)
                for k in range(1, n + 1)
            ))
        return MomentVector(values=tuple(values), c=0.0)


def mp_moments(c: float, K: int) -> MomentVector:
    return MarchenkoPasturLaw(c).moments(K)


def mp_density(c: float, x: float | np.ndarray) -> float | np.ndarray:
    """Marchenko-Pastur density at x; the atom at zero is :attr:`MarchenkoPasturLaw.atom`."""
    return MarchenkoPasturLaw(c).density(x)
