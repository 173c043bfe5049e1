import logging
import math
from typing import Sequence

import numpy as np

from ..errors import (NotIdentifiableError, ShapeMismatchError)
from ..spectral.moments import MomentVector

logger = logging.getLogger(__name__)

ROOT_TOLERANCE: float = 1e-6


def d_to_power_sums(d: MomentVector, M: int) -> tuple[float, ...]:
    """
    Power sums S_k = sum_i P_i^k, k = 1..M, from the moments d_p = p! h_p(P).

    Newton's identity p h_p = sum_{i=1}^{p} S_i h_{p-i} is solved for S_p order by order,
    which generates S_1 = d_1, S_2 = d_2 - d_1^2, ...

    :raises ShapeMismatchError: If fewer than M moments are given.
    """
    if d.K < M:
        raise ShapeMismatchError(f"{M} power sums need at least {M} moments, got {d.K}")
    h: list[float] = [1.0] + [d.values[p - 1] / math.factorial(p) for p in range(1, M + 1)]
    power_sums: list[float] = []
    for p in range(1, M + 1):
        lower_terms: float = sum(power_sums[i - 1] * h[p - i] for i in range(1, p))
        power_sums.append(p * h[p] - lower_terms)
    return tuple(power_sums)


def elementary_symmetric(power_sums: Sequence[float]) -> list[float]:
    """e_0..e_M from power sums: e_k = (1/k) sum_{i=1}^{k} (-1)^(i-1) e_{k-i} S_i."""
    e: list[float] = [1.0]
    for k in range(1, len(power_sums) + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * power_sums[i - 1] for i in range(1, k + 1)) / k)
    return e


def newton_girard_roots(S: Sequence[float]) -> tuple[float, ...]:
    """
    Recover M nonnegative reals from their first M power sums.

    The elementary symmetric polynomials are the coefficients of the monic polynomial
    prod_i (x - P_i); its roots are accepted when every imaginary part is within 1e-6 of the
    spectral scale and no root is below -1e-6 times that scale (such roots are clamped to 0).

    Example:
        newton_girard_roots([7, 21, 73]) == (4.0, 2.0, 1.0)  # up to round-off

    :return: The roots, descending.
    :raises NotIdentifiableError: On complex or significantly negative roots.
    """
    e: list[float] = elementary_symmetric(S)
    coefficients: np.ndarray = np.array([(-1) ** k * e[k] for k in range(len(e))], dtype=float)
    roots: np.ndarray = np.roots(coefficients).astype(complex)
    scale: float = max(float(np.max(np.abs(roots))), np.finfo(float).tiny)
    if np.any(np.abs(roots.imag) > ROOT_TOLERANCE * scale):
        logger.debug("complex roots %s", roots)
        raise NotIdentifiableError("power sums have complex roots", roots=roots)
    real_roots: np.ndarray = roots.real
    if np.any(real_roots < -ROOT_TOLERANCE * scale):
        logger.debug("negative roots %s", real_roots)
        raise NotIdentifiableError("power sums have negative roots", roots=roots)
    return tuple(float(root) for root in np.sort(np.clip(real_roots, 0.0, None))[::-1])
