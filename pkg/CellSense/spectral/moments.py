import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import (DomainError, NumericInputError, ShapeMismatchError)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentVector:
    """
    Normalized-trace moments (m_1, ..., m_K) of a Hermitian matrix or of a limit law.

    Attributes:
        values: the moments, order 1 first.
        c: aspect ratio N/L the moments were measured at (0 for limit laws).
        n_eff: number of subcarriers that contributed; grows when vectors are accumulated.
    """
    values: tuple[float, ...]
    c: float = 0.0
    n_eff: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(value) for value in self.values))
        if not self.values:
            raise DomainError("a moment vector needs at least one moment")

    @property
    def K(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def truncated(self, K: int) -> "MomentVector":
        if not 1 <= K <= self.K:
            raise ShapeMismatchError(f"cannot truncate {self.K} moments to {K}")
        return MomentVector(values=self.values[:K], c=self.c, n_eff=self.n_eff)


def empirical_moments(Y: np.ndarray, K: int) -> MomentVector:
    """
    Eigenvalue moments of the Gram matrix (1/L) Y Y^H.

    One Hermitian eigendecomposition serves every order:
    m_k = (1/N) sum_i lambda_i^k.

    :param Y: N x L complex matrix.
    :param K: Highest moment order.
    :return: The moments, measured at c = N/L with n_eff = N.
    :raises DomainError: If K < 1.
    :raises NumericInputError: If Y has NaN or infinite entries.
    """
    if K < 1:
        raise DomainError(f"moment order K must be at least 1, got {K}")
    Y = np.asarray(Y)
    if not np.all(np.isfinite(Y)):
        raise NumericInputError("received matrix contains non-finite entries")
    n_rows, n_columns = Y.shape
    gram: np.ndarray = (Y @ Y.conj().T) / n_columns
    eigenvalues: np.ndarray = np.linalg.eigvalsh(gram)
    orders: np.ndarray = np.arange(1, K + 1)
    values: np.ndarray = np.mean(eigenvalues[None, :] ** orders[:, None], axis=1)
    return MomentVector(values=tuple(values), c=n_rows / n_columns, n_eff=n_rows)


def accumulate(moment_vectors: Sequence[MomentVector]) -> MomentVector:
    """
    Average moment vectors measured over independent channel realizations.

    The result counts every contributing subcarrier in n_eff, which is what the noise
    covariance of accumulated moments is scaled by.

    :raises ShapeMismatchError: If the inputs disagree on K or c, or if there are none.
    """
    if not moment_vectors:
        raise ShapeMismatchError("nothing to accumulate")
    first: MomentVector = moment_vectors[0]
    for vector in moment_vectors[1:]:
        if vector.K != first.K:
            raise ShapeMismatchError(f"cannot accumulate K = {vector.K} with K = {first.K}")
        if not np.isclose(vector.c, first.c, rtol=1e-12, atol=0.0):
            raise ShapeMismatchError(f"cannot accumulate c = {vector.c} with c = {first.c}")
    if len(moment_vectors) == 1:
        return first
    values: np.ndarray = np.mean([vector.as_array() for vector in moment_vectors], axis=0)
    return MomentVector(
        values=tuple(values), c=first.c, n_eff=sum(vector.n_eff for vector in moment_vectors)
    )
