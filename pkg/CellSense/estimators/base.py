import functools
import itertools
import logging
from dataclasses import (dataclass, field)

import numpy as np

from ..errors import InvalidConfigError
from ..theory.covariance import (COVARIANCE_METHODS, MONTE_CARLO)
from ..theory.moments import theoretical_d_grid

logger = logging.getLogger(__name__)

MMSE: str = "mmse"
ML: str = "ml"
ZF: str = "zf"
CLASSICAL: str = "classical"
METHODS: tuple[str, ...] = (MMSE, ML, ZF, CLASSICAL)

UNIFORM_SIMPLEX: str = "uniform-simplex"
SEQUENTIAL: str = "sequential"
PRIORS: tuple[str, ...] = (UNIFORM_SIMPLEX, SEQUENTIAL)


@dataclass(frozen=True)
class EstimatorConfig:
    """
    Settings shared by the grid estimators.

    Attributes:
        P_max: upper bound of every power.
        grid_points: nodes per axis on [0, P_max]; None picks 64 for M <= 3 and 24 above.
        K: moment order used; None means K = M.
        prior: ``uniform-simplex`` (flat on the ordered region) or ``sequential``
               (P_k uniform on [0, P_(k-1)]).
        covariance_method: how the iterative estimator recomputes C.
        covariance_trials: monte-carlo trials per covariance evaluation.
    """
    P_max: float = 8.0
    grid_points: int | None = None
    K: int | None = None
    prior: str = UNIFORM_SIMPLEX
    covariance_method: str = MONTE_CARLO
    covariance_trials: int = 200

    def __post_init__(self) -> None:
        if not self.P_max > 0:
            raise InvalidConfigError(f"P_max must be positive, got {self.P_max}")
        if self.grid_points is not None and self.grid_points < 2:
            raise InvalidConfigError(f"grid_points must be at least 2, got {self.grid_points}")
        if self.K is not None and self.K < 1:
            raise InvalidConfigError(f"K must be at least 1, got {self.K}")
        if self.prior not in PRIORS:
            raise InvalidConfigError(f"prior must be one of {PRIORS}, got {self.prior!r}")
        if self.covariance_method not in COVARIANCE_METHODS:
            raise InvalidConfigError(
                f"covariance_method must be one of {COVARIANCE_METHODS}, got {self.covariance_method!r}"
            )

    def resolve_grid_points(self, M: int) -> int:
        if self.grid_points is not None:
            return self.grid_points
        return 64 if M <= 3 else 24

    def resolve_K(self, M: int) -> int:
        return self.K if self.K is not None else M


@dataclass(frozen=True)
class PowerEstimate:
    """
    Estimated station powers, descending.

    Attributes:
        powers: the estimate.
        method: ``mmse``, ``ml``, ``zf`` or ``classical``.
        residual: w^T C^-1 w at the estimate (None when no covariance was involved).
        grid_resolution: grid points per axis, for grid methods.
        degenerate: every posterior weight underflowed and the ML node was returned.
        fallback: the algebraic solution failed and the grid ML solution was returned.
        roots: raw polynomial roots of a failed algebraic solution.
    """
    powers: tuple[float, ...]
    method: str
    residual: float | None = None
    grid_resolution: int | None = None
    degenerate: bool = False
    fallback: bool = False
    roots: tuple[complex, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "powers", tuple(sorted((float(p) for p in self.powers), reverse=True)))

    @property
    def M(self) -> int:
        return len(self.powers)

    def squared_error(self, truth) -> float:
        """||P - P_estimate||^2 against the true powers (any order)."""
        truth_sorted = np.sort(np.asarray(truth, dtype=float))[::-1]
        return float(np.sum((np.asarray(self.powers) - truth_sorted) ** 2))


@dataclass(frozen=True)
class PowerGrid:
    """
    The ordered grid {P_max >= P_1 >= ... >= P_M >= 0} with the theoretical moments of every node.

    Attributes:
        nodes: (n_nodes, M) power vectors, each descending.
        d: (n_nodes, K) theoretical moments d_p = p! h_p of every node.
        log_prior: (n_nodes,) log prior weight.
        step: grid spacing.
        grid_points: nodes per axis.
    """
    nodes: np.ndarray
    d: np.ndarray
    log_prior: np.ndarray
    step: float
    grid_points: int


@functools.lru_cache(maxsize=16)
def power_grid(M: int, grid_points: int, P_max: float, K: int, prior: str = UNIFORM_SIMPLEX) -> PowerGrid:
    """
    Build (once per argument set) the ordered power grid and its theoretical moments.

    The grid holds C(grid_points + M - 1, M) nodes, roughly grid_points^M / M!.
    """
    axis: np.ndarray = np.linspace(0.0, P_max, grid_points)
    step: float = float(axis[1] - axis[0])
    indices = itertools.combinations_with_replacement(range(grid_points - 1, -1, -1), M)
    nodes: np.ndarray = axis[np.array(list(indices), dtype=int).reshape(-1, M)]
    if prior == SEQUENTIAL:
        # P_1 ~ U[0, P_max], P_k ~ U[0, P_(k-1)]: density prod_{k<M} 1/P_k, floored at half a step
        conditioning: np.ndarray = np.maximum(nodes[:, :-1], step / 2.0)
        log_prior: np.ndarray = -np.sum(np.log(conditioning), axis=1)
    else:
        log_prior = np.zeros(len(nodes))
    logger.debug("built power grid M=%d points=%d nodes=%d", M, grid_points, len(nodes))
    return PowerGrid(
        nodes=nodes, d=theoretical_d_grid(nodes, K), log_prior=log_prior, step=step, grid_points=grid_points
    )
