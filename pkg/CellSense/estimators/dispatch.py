from .algebraic import (classical_from_moments, zf_estimate)
from .base import (CLASSICAL, METHODS, ML, MMSE, ZF, EstimatorConfig, PowerEstimate)
from .bayesian import (ml_estimate, mmse_estimate)
from ..errors import InvalidConfigError
from ..spectral.moments import MomentVector
from ..theory.covariance import NoiseCovariance


def estimate(
        method: str,
        d_obs: MomentVector,
        M: int,
        cfg: EstimatorConfig = None,
        C: NoiseCovariance = None,
        N: int = None,
) -> PowerEstimate:
    """
    Estimate the powers with the estimator named by ``method``.

    :param method: ``mmse``, ``ml``, ``zf`` or ``classical``.
    :param d_obs: Observed moments; recovered moments for mmse/ml/zf, shifted Gram moments for classical.
    :param M: Station count.
    :param cfg: Grid settings.
    :param C: Noise covariance, required by mmse and ml.
    :param N: Subcarrier count, required by classical for its ML fallback.
    :raises InvalidConfigError: On an unknown method or a missing argument.
    :raises NotIdentifiableError: When zf finds no admissible roots.
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    if method not in METHODS:
        raise InvalidConfigError(f"estimator must be one of {METHODS}, got {method!r}")
    if method in (MMSE, ML):
        if C is None:
            raise InvalidConfigError(f"{method} estimation needs a noise covariance")
        return (mmse_estimate if method == MMSE else ml_estimate)(d_obs, C, M, cfg)
    if method == ZF:
        return zf_estimate(d_obs, M)
    if N is None:
        raise InvalidConfigError(f"{CLASSICAL} estimation needs the subcarrier count")
    return classical_from_moments(d_obs, M, N, cfg)
