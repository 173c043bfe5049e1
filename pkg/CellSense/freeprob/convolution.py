"""Free convolution and deconvolution against the operands the detection pipeline needs.

Multiplicative (de)convolution with a Marchenko-Pastur law of ratio c works on the scaled
sequence c*m: convolving maps it through the cumulants/moments transform, deconvolving through
the moments/cumulants transform, and the result is scaled back by 1/c. Additive
(de)convolution adds (subtracts) free cumulants.
"""
import numpy as np

from .transforms import (CumulantVector, free_cumulants_to_moments, moments_to_free_cumulants)
from ..errors import (DomainError, ShapeMismatchError)
from ..spectral.moments import MomentVector


def _check_ratio(c: float) -> None:
    if not c > 0:
        raise DomainError(f"Marchenko-Pastur ratio must be positive, got {c}")


def dirac_moments(a: float, K: int) -> MomentVector:
    """Moments (a, a^2, ..., a^K) of a point mass at a."""
    return MomentVector(values=tuple(float(a) ** k for k in range(1, K + 1)))


def mult_conv_mp(m: MomentVector, c: float) -> MomentVector:
    """Moments of the multiplicative free convolution of m with the Marchenko-Pastur law of ratio c."""
    _check_ratio(c)
    scaled: CumulantVector = CumulantVector(values=tuple(c * m.as_array()))
    out: MomentVector = free_cumulants_to_moments(scaled)
    return MomentVector(values=tuple(out.as_array() / c), c=m.c, n_eff=m.n_eff)


def mult_deconv_mp(m: MomentVector, c: float) -> MomentVector:
    """Inverse of :func:`mult_conv_mp`."""
    _check_ratio(c)
    scaled: MomentVector = MomentVector(values=tuple(c * m.as_array()))
    out: CumulantVector = moments_to_free_cumulants(scaled)
    return MomentVector(values=tuple(out.as_array() / c), c=m.c, n_eff=m.n_eff)


def _cumulant_pair(m_a: MomentVector, m_b: MomentVector) -> tuple[np.ndarray, np.ndarray]:
    if m_a.K != m_b.K:
        raise ShapeMismatchError(f"operands have K = {m_a.K} and K = {m_b.K}")
    return moments_to_free_cumulants(m_a).as_array(), moments_to_free_cumulants(m_b).as_array()


def add_conv(m_a: MomentVector, m_b: MomentVector) -> MomentVector:
    """Additive free convolution: free cumulants add."""
    kappa_a, kappa_b = _cumulant_pair(m_a, m_b)
    return free_cumulants_to_moments(CumulantVector(values=tuple(kappa_a + kappa_b)), c=m_a.c, n_eff=m_a.n_eff)


def add_deconv(m_c: MomentVector, m_b: MomentVector) -> MomentVector:
    """Additive free deconvolution of m_b out of m_c: free cumulants subtract."""
    kappa_c, kappa_b = _cumulant_pair(m_c, m_b)
    return free_cumulants_to_moments(CumulantVector(values=tuple(kappa_c - kappa_b)), c=m_c.c, n_eff=m_c.n_eff)


def rank_pad(m: MomentVector, factor: float) -> MomentVector:
    """
    Moments after padding the spectrum with zero eigenvalues (factor < 1) or removing them
    (factor > 1): every moment is multiplied by ``factor``.
    """
    return MomentVector(values=tuple(factor * m.as_array()), c=m.c, n_eff=m.n_eff)

