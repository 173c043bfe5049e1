import logging

from .convolution import (add_deconv, dirac_moments, mult_conv_mp, mult_deconv_mp, rank_pad)
from ..errors import (DomainError, InvalidConfigError)
from ..spectral.moments import MomentVector

logger = logging.getLogger(__name__)

MAX_ORDER: int = 12


def remove_noise(m_Y: MomentVector, c: float, sigma2: float) -> MomentVector:
    """
    Strip the additive white noise out of the moments of an information-plus-noise matrix.

    Deconvolves the Marchenko-Pastur law of ratio c, subtracts the full cumulant vector of the
    point mass at sigma2, then convolves the Marchenko-Pastur law back.
    """
    deconvolved: MomentVector = mult_deconv_mp(m_Y, c)
    denoised: MomentVector = add_deconv(deconvolved, dirac_moments(sigma2, m_Y.K))
    return mult_conv_mp(denoised, c)


def recover_hph_moments(m_Y: MomentVector, N: int, L: int, M: int, sigma2: float) -> MomentVector:
    """
    Recover the moments d_k of H P H^H from the moments of (1/L) Y Y^H.

    The four stages are:
        1. noise removal at c = N/L (:func:`remove_noise`);
        2. division by M, since the MN x MN companion Wishart matrix shares the nonzero
           eigenvalues of the N x N one and carries (M - 1)N extra zeros;
        3. Marchenko-Pastur deconvolution at c' = MN/L;
        4. multiplication by M, undoing the same zero padding on P^(1/2) H^H H P^(1/2).

    :param m_Y: Moments of (1/L) Y Y^H.
    :param N: Subcarrier count (effective count after accumulation is carried in m_Y.n_eff).
    :param L: OFDM symbol count.
    :param M: Station count.
    :param sigma2: Noise variance.
    :return: The recovered moments (d_1, ..., d_K).
    :raises InvalidConfigError: If sigma2 is negative or a dimension is not positive.
    """
    if sigma2 < 0:
        raise InvalidConfigError(f"sigma2 must be nonnegative, got {sigma2}")
    if min(N, L, M) < 1:
        raise InvalidConfigError(f"N, L and M must be positive, got N={N} L={L} M={M}")
    if m_Y.K > MAX_ORDER:
        raise DomainError(f"moment order {m_Y.K} exceeds the supported maximum {MAX_ORDER}")
    c: float = N / L
    signal_moments: MomentVector = remove_noise(m_Y, c, sigma2)
    companion_moments: MomentVector = rank_pad(signal_moments, 1.0 / M)
    covariance_moments: MomentVector = mult_deconv_mp(companion_moments, M * N / L)
    d: MomentVector = rank_pad(covariance_moments, float(M))
    logger.debug("recovered d = %s from m = %s", d.values, m_Y.values)
    return MomentVector(values=d.values, c=0.0, n_eff=m_Y.n_eff)
