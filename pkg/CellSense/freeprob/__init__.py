from .transforms import (CumulantVector, free_cumulants_to_moments, moments_to_free_cumulants)
from .marchenko_pastur import (MarchenkoPasturLaw, mp_density, mp_moments)
from .convolution import (add_conv, add_deconv, dirac_moments, mult_conv_mp, mult_deconv_mp, rank_pad)
from .pipeline import (MAX_ORDER, recover_hph_moments, remove_noise)
