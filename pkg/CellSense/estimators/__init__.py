from .base import (CLASSICAL, METHODS, ML, MMSE, ZF, EstimatorConfig, PowerEstimate, PowerGrid, power_grid)
from .bayesian import (ml_estimate, mmse_estimate)
from .algebraic import (classical_estimate, classical_from_moments, shifted_gram_moments, zf_estimate)
from .iterative import (iterative_mmse, recovered_moments)
from .dispatch import estimate
