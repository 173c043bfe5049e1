from .moments import (MomentVector, accumulate, empirical_moments)
