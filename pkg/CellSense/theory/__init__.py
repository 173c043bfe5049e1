from .moments import (complete_homogeneous, gaussian_abs_moment, theoretical_d, theoretical_d_grid)
from .symmetric import (d_to_power_sums, elementary_symmetric, newton_girard_roots)
from .covariance import (ANALYTIC, MONTE_CARLO, NoiseCovariance, analytic_covariance, noise_covariance)
