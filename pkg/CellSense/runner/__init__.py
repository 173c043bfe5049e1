from ..configuration import (ExperimentSpec, parse_spec)
from .experiments import (build_document, count_rise_regions, empirical_cdf, equal_power_groups, rise_regions,
                          run_experiment, run_trials)
from .cli import main
