"""Time evolution observables and disorder-ensemble averaging."""

from chiralwalk.dynamics.analysis import PowerLaw, excess_kurtosis, power_law_exponent
from chiralwalk.dynamics.ensemble import EnsembleResult, run_ensemble
from chiralwalk.dynamics.observables import (
    position_variance,
    probability_distribution,
    survival_probability,
)
from chiralwalk.dynamics.trajectory import (
    Trajectory,
    WalkConfig,
    default_record_times,
    run_trajectory,
)

__all__ = [
    "EnsembleResult",
    "PowerLaw",
    "Trajectory",
    "WalkConfig",
    "default_record_times",
    "excess_kurtosis",
    "position_variance",
    "power_law_exponent",
    "probability_distribution",
    "run_ensemble",
    "run_trajectory",
    "survival_probability",
]
