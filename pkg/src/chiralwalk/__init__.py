"""chiralwalk - disordered chiral quantum walks: dynamics, spectra, localization."""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as _pkg_version

try:
    __version__ = _pkg_version("chiralwalk")
except PackageNotFoundError:  # pragma: no cover - source checkout without install
    __version__ = "0.0.0+unknown"

from chiralwalk import logging as _logging  # noqa: E402,F401  (configures sinks on import)
from chiralwalk.config import configure, reset_defaults, settings  # noqa: E402
from chiralwalk.core import (  # noqa: E402
    BoundaryConfig,
    CoinField,
    DisorderMode,
    Topology,
    WalkerState,
    Wall,
    evolve,
    initial_state,
    make_coin,
    make_field,
    make_reflecting_coin,
    step,
)
from chiralwalk.dynamics import (  # noqa: E402
    EnsembleResult,
    Trajectory,
    WalkConfig,
    position_variance,
    probability_distribution,
    run_ensemble,
    run_trajectory,
    survival_probability,
)
from chiralwalk.exceptions import (  # noqa: E402
    CapacityError,
    ChiralWalkError,
    ConfigError,
    DomainError,
    InvalidArgumentError,
    LatticeOverflowError,
    NumericalError,
    SingularCoinError,
)
from chiralwalk.scaling import FitError, ScalingFit, fit_dos, fit_xi  # noqa: E402
from chiralwalk.spectral import (  # noqa: E402
    DosHistogram,
    Spectrum,
    build_step_matrix,
    check_quadruplet_symmetry,
    clean_dos,
    detect_edge_states,
    dos_ensemble,
    eigenphases,
)
from chiralwalk.transfer import (  # noqa: E402
    LyapunovResult,
    lyapunov,
    transfer_matrix,
    xi_vs_energy,
)

__all__ = [
    "BoundaryConfig",
    "CapacityError",
    "ChiralWalkError",
    "CoinField",
    "ConfigError",
    "DisorderMode",
    "DomainError",
    "DosHistogram",
    "EnsembleResult",
    "FitError",
    "InvalidArgumentError",
    "LatticeOverflowError",
    "LyapunovResult",
    "NumericalError",
    "ScalingFit",
    "SingularCoinError",
    "Spectrum",
    "Topology",
    "Trajectory",
    "WalkConfig",
    "WalkerState",
    "Wall",
    "build_step_matrix",
    "check_quadruplet_symmetry",
    "clean_dos",
    "configure",
    "detect_edge_states",
    "dos_ensemble",
    "eigenphases",
    "evolve",
    "fit_dos",
    "fit_xi",
    "initial_state",
    "lyapunov",
    "make_coin",
    "make_field",
    "make_reflecting_coin",
    "position_variance",
    "probability_distribution",
    "reset_defaults",
    "run_ensemble",
    "run_trajectory",
    "settings",
    "step",
    "survival_probability",
    "transfer_matrix",
    "xi_vs_energy",
]
