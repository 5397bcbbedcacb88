"""Step-operator spectra, density of states and edge states."""

from chiralwalk.spectral.dos import (
    DosHistogram,
    Solver,
    clean_dos,
    clean_dos_bin_average,
    clean_integrated_dos,
    critical_peak,
    critical_points,
    dos_ensemble,
    dos_near_critical,
    spectrum_of,
)
from chiralwalk.spectral.operator import build_step_matrix, build_step_operator
from chiralwalk.spectral.spectrum import (
    Spectrum,
    eigenphases,
    field_eigenphases,
    folded_eigenphases,
)
from chiralwalk.spectral.symmetry import (
    EdgeCounts,
    SymmetryReport,
    check_quadruplet_symmetry,
    default_edge_tolerance,
    detect_edge_states,
)

__all__ = [
    "DosHistogram",
    "EdgeCounts",
    "Solver",
    "Spectrum",
    "SymmetryReport",
    "build_step_matrix",
    "build_step_operator",
    "check_quadruplet_symmetry",
    "clean_dos",
    "clean_dos_bin_average",
    "clean_integrated_dos",
    "critical_peak",
    "critical_points",
    "default_edge_tolerance",
    "detect_edge_states",
    "dos_ensemble",
    "dos_near_critical",
    "eigenphases",
    "field_eigenphases",
    "folded_eigenphases",
    "spectrum_of",
]
