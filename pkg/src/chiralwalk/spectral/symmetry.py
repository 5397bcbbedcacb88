"""Edge-state counting and the chiral / bipartite pairing checks."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from chiralwalk.exceptions import InvalidArgumentError
from chiralwalk.spectral.spectrum import Spectrum, wrap_phase

CLEAN_EDGE_TOLERANCE = 1e-8
# Folded phases near 0 and pi are only good to about 1e-7.
FOLDED_EDGE_TOLERANCE = 1e-6
SYMMETRY_TOLERANCE = 1e-9


class EdgeCounts(NamedTuple):
    at_zero: int
    at_pi: int


class SymmetryReport(NamedTuple):
    chiral_mismatch: float
    bipartite_mismatch: float
    tol: float

    @property
    def chiral_holds(self) -> bool:
        return self.chiral_mismatch <= self.tol

    @property
    def bipartite_holds(self) -> bool:
        return self.bipartite_mismatch <= self.tol

    @property
    def holds(self) -> bool:
        return self.chiral_holds and self.bipartite_holds


def default_edge_tolerance(spectrum: Spectrum) -> float:
    """1e-8 for clean spectra; a tenth of the mean level spacing for disordered ones."""
    floor = FOLDED_EDGE_TOLERANCE if spectrum.folded else CLEAN_EDGE_TOLERANCE
    if not spectrum.disordered:
        return floor
    return max(floor, 0.1 * 2 * math.pi / (2 * spectrum.n_sites))


def detect_edge_states(spectrum: Spectrum, tol: float | None = None) -> EdgeCounts:
    """Number of eigenphases within ``tol`` of 0 and of pi."""
    tol = default_edge_tolerance(spectrum) if tol is None else tol
    if tol <= 0:
        raise InvalidArgumentError(f"tolerance must be > 0, got {tol}")
    magnitude = np.abs(spectrum.phases)
    return EdgeCounts(
        int(np.count_nonzero(magnitude < tol)),
        int(np.count_nonzero(math.pi - magnitude < tol)),
    )


def circular_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))


def multiset_mismatch(phases: np.ndarray, image: np.ndarray) -> float:
    """Largest circular distance after matching two phase multisets in order.

    The circle is cut inside the widest gap of the union, so values straddling
    the +-pi seam sort next to each other.
    """
    if phases.size != image.size:
        raise InvalidArgumentError("multisets differ in size")
    if phases.size == 0:
        return 0.0
    union = np.sort(np.concatenate([phases, image]))
    gaps = np.diff(np.concatenate([union, [union[0] + 2 * math.pi]]))
    widest = int(np.argmax(gaps))
    cut = union[widest] + gaps[widest] / 2

    def unrolled(x: np.ndarray) -> np.ndarray:
        return np.sort(np.mod(x - cut, 2 * math.pi))

    return float(np.max(circular_distance(unrolled(phases), unrolled(image))))


def check_quadruplet_symmetry(
    spectrum: Spectrum, tol: float = SYMMETRY_TOLERANCE
) -> SymmetryReport:
    """Worst mismatch of the spectrum against its images under omega -> -omega and omega -> omega + pi.

    A folded spectrum is +-omega symmetric by construction; only
    |omega| -> pi - |omega| is checked for it.
    """
    phases = spectrum.phases
    if spectrum.folded:
        bipartite = float(np.max(np.abs(np.sort(phases) - np.sort(math.pi - phases))))
        return SymmetryReport(0.0, bipartite, tol)
    chiral = multiset_mismatch(phases, wrap_phase(-phases))
    bipartite = multiset_mismatch(phases, wrap_phase(phases + math.pi))
    return SymmetryReport(chiral, bipartite, tol)
