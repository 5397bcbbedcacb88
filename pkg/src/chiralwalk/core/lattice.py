"""Lattice geometry and the walker wavefunction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from chiralwalk.exceptions import InvalidArgumentError

R, L = 0, 1
NORM_TOLERANCE = 1e-12


def check_sites(n_sites: int, minimum: int = 4) -> int:
    """Validate a system length: even (bipartite pairing on a ring) and >= minimum."""
    if isinstance(n_sites, bool) or int(n_sites) != n_sites:
        raise InvalidArgumentError(f"system length must be an integer, got {n_sites!r}")
    n_sites = int(n_sites)
    if n_sites < minimum:
        raise InvalidArgumentError(f"system length must be >= {minimum}, got {n_sites}")
    if n_sites % 2:
        raise InvalidArgumentError(f"system length must be even, got {n_sites}")
    return n_sites


def site_labels(n_sites: int) -> np.ndarray:
    """Site labels n = -N/2 .. N/2 - 1 in array order."""
    return np.arange(-(n_sites // 2), n_sites // 2)


def site_index(n_sites: int, site: int) -> int:
    half = n_sites // 2
    if not -half <= site < half:
        raise InvalidArgumentError(f"site {site} outside lattice [-{half}, {half - 1}]")
    return site + half


class Topology(Enum):
    RING = "ring"
    OPEN_LINE_GUARD = "open-line-guard"


@dataclass(frozen=True)
class BoundaryConfig:
    """How the lattice ends. Wall placement lives on the CoinField."""

    topology: Topology = Topology.RING

    @classmethod
    def ring(cls) -> "BoundaryConfig":
        return cls(Topology.RING)

    @classmethod
    def open_line(cls) -> "BoundaryConfig":
        return cls(Topology.OPEN_LINE_GUARD)

    @property
    def periodic(self) -> bool:
        return self.topology is Topology.RING


@dataclass(frozen=True, eq=False)
class WalkerState:
    """Amplitudes psi[n, sigma] with sigma in (R, L), stored as an (N, 2) array.

    The array is read-only; operations return new states.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[1] != 2:
            raise InvalidArgumentError(f"amplitudes must have shape (N, 2), got {amps.shape}")
        check_sites(amps.shape[0])
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: np.ndarray, *, normalize: bool = False) -> "WalkerState":
        """Build a state, normalizing it or checking it is normalized."""
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = math.sqrt(float(np.sum(np.abs(amps) ** 2)))
        if normalize:
            if norm == 0.0:
                raise InvalidArgumentError("cannot normalize a zero state")
            amps = amps / norm
        elif abs(norm**2 - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"state is not normalized: |psi|^2 = {norm**2!r}")
        return cls(amps)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return site_labels(self.n_sites)

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, site: int, chirality: int) -> complex:
        return complex(self.amplitudes[site_index(self.n_sites, site), chirality])


def initial_state(n_sites: int) -> WalkerState:
    """Walker at the origin in (|R> + i|L>)/sqrt(2).

    Real coins never mix the real R part with the imaginary L part, which keeps
    the clean distribution mirror-symmetric.
    """
    n_sites = check_sites(n_sites)
    amps = np.zeros((n_sites, 2), dtype=np.complex128)
    origin = site_index(n_sites, 0)
    amps[origin, R] = 1.0 / math.sqrt(2.0)
    amps[origin, L] = 1j / math.sqrt(2.0)
    return WalkerState(amps)


def localized_state(n_sites: int, site: int, spinor: tuple[complex, complex]) -> WalkerState:
    """Delta-localized state at ``site`` with the given (R, L) spinor (normalized)."""
    n_sites = check_sites(n_sites)
    amps = np.zeros((n_sites, 2), dtype=np.complex128)
    amps[site_index(n_sites, site)] = spinor
    return WalkerState.from_amplitudes(amps, normalize=True)
