"""Density of states: the clean closed form and disorder-ensemble histograms."""

from __future__ import annotations

import math
import time
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Any

import numpy as np
from loguru import logger

from chiralwalk.config import settings
from chiralwalk.core.coins import Wall
from chiralwalk.core.disorder import CoinField
from chiralwalk.exceptions import InvalidArgumentError
from chiralwalk.parallel import map_ordered
from chiralwalk.spectral.spectrum import Spectrum, field_eigenphases, folded_eigenphases
from chiralwalk.spectral.symmetry import default_edge_tolerance, detect_edge_states

# Phases this close to 0 or pi are treated as pinned edge states, not bulk.
EDGE_WINDOW = 1e-6
# One reflecting wall binds at most this many states at each of 0 and pi.
EDGE_STATE_BOUND = 2
DENSE_SOLVER_LIMIT = 1000


class Solver(Enum):
    AUTO = "auto"
    DENSE = "dense"
    FOLDED = "folded"


def clean_dos(omega: float | np.ndarray, theta: float) -> float | np.ndarray:
    """rho(omega) = |sin omega| / (2 pi sqrt(cos^2 theta - cos^2 omega)) inside the bands.

    Zero in the gaps and ``inf`` exactly at a band edge.
    """
    omega_arr = np.asarray(omega, dtype=np.float64)
    gap = math.cos(theta) ** 2 - np.cos(omega_arr) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.abs(np.sin(omega_arr)) / (2 * math.pi * np.sqrt(gap))
    rho = np.where(gap > 0, rho, 0.0)
    rho = np.where(gap == 0, np.inf, rho)
    return float(rho) if rho.ndim == 0 else rho


def clean_integrated_dos(omega: float | np.ndarray, theta: float) -> float | np.ndarray:
    """Fraction of clean states with phase <= omega, counted from -pi."""
    omega_arr = np.asarray(omega, dtype=np.float64)
    c = abs(math.cos(theta))
    if c < 1e-15:
        # Flat bands at +-pi/2.
        value = np.where(omega_arr < -math.pi / 2, 0.0, np.where(omega_arr < math.pi / 2, 0.5, 1.0))
        return float(value) if value.ndim == 0 else value
    edge = math.acos(c)

    def band(x: np.ndarray) -> np.ndarray:
        return (math.pi / 2 - np.arcsin(np.clip(np.cos(x) / c, -1.0, 1.0))) / (2 * math.pi)

    value = np.select(
        [
            omega_arr < -math.pi + edge,
            omega_arr <= -edge,
            omega_arr < edge,
            omega_arr <= math.pi - edge,
        ],
        [0.0, 0.5 - band(omega_arr), 0.5, 0.5 + band(omega_arr)],
        default=1.0,
    )
    return float(value) if value.ndim == 0 else value


def clean_dos_bin_average(edges: np.ndarray, theta: float) -> np.ndarray:
    """Exact average of the clean density over each histogram bin."""
    edges = np.asarray(edges, dtype=np.float64)
    return np.diff(clean_integrated_dos(edges, theta)) / np.diff(edges)


@dataclass(frozen=True, eq=False)
class DosHistogram:
    """Bulk density over (-pi, pi], normalized to unit integral.

    States pinned within ``EDGE_WINDOW`` of 0 or pi are left out of the bins;
    ``edge_weight`` is their fraction of all states.
    """

    edges: np.ndarray
    density: np.ndarray
    samples: int
    n_sites: int
    edge_weight: float = 0.0
    edge_counts: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def integral(self) -> float:
        return float(np.sum(self.density * self.widths))

    @property
    def gap_closed(self) -> bool:
        """More states sit at 0 or pi than a wall can bind, so bulk states fill the gap."""
        if self.edge_counts.size == 0:
            return False
        return bool(np.any(self.edge_counts.mean(axis=0) > EDGE_STATE_BOUND))

    def edge_summary(self) -> dict[str, Any]:
        """Per-sample counts near 0 and pi: most common pair and mean.

        With ``gap_closed`` set the counts are bulk states, not edge states.
        """
        if self.edge_counts.size == 0:
            return {"mode": None, "mean": None, "samples": 0, "gap_closed": False}
        common = Counter(map(tuple, self.edge_counts.tolist())).most_common(1)[0][0]
        return {
            "mode": [int(common[0]), int(common[1])],
            "mean": [float(x) for x in self.edge_counts.mean(axis=0)],
            "samples": int(self.edge_counts.shape[0]),
            "gap_closed": self.gap_closed,
        }


@dataclass
class _Tally:
    counts: np.ndarray
    edge_states: float
    states: int
    edge_counts: list[tuple[int, int]]

    def merge(self, other: "_Tally") -> "_Tally":
        return _Tally(
            self.counts + other.counts,
            self.edge_states + other.edge_states,
            self.states + other.states,
            self.edge_counts + other.edge_counts,
        )


def pick_solver(solver: Solver | str, n_sites: int) -> Solver:
    solver = Solver(solver)
    if solver is Solver.AUTO:
        return Solver.DENSE if n_sites <= DENSE_SOLVER_LIMIT else Solver.FOLDED
    return solver


def spectrum_of(coin_field: CoinField, solver: Solver | str = Solver.AUTO) -> Spectrum:
    if pick_solver(solver, coin_field.n_sites) is Solver.DENSE:
        return field_eigenphases(coin_field)
    return folded_eigenphases(coin_field)


def _tally(spectrum: Spectrum, edges: np.ndarray) -> _Tally:
    phases = spectrum.phases
    pinned = (np.abs(phases) < EDGE_WINDOW) | (math.pi - np.abs(phases) < EDGE_WINDOW)
    bulk = phases[~pinned]
    if spectrum.folded:
        counts = 0.5 * (np.histogram(bulk, edges)[0] + np.histogram(-bulk, edges)[0])
    else:
        counts = np.histogram(bulk, edges)[0].astype(np.float64)
    found = detect_edge_states(spectrum, default_edge_tolerance(spectrum))
    return _Tally(counts, float(np.count_nonzero(pinned)), phases.size, [tuple(found)])


def _sample_chunk(
    indices: list[int],
    *,
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int,
    wall: Wall | None,
    solver: Solver,
    edges: np.ndarray,
) -> _Tally:
    tally: _Tally | None = None
    for index in indices:
        coin_field = CoinField.spatial(
            mean_angle, strength, n_sites, seed, sample_index=index, wall=wall
        )
        part = _tally(spectrum_of(coin_field, solver), edges)
        tally = part if tally is None else tally.merge(part)
    assert tally is not None
    return tally


def dos_ensemble(
    mean_angle: float,
    strength: float,
    n_sites: int,
    samples: int,
    *,
    bins: int | None = None,
    seed: int = 0,
    wall: Wall | str | None = Wall.MINUS,
    solver: Solver | str = Solver.AUTO,
    workers: int | None = None,
    on_chunk: Callable[[int], None] | None = None,
) -> DosHistogram:
    """Histogram the eigenphases of ``samples`` spatially disordered rings.

    Per-sample spectra are tallied in chunks of ``settings.chunk_size`` and
    merged in chunk order.
    """
    if samples < 1:
        raise InvalidArgumentError(f"samples must be >= 1, got {samples}")
    bins = settings.dos_bins if bins is None else bins
    if bins < 1:
        raise InvalidArgumentError(f"bins must be >= 1, got {bins}")
    wall = None if wall is None else Wall.parse(wall)
    chosen = pick_solver(solver, n_sites)
    edges = np.linspace(-math.pi, math.pi, bins + 1)
    chunks = [
        list(range(lo, min(lo + settings.chunk_size, samples)))
        for lo in range(0, samples, settings.chunk_size)
    ]
    logger.info(
        "dos: theta={} dtheta={} N={} samples={} bins={} solver={}",
        mean_angle,
        strength,
        n_sites,
        samples,
        bins,
        chosen.value,
    )
    started = time.perf_counter()
    work = partial(
        _sample_chunk,
        mean_angle=mean_angle,
        strength=strength,
        n_sites=n_sites,
        seed=seed,
        wall=wall,
        solver=chosen,
        edges=edges,
    )
    total: _Tally | None = None
    for part in map_ordered(work, chunks, workers):
        total = part if total is None else total.merge(part)
        if on_chunk is not None:
            on_chunk(len(part.edge_counts))
    assert total is not None

    bulk_states = float(np.sum(total.counts))
    if bulk_states == 0:
        density = np.zeros(bins)
    else:
        density = total.counts / (bulk_states * np.diff(edges))
    logger.info("dos finished in {:.2f}s", time.perf_counter() - started)
    return DosHistogram(
        edges=edges,
        density=density,
        samples=samples,
        n_sites=n_sites,
        edge_weight=total.edge_states / total.states,
        edge_counts=np.asarray(total.edge_counts, dtype=np.int64),
        metadata={
            "mean_angle": mean_angle,
            "strength": strength,
            "n_sites": n_sites,
            "samples": samples,
            "bins": bins,
            "seed": seed,
            "wall": None if wall is None else wall.symbol,
            "solver": chosen.value,
        },
    )


def critical_points(
    centers: np.ndarray,
    density: np.ndarray,
    center: float = math.pi / 2,
    max_offset: float = math.pi / 4,
) -> tuple[np.ndarray, np.ndarray]:
    """(delta_omega, rho) pairs on the right of ``center`` from binned densities.

    The density is averaged over the four equivalent points +-center +- delta,
    which the chiral and bipartite pairings make equal.
    """
    centers = np.asarray(centers, dtype=np.float64)
    density = np.asarray(density, dtype=np.float64)
    offsets = centers[(centers > center) & (centers - center <= max_offset)] - center
    images = [center + offsets, center - offsets, -center + offsets, -center - offsets]
    rho = np.mean([np.interp(x, centers, density) for x in images], axis=0)
    keep = rho > 0
    return offsets[keep], rho[keep]


def dos_near_critical(
    histogram: DosHistogram,
    center: float = math.pi / 2,
    max_offset: float = math.pi / 4,
) -> tuple[np.ndarray, np.ndarray]:
    return critical_points(histogram.centers, histogram.density, center, max_offset)


def critical_peak(histogram: DosHistogram, center: float = math.pi / 2, window: float = 0.02) -> float:
    """Highest binned density within ``window`` of +-center, averaged over the two sides."""
    centers = histogram.centers
    peaks = []
    for point in (center, -center):
        near = np.abs(centers - point) < window
        if not np.any(near):
            raise InvalidArgumentError(f"no bin centre within {window} of {point}")
        peaks.append(float(histogram.density[near].max()))
    return float(np.mean(peaks))
