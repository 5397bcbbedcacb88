"""Single-realization runs and the batched propagation engine behind ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger

from chiralwalk.core.coins import Wall
from chiralwalk.core.disorder import CoinField, DisorderMode, make_field, temporal_angles
from chiralwalk.core.evolution import apply_coin, apply_reflecting_site, apply_shift, check_guard
from chiralwalk.core.lattice import Topology, check_sites, initial_state, site_labels
from chiralwalk.dynamics.observables import distribution_moments
from chiralwalk.exceptions import InvalidArgumentError

# Every step is recorded up to this time; beyond it records are log-spaced.
DENSE_RECORD_LIMIT = 100
RECORDS_PER_DECADE = 32
NORM_DRIFT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class WalkConfig:
    """What to run: disorder model, lattice, duration and seed.

    ``n_sites=None`` picks the smallest lattice the walker cannot outrun,
    ``2 * steps + 4``. ``stride=None`` uses :func:`default_record_times`.
    """

    mode: DisorderMode = DisorderMode.CLEAN
    mean_angle: float = math.pi / 4
    strength: float = 0.0
    steps: int = 100
    n_sites: int | None = None
    topology: Topology = Topology.RING
    wall: Wall | None = None
    seed: int = 0
    stride: int | None = None
    # Steps recorded in addition to the stride or default schedule.
    extra_times: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", DisorderMode(self.mode))
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.wall is not None:
            object.__setattr__(self, "wall", Wall.parse(self.wall))
        if self.steps < 0:
            raise InvalidArgumentError(f"steps must be >= 0, got {self.steps}")
        if any(not 0 <= t <= self.steps for t in self.extra_times):
            raise InvalidArgumentError("extra record times must lie in [0, steps]")
        if self.stride is not None and self.stride < 1:
            raise InvalidArgumentError(f"stride must be >= 1, got {self.stride}")
        if self.seed < 0:
            raise InvalidArgumentError(f"seed must be >= 0, got {self.seed}")
        minimum = max(4, 2 * self.steps + 4)
        if self.n_sites is None:
            object.__setattr__(self, "n_sites", minimum)
        n_sites = check_sites(self.n_sites)
        if n_sites < minimum:
            if self.topology is Topology.OPEN_LINE_GUARD:
                raise InvalidArgumentError(
                    f"an open line needs N >= 2*steps + 4 = {minimum}, got {n_sites}"
                )
            logger.debug("ring of {} sites will wrap within {} steps", n_sites, self.steps)

    @property
    def periodic(self) -> bool:
        return self.topology is Topology.RING

    def field_for(self, sample_index: int) -> CoinField:
        assert self.n_sites is not None
        return make_field(
            self.mode,
            self.mean_angle,
            self.strength,
            self.n_sites,
            self.seed,
            sample_index=sample_index,
            wall=self.wall,
        )

    def record_times(self) -> np.ndarray:
        if self.stride is None:
            times = default_record_times(self.steps)
        else:
            times = np.union1d(np.arange(0, self.steps + 1, self.stride), [self.steps])
        return np.union1d(times, np.asarray(self.extra_times, dtype=np.int64)).astype(np.int64)

    def describe(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "mean_angle": self.mean_angle,
            "strength": self.strength,
            "steps": self.steps,
            "n_sites": self.n_sites,
            "topology": self.topology.value,
            "wall": None if self.wall is None else self.wall.symbol,
            "seed": self.seed,
            "stride": self.stride,
        }


def default_record_times(steps: int) -> np.ndarray:
    """Every step up to 100, then 32 log-spaced steps per decade, always ending at ``steps``."""
    if steps < 0:
        raise InvalidArgumentError(f"steps must be >= 0, got {steps}")
    dense = np.arange(0, min(steps, DENSE_RECORD_LIMIT) + 1)
    if steps <= DENSE_RECORD_LIMIT:
        return dense.astype(np.int64)
    decades = math.log10(steps / DENSE_RECORD_LIMIT)
    count = max(2, math.ceil(RECORDS_PER_DECADE * decades) + 1)
    sparse = np.rint(np.logspace(2, math.log10(steps), count)).astype(np.int64)
    return np.union1d(np.union1d(dense, sparse), [steps]).astype(np.int64)


@dataclass
class SampleSums:
    """Running sums over samples of the recorded observables."""

    count: int
    p: np.ndarray
    p2: np.ndarray
    p0: np.ndarray
    p02: np.ndarray
    v: np.ndarray
    v2: np.ndarray
    norm_drift: float = 0.0

    def merge(self, other: "SampleSums") -> "SampleSums":
        return SampleSums(
            self.count + other.count,
            self.p + other.p,
            self.p2 + other.p2,
            self.p0 + other.p0,
            self.p02 + other.p02,
            self.v + other.v,
            self.v2 + other.v2,
            max(self.norm_drift, other.norm_drift),
        )


def simulate_samples(
    config: WalkConfig, sample_indices: list[int], times: np.ndarray | None = None
) -> SampleSums:
    """Propagate the given samples together as one ``(B, N, 2)`` batch.

    Each sample's field comes from its own stream, so a sample evolves to the
    same bits whichever batch it lands in.
    """
    if not sample_indices:
        raise InvalidArgumentError("at least one sample is required")
    assert config.n_sites is not None
    times = config.record_times() if times is None else np.asarray(times, dtype=np.int64)
    n_sites, batch = config.n_sites, len(sample_indices)
    fields = [config.field_for(i) for i in sample_indices]

    amps = np.broadcast_to(initial_state(n_sites).amplitudes, (batch, n_sites, 2)).copy()
    temporal = config.mode is DisorderMode.TEMPORAL
    if temporal:
        angles = np.stack([temporal_angles(f, config.steps) for f in fields])
        cos_t, sin_t = np.cos(angles), np.sin(angles)
        wall_index = fields[0].wall_index
        wall_sign = 0 if config.wall is None else config.wall.value
    else:
        entries = [f.coin_entries() for f in fields]
        cos = np.stack([c for c, _ in entries])
        sin = np.stack([s for _, s in entries])

    records = len(times)
    sums = SampleSums(
        batch,
        np.zeros((records, n_sites)),
        np.zeros((records, n_sites)),
        np.zeros(records),
        np.zeros(records),
        np.zeros(records),
        np.zeros(records),
    )
    origin = n_sites // 2

    def record(slot: int) -> None:
        probs = np.sum(amps.real**2 + amps.imag**2, axis=-1)
        _, variance = distribution_moments(probs)
        sums.norm_drift = max(sums.norm_drift, float(np.max(np.abs(probs.sum(axis=-1) - 1.0))))
        sums.p[slot] = probs.sum(axis=0)
        sums.p2[slot] = (probs**2).sum(axis=0)
        sums.p0[slot] = probs[:, origin].sum()
        sums.p02[slot] = (probs[:, origin] ** 2).sum()
        sums.v[slot] = variance.sum()
        sums.v2[slot] = (variance**2).sum()

    slot = 0
    for t in range(config.steps + 1):
        if slot < records and times[slot] == t:
            record(slot)
            slot += 1
        if t == config.steps:
            break
        if not config.periodic:
            check_guard(amps)
        if temporal:
            coined = apply_coin(amps, cos_t[:, t, None], sin_t[:, t, None])
            if wall_index is not None:
                apply_reflecting_site(coined, amps, wall_index, wall_sign)
        else:
            coined = apply_coin(amps, cos, sin)
        amps = apply_shift(coined, config.periodic)
    return sums


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Observables of one realization at the recorded steps."""

    times: np.ndarray
    distributions: np.ndarray
    survival: np.ndarray
    variance: np.ndarray
    stride: int | None
    metadata: dict[str, Any] = field(default_factory=dict)
    norm_drift: float = 0.0

    @property
    def sites(self) -> np.ndarray:
        return site_labels(self.distributions.shape[-1])

    def index_of(self, t: int) -> int:
        hits = np.flatnonzero(self.times == t)
        if hits.size == 0:
            raise InvalidArgumentError(f"step {t} was not recorded")
        return int(hits[0])

    def distribution_at(self, t: int) -> np.ndarray:
        return self.distributions[self.index_of(t)]


def run_trajectory(config: WalkConfig, sample_index: int = 0) -> Trajectory:
    """Evolve one disorder realization from the origin state and record observables."""
    logger.info(
        "trajectory: mode={} theta={} dtheta={} N={} steps={} sample={}",
        config.mode.value,
        config.mean_angle,
        config.strength,
        config.n_sites,
        config.steps,
        sample_index,
    )
    sums = simulate_samples(config, [sample_index])
    if sums.norm_drift > NORM_DRIFT_TOLERANCE:
        logger.warning("probability drifted by {:.3e} over the run", sums.norm_drift)
    return Trajectory(
        times=config.record_times(),
        distributions=sums.p,
        survival=sums.p0,
        variance=sums.v,
        stride=config.stride,
        metadata={**config.describe(), "sample_index": sample_index},
        norm_drift=sums.norm_drift,
    )
