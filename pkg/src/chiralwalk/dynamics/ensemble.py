"""Disorder-ensemble averages of the walk observables."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial
from typing import Any

import numpy as np
from loguru import logger

from chiralwalk.config import settings
from chiralwalk.core.lattice import site_labels
from chiralwalk.dynamics.observables import distribution_moments
from chiralwalk.dynamics.trajectory import (
    NORM_DRIFT_TOLERANCE,
    SampleSums,
    WalkConfig,
    simulate_samples,
)
from chiralwalk.exceptions import InvalidArgumentError
from chiralwalk.parallel import map_ordered


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Sample-averaged observables with standard errors of the mean.

    ``v_mean`` averages each sample's variance; ``v_of_mean`` is the variance
    of the averaged distribution. The two agree for the clean walk.
    """

    samples: int
    times: np.ndarray
    distributions: np.ndarray
    distribution_stderr: np.ndarray
    survival: np.ndarray
    survival_stderr: np.ndarray
    v_mean: np.ndarray
    v_mean_stderr: np.ndarray
    v_of_mean: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)
    norm_drift: float = 0.0

    @property
    def sites(self) -> np.ndarray:
        return site_labels(self.distributions.shape[-1])

    @property
    def variance(self) -> np.ndarray:
        return self.v_mean

    def index_of(self, t: int) -> int:
        hits = np.flatnonzero(self.times == t)
        if hits.size == 0:
            raise InvalidArgumentError(f"step {t} was not recorded")
        return int(hits[0])

    def distribution_at(self, t: int) -> np.ndarray:
        return self.distributions[self.index_of(t)]


def _mean_and_stderr(total: np.ndarray, total_sq: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    mean = total / count
    if count < 2:
        return mean, np.zeros_like(mean)
    spread = np.maximum(total_sq / count - mean**2, 0.0) * count / (count - 1)
    return mean, np.sqrt(spread / count)


def sample_chunks(samples: int, chunk_size: int) -> list[list[int]]:
    """Split sample indices into fixed chunks; the split never depends on workers."""
    return [list(range(lo, min(lo + chunk_size, samples))) for lo in range(0, samples, chunk_size)]


def run_ensemble(
    config: WalkConfig,
    samples: int,
    *,
    workers: int | None = None,
    on_chunk: Callable[[int], None] | None = None,
) -> EnsembleResult:
    """Average ``samples`` independent realizations of ``config``.

    Samples are propagated in chunks of ``settings.chunk_size`` and the chunk
    sums are reduced in chunk order, so the result is identical for any worker
    count. ``on_chunk`` is called with the number of samples in each finished
    chunk.
    """
    if samples < 1:
        raise InvalidArgumentError(f"samples must be >= 1, got {samples}")
    times = config.record_times()
    chunks = sample_chunks(samples, settings.chunk_size)
    logger.info(
        "ensemble: mode={} dtheta={} N={} steps={} samples={} chunks={}",
        config.mode.value,
        config.strength,
        config.n_sites,
        config.steps,
        samples,
        len(chunks),
    )
    started = time.perf_counter()

    total: SampleSums | None = None
    for index, chunk_sums in enumerate(
        map_ordered(partial(simulate_samples, config, times=times), chunks, workers)
    ):
        total = chunk_sums if total is None else total.merge(chunk_sums)
        logger.debug("chunk {}/{} done", index + 1, len(chunks))
        if on_chunk is not None:
            on_chunk(chunk_sums.count)
    assert total is not None

    distributions, distribution_stderr = _mean_and_stderr(total.p, total.p2, samples)
    survival, survival_stderr = _mean_and_stderr(total.p0, total.p02, samples)
    v_mean, v_mean_stderr = _mean_and_stderr(total.v, total.v2, samples)
    _, v_of_mean = distribution_moments(distributions)

    if total.norm_drift > NORM_DRIFT_TOLERANCE:
        logger.warning("probability drifted by {:.3e} over the run", total.norm_drift)
    logger.info("ensemble finished in {:.2f}s", time.perf_counter() - started)
    return EnsembleResult(
        samples=samples,
        times=times,
        distributions=distributions,
        distribution_stderr=distribution_stderr,
        survival=survival,
        survival_stderr=survival_stderr,
        v_mean=v_mean,
        v_mean_stderr=v_mean_stderr,
        v_of_mean=v_of_mean,
        metadata={**config.describe(), "samples": samples, "chunk_size": settings.chunk_size},
        norm_drift=total.norm_drift,
    )
