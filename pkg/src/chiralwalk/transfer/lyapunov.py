"""Lyapunov exponents and localization lengths from long transfer-matrix products.

The chain is generated chunk by chunk. Within a chunk the matrices are
multiplied into block products of ``renorm_interval`` sites with batched
matmuls; a single vector is then pushed through the block products in order
and renormalized after each one, its log-norms giving the growth rate.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import partial
from typing import Any

import numpy as np
from loguru import logger

from chiralwalk.config import settings
from chiralwalk.core.disorder import sample_stream
from chiralwalk.exceptions import InvalidArgumentError, NumericalError
from chiralwalk.parallel import map_ordered
from chiralwalk.transfer.matrices import SINGULAR_COS, transfer_stack

MIN_CHAIN_LENGTH = 10_000
DELTA_OMEGA_FLOOR = 1e-15
CHUNK_SITES = 1 << 20
# Block products beyond this magnitude trigger a smaller renormalization interval.
OVERFLOW_GUARD = 1e150
_SPATIAL_STREAM = 0


@dataclass(frozen=True)
class LyapunovResult:
    gamma: float
    stderr: float
    n_sites: int
    omega: float
    mean_angle: float
    strength: float
    seed: int
    renorm_interval: int
    blocks: int
    resampled: int = 0
    delta_omega: float | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def xi(self) -> float:
        return math.inf if self.gamma == 0 else 1.0 / self.gamma

    @property
    def xi_stderr(self) -> float:
        """Error of xi propagated from gamma to first order."""
        return math.inf if self.gamma == 0 else self.stderr / self.gamma**2

    def describe(self) -> dict[str, Any]:
        return {
            "omega": self.omega,
            "delta_omega": self.delta_omega,
            "mean_angle": self.mean_angle,
            "strength": self.strength,
            "n_sites": self.n_sites,
            "seed": self.seed,
            "renorm_interval": self.renorm_interval,
            "blocks": self.blocks,
            "resampled": self.resampled,
        }


def chain_angles(
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int,
    sample_index: int = 0,
    chunk: int = CHUNK_SITES,
) -> Iterator[tuple[np.ndarray, int]]:
    """Yield the chain's coin angles chunk by chunk with the number resampled.

    Angles with |cos theta| <= 1e-12 are redrawn from the same interval.
    """
    rng = sample_stream(seed, sample_index, _SPATIAL_STREAM)
    lo, hi = mean_angle - strength / 2, mean_angle + strength / 2
    for start in range(0, n_sites, chunk):
        size = min(chunk, n_sites - start)
        thetas = np.full(size, mean_angle) if strength == 0 else rng.uniform(lo, hi, size)
        resampled = 0
        while True:
            bad = np.flatnonzero(np.abs(np.cos(thetas)) <= SINGULAR_COS)
            if bad.size == 0:
                break
            if strength == 0:
                raise InvalidArgumentError(f"mean angle {mean_angle!r} makes every coin reflecting")
            resampled += bad.size
            thetas[bad] = rng.uniform(lo, hi, bad.size)
        yield thetas, resampled


def block_products(stack: np.ndarray, interval: int) -> tuple[np.ndarray, np.ndarray]:
    """Ordered products T_{k+m-1} ... T_k over consecutive runs of ``interval`` matrices.

    Returns the products and the number of matrices in each; a shorter
    trailing run forms the last block.
    """
    count = stack.shape[0]
    full = count // interval
    pieces, sizes = [], []
    if full:
        grouped = stack[: full * interval].reshape(full, interval, 2, 2)
        product = grouped[:, 0]
        for j in range(1, interval):
            product = grouped[:, j] @ product
        pieces.append(product)
        sizes.append(np.full(full, interval))
    rest = count - full * interval
    if rest:
        product = stack[full * interval]
        for matrix in stack[full * interval + 1 :]:
            product = matrix @ product
        pieces.append(product[None])
        sizes.append(np.array([rest]))
    return np.concatenate(pieces), np.concatenate(sizes)


def _safe_block_products(stack: np.ndarray, interval: int) -> tuple[np.ndarray, np.ndarray, int]:
    while True:
        products, sizes = block_products(stack, interval)
        if np.all(np.isfinite(products)) and np.max(np.abs(products)) <= OVERFLOW_GUARD:
            return products, sizes, interval
        if interval == 1:
            raise NumericalError(
                "transfer matrices overflow even without grouping",
                diagnostics={"max_entry": float(np.max(np.abs(stack)))},
            )
        interval //= 2
        logger.warning("renormalization interval halved to {} to avoid overflow", interval)


def _propagate_vector(
    products: np.ndarray, vector: tuple[complex, complex]
) -> tuple[list[float], tuple[complex, complex]]:
    a, b = vector
    logs = []
    for p00, p01, p10, p11 in products.reshape(-1, 4).tolist():
        x, y = p00 * a + p01 * b, p10 * a + p11 * b
        norm = math.hypot(abs(x), abs(y))
        logs.append(math.log(norm))
        a, b = x / norm, y / norm
    return logs, (a, b)


def _propagate_frame(
    products: np.ndarray, frame: tuple[complex, complex, complex, complex]
) -> tuple[list[float], list[float], tuple[complex, complex, complex, complex]]:
    """Gram-Schmidt (QR) propagation of two column vectors (a, b) and (c, d)."""
    a, b, c, d = frame
    first, second = [], []
    for p00, p01, p10, p11 in products.reshape(-1, 4).tolist():
        x, y = p00 * a + p01 * b, p10 * a + p11 * b
        u, w = p00 * c + p01 * d, p10 * c + p11 * d
        r11 = math.hypot(abs(x), abs(y))
        x, y = x / r11, y / r11
        overlap = x.conjugate() * u + y.conjugate() * w
        u, w = u - overlap * x, w - overlap * y
        r22 = math.hypot(abs(u), abs(w))
        first.append(math.log(r11))
        second.append(math.log(r22))
        a, b, c, d = x, y, u / r22, w / r22
    return first, second, (a, b, c, d)


def _block_stderr(logs: np.ndarray, sizes: np.ndarray, n_sites: int, blocks: int) -> float:
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    group = np.minimum(starts * blocks // n_sites, blocks - 1)
    grown = np.bincount(group, weights=logs, minlength=blocks)
    sites = np.bincount(group, weights=sizes, minlength=blocks)
    rates = grown / sites
    return float(np.std(rates, ddof=1) / math.sqrt(blocks))


def _check_chain(n_sites: int, strength: float, blocks: int) -> None:
    if n_sites < MIN_CHAIN_LENGTH:
        raise InvalidArgumentError(f"chain length must be >= {MIN_CHAIN_LENGTH}, got {n_sites}")
    if not math.isfinite(strength) or strength < 0:
        raise InvalidArgumentError(f"disorder strength must be finite and >= 0, got {strength!r}")
    if blocks < 2:
        raise InvalidArgumentError(f"need at least two error blocks, got {blocks}")


def _run_chain(
    omega: float,
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int,
    sample_index: int,
    interval: int,
    frame: bool,
) -> tuple[list[np.ndarray], np.ndarray, int, int]:
    vector: Any = (1.0 + 0j, 0j, 0j, 1.0 + 0j) if frame else (1.0 + 0j, 0j)
    first: list[float] = []
    second: list[float] = []
    sizes: list[np.ndarray] = []
    resampled = 0
    for thetas, redrawn in chain_angles(mean_angle, strength, n_sites, seed, sample_index):
        resampled += redrawn
        products, chunk_sizes, interval = _safe_block_products(
            transfer_stack(thetas, omega), interval
        )
        sizes.append(chunk_sizes)
        if frame:
            a, b, vector = _propagate_frame(products, vector)
            first += a
            second += b
        else:
            a, vector = _propagate_vector(products, vector)
            first += a
    logs = [np.asarray(first)] + ([np.asarray(second)] if frame else [])
    return logs, np.concatenate(sizes), interval, resampled


def lyapunov(
    omega: float,
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int = 0,
    *,
    renorm_interval: int | None = None,
    blocks: int | None = None,
    sample_index: int = 0,
    delta_omega: float | None = None,
) -> LyapunovResult:
    """Largest Lyapunov exponent gamma >= 0 of the chain at quasi-energy ``omega``."""
    interval = settings.renorm_interval if renorm_interval is None else renorm_interval
    blocks = settings.lyapunov_blocks if blocks is None else blocks
    if interval < 1:
        raise InvalidArgumentError(f"renorm_interval must be >= 1, got {interval}")
    _check_chain(n_sites, strength, blocks)
    started = time.perf_counter()
    (logs,), sizes, used, resampled = _run_chain(
        omega, mean_angle, strength, n_sites, seed, sample_index, interval, frame=False
    )
    gamma = math.fsum(logs.tolist()) / n_sites
    if resampled:
        logger.warning("{} singular coin angles were resampled", resampled)
    logger.debug(
        "lyapunov omega={} dtheta={} N={}: gamma={:.6g} in {:.2f}s",
        omega,
        strength,
        n_sites,
        gamma,
        time.perf_counter() - started,
    )
    return LyapunovResult(
        gamma=max(0.0, gamma),
        stderr=_block_stderr(logs, sizes, n_sites, blocks),
        n_sites=n_sites,
        omega=omega,
        mean_angle=mean_angle,
        strength=strength,
        seed=seed,
        renorm_interval=used,
        blocks=blocks,
        resampled=resampled,
        delta_omega=delta_omega,
    )


def lyapunov_pair(
    omega: float,
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int = 0,
    *,
    renorm_interval: int | None = None,
    blocks: int | None = None,
    sample_index: int = 0,
) -> tuple[LyapunovResult, LyapunovResult]:
    """Both exponents of the product from a QR-propagated 2-frame.

    det T_n = 1, so the two exponents sum to zero up to statistical error.
    """
    interval = settings.renorm_interval if renorm_interval is None else renorm_interval
    blocks = settings.lyapunov_blocks if blocks is None else blocks
    _check_chain(n_sites, strength, blocks)
    (first, second), sizes, used, resampled = _run_chain(
        omega, mean_angle, strength, n_sites, seed, sample_index, interval, frame=True
    )
    results = []
    for logs in (first, second):
        results.append(
            LyapunovResult(
                gamma=math.fsum(logs.tolist()) / n_sites,
                stderr=_block_stderr(logs, sizes, n_sites, blocks),
                n_sites=n_sites,
                omega=omega,
                mean_angle=mean_angle,
                strength=strength,
                seed=seed,
                renorm_interval=used,
                blocks=blocks,
                resampled=resampled,
            )
        )
    return results[0], results[1]


def _evaluate(point: tuple[float, float, float | None], **kwargs: Any) -> LyapunovResult:
    omega, strength, delta = point
    return lyapunov(omega, strength=strength, delta_omega=delta, **kwargs)


def lyapunov_sweep(
    points: Sequence[tuple[float, float, float | None]],
    mean_angle: float,
    n_sites: int,
    seed: int = 0,
    *,
    workers: int | None = None,
    on_point: Callable[[int], None] | None = None,
    **kwargs: Any,
) -> list[LyapunovResult]:
    """Evaluate ``(omega, strength, delta_omega)`` points as independent tasks, in order."""
    work = partial(_evaluate, mean_angle=mean_angle, n_sites=n_sites, seed=seed, **kwargs)
    results = []
    for result in map_ordered(work, points, workers):
        results.append(result)
        if on_point is not None:
            on_point(1)
    return results


def xi_vs_energy(
    delta_omegas: Sequence[float],
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int = 0,
    **kwargs: Any,
) -> list[LyapunovResult]:
    """Localization length at omega = pi/2 - delta_omega for each delta_omega.

    Every point uses the same disorder realization.
    """
    for delta in delta_omegas:
        if not DELTA_OMEGA_FLOOR <= delta <= 1e-1:
            raise InvalidArgumentError(
                f"delta omega must lie in [{DELTA_OMEGA_FLOOR:g}, 0.1], got {delta!r}"
            )
    points = [(math.pi / 2 - d, strength, d) for d in delta_omegas]
    logger.info(
        "xi sweep: {} energies, dtheta={} N={} seed={}", len(points), strength, n_sites, seed
    )
    return lyapunov_sweep(points, mean_angle, n_sites, seed, **kwargs)


def inverse_xi_vs_disorder(
    omega: float,
    mean_angle: float,
    strengths: Sequence[float],
    n_sites: int,
    seed: int = 0,
    **kwargs: Any,
) -> list[LyapunovResult]:
    """gamma = 1/xi at fixed omega across disorder strengths."""
    points = [(omega, s, None) for s in strengths]
    logger.info(
        "disorder sweep: {} strengths at omega={} N={} seed={}", len(points), omega, n_sites, seed
    )
    return lyapunov_sweep(points, mean_angle, n_sites, seed, **kwargs)


def clean_gap_exponent(theta: float) -> float:
    """gamma at omega = 0 of a clean chain, |ln|tan(pi/4 - theta/2)||."""
    value = abs(math.tan(math.pi / 4 - theta / 2))
    if value == 0 or not math.isfinite(value):
        return math.inf
    return abs(math.log(value))


def zero_energy_exponent(thetas: np.ndarray) -> float:
    """Exact gamma at omega = 0 for given angles.

    At omega = 0 all T_n share the eigenvectors (1, +-1), so the product's
    exponent is the mean log of one eigenvalue.
    """
    thetas = np.asarray(thetas, dtype=np.float64)
    return abs(math.fsum(np.log(np.abs(np.tan(math.pi / 4 - thetas / 2))).tolist()) / thetas.size)
