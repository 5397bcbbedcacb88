"""Coin-angle fields: clean, spatially random, temporally random.

Seeding
-------
Every random draw comes from a PCG64 stream built by :func:`sample_stream`::

    SeedSequence(entropy=base_seed, spawn_key=(sample_index, *key))

SeedSequence hashes the entropy and the spawn key together, so sample ``i``
of an ensemble gets an independent stream that depends only on
``(base_seed, i)`` and never on which worker drew it or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from chiralwalk.core.coins import Wall
from chiralwalk.core.lattice import check_sites, site_index
from chiralwalk.exceptions import InvalidArgumentError

# Temporal angles are drawn in fixed-size blocks, each from its own stream,
# so the angle of any step is available without replaying earlier steps.
TEMPORAL_BLOCK = 1024

_STREAM_SPATIAL = 0
_STREAM_TEMPORAL = 1


class DisorderMode(Enum):
    CLEAN = "clean"
    SPATIAL = "spatial"
    TEMPORAL = "temporal"


def sample_stream(base_seed: int, sample_index: int = 0, *key: int) -> np.random.Generator:
    """Independent, reproducible generator for one ensemble sample."""
    if base_seed < 0 or sample_index < 0:
        raise InvalidArgumentError("seeds and sample indices must be non-negative")
    sequence = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(sample_index), *key))
    return np.random.Generator(np.random.PCG64(sequence))


def _check_strength(strength: float) -> float:
    if not math.isfinite(strength) or strength < 0:
        raise InvalidArgumentError(f"disorder strength must be finite and >= 0, got {strength!r}")
    return float(strength)


def _check_angle(theta: float) -> float:
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"mean angle must be finite, got {theta!r}")
    return float(theta)


@dataclass(frozen=True)
class ReflectingSite:
    site: int = 0
    wall: Wall = Wall.MINUS


@dataclass(frozen=True, eq=False)
class CoinField:
    """One disorder realization of the coin angles.

    ``angles`` holds the per-site angles of a spatial field and is ``None``
    otherwise. A temporal field draws one angle per time step, shared by all
    sites, from its own stream (see :meth:`angle_at_step`).
    """

    mode: DisorderMode
    mean_angle: float
    strength: float
    n_sites: int
    angles: np.ndarray | None = None
    reflecting_site: ReflectingSite | None = None
    seed: int = 0
    sample_index: int = 0
    _wall_index: int | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        check_sites(self.n_sites)
        _check_angle(self.mean_angle)
        _check_strength(self.strength)
        if self.mode is DisorderMode.SPATIAL:
            if self.angles is None or np.shape(self.angles) != (self.n_sites,):
                raise InvalidArgumentError("a spatial field needs one angle per site")
            angles = np.array(self.angles, dtype=np.float64)
            angles.setflags(write=False)
            object.__setattr__(self, "angles", angles)
        elif self.angles is not None:
            raise InvalidArgumentError(f"{self.mode.value} fields carry no per-site angles")
        if self.reflecting_site is not None:
            object.__setattr__(
                self, "_wall_index", site_index(self.n_sites, self.reflecting_site.site)
            )

    # -- constructors -----------------------------------------------------

    @classmethod
    def clean(
        cls, theta: float, n_sites: int, *, wall: Wall | str | None = None, wall_site: int = 0
    ) -> "CoinField":
        return cls(
            DisorderMode.CLEAN,
            theta,
            0.0,
            check_sites(n_sites),
            reflecting_site=_wall(wall, wall_site),
        )

    @classmethod
    def spatial(
        cls,
        mean_angle: float,
        strength: float,
        n_sites: int,
        seed: int,
        *,
        sample_index: int = 0,
        wall: Wall | str | None = None,
        wall_site: int = 0,
    ) -> "CoinField":
        n_sites = check_sites(n_sites)
        mean_angle, strength = _check_angle(mean_angle), _check_strength(strength)
        if strength == 0.0:
            angles = np.full(n_sites, mean_angle)
        else:
            rng = sample_stream(seed, sample_index, _STREAM_SPATIAL)
            angles = rng.uniform(mean_angle - strength / 2, mean_angle + strength / 2, n_sites)
        return cls(
            DisorderMode.SPATIAL,
            mean_angle,
            strength,
            n_sites,
            angles=angles,
            reflecting_site=_wall(wall, wall_site),
            seed=seed,
            sample_index=sample_index,
        )

    @classmethod
    def temporal(
        cls,
        mean_angle: float,
        strength: float,
        n_sites: int,
        seed: int,
        *,
        sample_index: int = 0,
        wall: Wall | str | None = None,
        wall_site: int = 0,
    ) -> "CoinField":
        return cls(
            DisorderMode.TEMPORAL,
            _check_angle(mean_angle),
            _check_strength(strength),
            check_sites(n_sites),
            reflecting_site=_wall(wall, wall_site),
            seed=seed,
            sample_index=sample_index,
        )

    # -- angles -----------------------------------------------------------

    def angle_at_step(self, t: int) -> float:
        """Coin angle used by every site during step ``t`` (temporal mode)."""
        if self.mode is not DisorderMode.TEMPORAL:
            raise InvalidArgumentError("only temporal fields change with time")
        if t < 0:
            raise InvalidArgumentError(f"step index must be >= 0, got {t}")
        block = _temporal_block(
            self.seed, self.sample_index, self.mean_angle, self.strength, t // TEMPORAL_BLOCK
        )
        return float(block[t % TEMPORAL_BLOCK])

    def site_angles(self, t: int = 0) -> np.ndarray:
        """Rotation angle at every site during step ``t`` (wall site excluded)."""
        if self.mode is DisorderMode.SPATIAL:
            assert self.angles is not None
            return self.angles
        theta = self.angle_at_step(t) if self.mode is DisorderMode.TEMPORAL else self.mean_angle
        return np.full(self.n_sites, theta)

    def coin_entries(self, t: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Per-site (cos, sin) arrays for step ``t``, with the wall set exactly."""
        theta = self.site_angles(t)
        cos, sin = np.cos(theta), np.sin(theta)
        if self._wall_index is not None:
            assert self.reflecting_site is not None
            cos[self._wall_index] = 0.0
            sin[self._wall_index] = float(self.reflecting_site.wall.value)
        return cos, sin

    @property
    def wall(self) -> Wall | None:
        return None if self.reflecting_site is None else self.reflecting_site.wall

    @property
    def wall_index(self) -> int | None:
        """Array index of the reflecting site, if any."""
        return self._wall_index

    def describe(self) -> dict[str, object]:
        """Metadata echoed into output headers and result objects."""
        return {
            "mode": self.mode.value,
            "mean_angle": self.mean_angle,
            "strength": self.strength,
            "n_sites": self.n_sites,
            "wall": None if self.wall is None else self.wall.symbol,
            "seed": self.seed,
            "sample_index": self.sample_index,
        }


def _wall(wall: Wall | str | None, wall_site: int) -> ReflectingSite | None:
    return None if wall is None else ReflectingSite(wall_site, Wall.parse(wall))


@lru_cache(maxsize=256)
def _temporal_block(
    seed: int, sample_index: int, mean_angle: float, strength: float, block: int
) -> np.ndarray:
    if strength == 0.0:
        angles = np.full(TEMPORAL_BLOCK, mean_angle)
    else:
        rng = sample_stream(seed, sample_index, _STREAM_TEMPORAL, block)
        angles = rng.uniform(mean_angle - strength / 2, mean_angle + strength / 2, TEMPORAL_BLOCK)
    angles.setflags(write=False)
    return angles


def temporal_angles(coin_field: CoinField, steps: int) -> np.ndarray:
    """The angles of steps 0 .. steps-1 of a temporal field."""
    if coin_field.mode is not DisorderMode.TEMPORAL:
        raise InvalidArgumentError("only temporal fields change with time")
    f = coin_field
    blocks = [
        _temporal_block(f.seed, f.sample_index, f.mean_angle, f.strength, b)
        for b in range(-(-steps // TEMPORAL_BLOCK))
    ]
    return np.concatenate(blocks)[:steps] if blocks else np.empty(0)


def sample_spatial_field(
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int,
    *,
    sample_index: int = 0,
    wall: Wall | str | None = None,
) -> CoinField:
    """I.i.d. uniform angles on [mean - strength/2, mean + strength/2], one per site."""
    return CoinField.spatial(
        mean_angle, strength, n_sites, seed, sample_index=sample_index, wall=wall
    )


def make_field(
    mode: DisorderMode | str,
    mean_angle: float,
    strength: float,
    n_sites: int,
    seed: int,
    *,
    sample_index: int = 0,
    wall: Wall | str | None = None,
) -> CoinField:
    """Dispatch on mode; a clean field ignores strength and seed."""
    mode = DisorderMode(mode)
    if mode is DisorderMode.CLEAN:
        return CoinField.clean(mean_angle, n_sites, wall=wall)
    if mode is DisorderMode.SPATIAL:
        return CoinField.spatial(
            mean_angle, strength, n_sites, seed, sample_index=sample_index, wall=wall
        )
    return CoinField.temporal(
        mean_angle, strength, n_sites, seed, sample_index=sample_index, wall=wall
    )
