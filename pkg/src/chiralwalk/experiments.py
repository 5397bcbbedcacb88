"""Schema-validated run configurations for the command-line experiments.

Each config is a frozen pydantic model. Its JSON dump (minus the output path)
is echoed into the result file header, and :func:`config_for` turns such a
dump back into a config so a run can be replayed from its own output.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from chiralwalk.config import settings
from chiralwalk.core.disorder import DisorderMode
from chiralwalk.core.lattice import Topology
from chiralwalk.exceptions import ConfigError
from chiralwalk.scaling.models import ScalingModel
from chiralwalk.spectral.dos import Solver
from chiralwalk.transfer.lyapunov import DELTA_OMEGA_FLOOR, MIN_CHAIN_LENGTH

# "pi/4", "-pi/8", "2pi", "3pi/2", "3*pi/4", "1/2 pi"
_ANGLE_RE = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<num>\d+(?:/\d+)?)?\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d+))?$"
)


def parse_angle(text: str | float) -> float:
    """Angle in radians from a symbolic multiple of pi or a plain number.

    The coefficient is kept as an exact fraction p/q and the result is
    ``p * pi / q``, so "pi/4" gives exactly ``math.pi / 4``.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    elif not isinstance(text, str):
        raise ValueError(f"not an angle: {text!r}")
    else:
        cleaned = text.strip().lower()
        match = _ANGLE_RE.match(cleaned)
        if match:
            coefficient = Fraction(match["num"] or 1) / Fraction(match["den"] or 1)
            if match["sign"] == "-":
                coefficient = -coefficient
            value = coefficient.numerator * math.pi / coefficient.denominator
        else:
            try:
                value = float(cleaned)
            except ValueError:
                raise ValueError(f"not an angle: {text!r} (try 'pi/4', '2pi' or 0.5)") from None
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {text!r}")
    return value


def parse_angle_range(text: str) -> tuple[float, float]:
    """``"a..b"`` with each end parsed by :func:`parse_angle`."""
    if ".." not in text:
        raise ValueError(f"expected a range 'a..b', got {text!r}")
    lo, hi = text.split("..", 1)
    return parse_angle(lo), parse_angle(hi)


Angle = Annotated[float, BeforeValidator(parse_angle)]
Strength = Annotated[float, BeforeValidator(parse_angle), Field(ge=0)]
WallChoice = Literal["minus", "plus", "none"]


def _even_sites(value: int | None) -> int | None:
    if value is not None and (value < 4 or value % 2):
        raise ValueError(f"N must be an even integer >= 4, got {value}")
    return value


class _RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    # Where results go; not echoed into headers so a replay elsewhere is byte-identical.
    output: Path = Field(exclude=True)

    def header(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class EvolveConfig(_RunConfig):
    command: Literal["evolve"] = "evolve"
    mode: DisorderMode = DisorderMode.CLEAN
    theta: Angle = math.pi / 4
    dtheta: Strength = 0.0
    n_sites: int | None = None
    steps: int = Field(default=100, ge=0)
    samples: int = Field(default=1, ge=1)
    wall: WallChoice = "none"
    topology: Topology = Topology.RING
    seed: int = Field(default=0, ge=0)
    stride: int | None = Field(default=None, ge=1)
    distribution_at: int | None = Field(default=None, ge=0)
    chunk_size: int = Field(default_factory=lambda: settings.chunk_size, ge=1)

    @field_validator("n_sites")
    @classmethod
    def _check_sites(cls, value: int | None) -> int | None:
        return _even_sites(value)

    @model_validator(mode="before")
    @classmethod
    def _pin_clean(cls, data: Any) -> Any:
        # A clean walk draws nothing, so seed and strength are pinned to 0.
        if not isinstance(data, dict):
            return data
        try:
            clean = DisorderMode(data.get("mode", DisorderMode.CLEAN)) is DisorderMode.CLEAN
        except ValueError:
            return data
        return {**data, "seed": 0, "dtheta": 0.0} if clean else data

    @model_validator(mode="after")
    def _consistent(self) -> "EvolveConfig":
        if self.distribution_at is not None and self.distribution_at > self.steps:
            raise ValueError("distribution_at must not exceed steps")
        if (
            self.topology is Topology.OPEN_LINE_GUARD
            and self.n_sites is not None
            and self.n_sites < 2 * self.steps + 4
        ):
            raise ValueError("an open line needs N >= 2*steps + 4")
        return self


class DosConfig(_RunConfig):
    command: Literal["dos"] = "dos"
    theta: Angle = math.pi / 4
    dtheta_s: Strength = 0.0
    n_sites: int = 500
    samples: int = Field(default=1, ge=1)
    bins: int = Field(default_factory=lambda: settings.dos_bins, ge=1)
    seed: int = Field(default=0, ge=0)
    wall: WallChoice = "minus"
    solver: Solver = Solver.AUTO
    chunk_size: int = Field(default_factory=lambda: settings.chunk_size, ge=1)

    @field_validator("n_sites")
    @classmethod
    def _check_sites(cls, value: int) -> int:
        return _even_sites(value)  # type: ignore[return-value]


class LyapunovConfig(_RunConfig):
    command: Literal["lyapunov"] = "lyapunov"
    theta: Angle = math.pi / 4
    omega: Angle | None = None
    delta_omega: list[float] = Field(
        default_factory=lambda: [1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2]
    )
    dtheta_s: list[Strength] = Field(default_factory=lambda: [math.pi / 4], min_length=1)
    n_sites: int = Field(default=1_000_000, ge=MIN_CHAIN_LENGTH)
    seed: int = Field(default=0, ge=0)
    pair: bool = False
    renorm_interval: int = Field(default_factory=lambda: settings.renorm_interval, ge=1)
    blocks: int = Field(default_factory=lambda: settings.lyapunov_blocks, ge=2)

    @field_validator("delta_omega")
    @classmethod
    def _in_range(cls, values: list[float]) -> list[float]:
        for value in values:
            if not DELTA_OMEGA_FLOOR <= value <= 1e-1:
                raise ValueError(f"delta omega must lie in [{DELTA_OMEGA_FLOOR:g}, 0.1], got {value}")
        return values

    @model_validator(mode="after")
    def _has_energies(self) -> "LyapunovConfig":
        if self.omega is None and not self.delta_omega:
            raise ValueError("give --omega or at least one --delta-omega")
        return self


class FitConfig(_RunConfig):
    command: Literal["fit"] = "fit"
    inputs: list[Path] = Field(min_length=1)
    model: ScalingModel | None = None
    window: tuple[float, float] | None = None
    tau_guess: float | None = Field(default=None, gt=0)

    @field_validator("window")
    @classmethod
    def _ordered(cls, window: tuple[float, float] | None) -> tuple[float, float] | None:
        if window is not None and not 0 < window[0] < window[1]:
            raise ValueError("window must satisfy 0 < lo < hi")
        return window


ExperimentConfig = Union[EvolveConfig, DosConfig, LyapunovConfig, FitConfig]

_BY_COMMAND: dict[str, type[_RunConfig]] = {
    "evolve": EvolveConfig,
    "dos": DosConfig,
    "lyapunov": LyapunovConfig,
    "fit": FitConfig,
}


def config_for(command: str, values: dict[str, Any], output: Path) -> ExperimentConfig:
    """Validate ``values`` as the config of ``command``; ConfigError on failure."""
    model = _BY_COMMAND.get(command)
    if model is None:
        raise ConfigError(f"unknown command {command!r}")
    try:
        return model.model_validate({**values, "output": output, "command": command})  # type: ignore[return-value]
    except ValidationError as exc:
        raise ConfigError(f"invalid {command} config: {exc}") from exc
