"""Eigenphases of the one-step unitary."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger
from scipy import linalg

from chiralwalk.core.disorder import CoinField
from chiralwalk.core.lattice import BoundaryConfig
from chiralwalk.exceptions import InvalidArgumentError, NumericalError
from chiralwalk.spectral.operator import build_step_matrix, folded_band, unitarity_residual

INPUT_UNITARITY_TOLERANCE = 1e-10
EIGENVALUE_RESIDUAL_TOLERANCE = 1e-8
# Phases this close to -pi are reported as +pi.
BRANCH_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenphases omega in (-pi, pi] of a 2N x 2N step operator.

    A ``folded`` spectrum holds |omega| in [0, pi] for every state; each value
    stands for the pair +-|omega|.
    """

    phases: np.ndarray
    residual: float
    n_sites: int
    folded: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        phases = np.sort(np.asarray(self.phases, dtype=np.float64))
        if phases.size != 2 * self.n_sites:
            raise InvalidArgumentError(
                f"expected {2 * self.n_sites} eigenphases, got {phases.size}"
            )
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    def __len__(self) -> int:
        return self.phases.size

    @property
    def disordered(self) -> bool:
        return float(self.metadata.get("strength", 0.0)) > 0.0


def wrap_phase(omega: np.ndarray) -> np.ndarray:
    """Reduce phases to (-pi, pi], keeping pi rather than -pi."""
    wrapped = np.angle(np.exp(1j * np.asarray(omega, dtype=np.float64)))
    return np.where(wrapped <= -math.pi + BRANCH_SLACK, math.pi, wrapped)


def eigenphases(matrix: np.ndarray, *, metadata: dict[str, Any] | None = None) -> Spectrum:
    """All eigenphases of a dense unitary via a general eigensolver."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        raise InvalidArgumentError(f"expected a square 2N x 2N matrix, got {matrix.shape}")
    input_residual = unitarity_residual(matrix)
    if input_residual >= INPUT_UNITARITY_TOLERANCE:
        raise InvalidArgumentError(f"matrix is not unitary: residual {input_residual:.3e}")
    try:
        values = linalg.eigvals(matrix, overwrite_a=False, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            "eigensolver failed to converge",
            diagnostics={"size": matrix.shape[0], "input_residual": input_residual},
        ) from exc
    residual = float(np.max(np.abs(np.abs(values) - 1.0)))
    if residual >= EIGENVALUE_RESIDUAL_TOLERANCE:
        raise NumericalError(
            "eigenvalues left the unit circle",
            diagnostics={"residual": residual, "input_residual": input_residual},
        )
    phases = np.angle(values)
    phases = np.where(phases <= -math.pi + BRANCH_SLACK, math.pi, phases)
    return Spectrum(phases, residual, matrix.shape[0] // 2, metadata=dict(metadata or {}))


def field_eigenphases(
    coin_field: CoinField, boundary: BoundaryConfig | None = None
) -> Spectrum:
    """Dense spectrum of the step operator of ``coin_field``."""
    return eigenphases(build_step_matrix(coin_field, boundary), metadata=coin_field.describe())


def folded_eigenphases(
    coin_field: CoinField, boundary: BoundaryConfig | None = None
) -> Spectrum:
    """|omega| of every state from the banded symmetric matrix U + U^T.

    Near 0 and pi the arccos loses about half the digits, so phases there are
    good to roughly 1e-7 rather than machine precision.
    """
    band = folded_band(coin_field, boundary)
    try:
        values = linalg.eigvals_banded(band, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            "banded eigensolver failed to converge", diagnostics={"size": band.shape[1]}
        ) from exc
    half = values / 2.0
    residual = float(max(0.0, np.max(np.abs(half)) - 1.0))
    if residual >= EIGENVALUE_RESIDUAL_TOLERANCE:
        raise NumericalError("folded eigenvalues outside [-2, 2]", diagnostics={"residual": residual})
    logger.debug("folded solve of {} states", values.size)
    return Spectrum(
        np.arccos(np.clip(half, -1.0, 1.0)),
        residual,
        coin_field.n_sites,
        folded=True,
        metadata=coin_field.describe(),
    )
