"""Rescaled curves for scaling-collapse plots and their spread."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from chiralwalk.exceptions import InvalidArgumentError
from chiralwalk.scaling.fits import ScalingFit
from chiralwalk.scaling.models import ScalingModel, scaled_argument


def collapse_curve(
    fit: ScalingFit, delta_omega: np.ndarray, values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(x, y) with x = delta_omega * tau.

    For xi, y = xi / xi0, which collapses onto |ln x|. For the density,
    y = rho x |ln x|^3 / rho0, which collapses onto 1.
    """
    x = scaled_argument(delta_omega, fit.tau)
    values = np.asarray(values, dtype=np.float64)
    if fit.model is ScalingModel.XI:
        return x, values / fit.amplitude
    return x, values * x * np.abs(np.log(x)) ** 3 / fit.amplitude


def reference_curve(model: ScalingModel, x: np.ndarray) -> np.ndarray:
    """The line the rescaled data should fall on."""
    x = np.asarray(x, dtype=np.float64)
    return np.abs(np.log(x)) if model is ScalingModel.XI else np.ones_like(x)


def collapse_scatter(
    curves: Sequence[tuple[np.ndarray, np.ndarray]], grid_points: int = 64
) -> float:
    """Largest spread of ln y across curves on their common ln x range."""
    usable = [(np.asarray(x), np.asarray(y)) for x, y in curves if np.size(x) >= 2]
    if len(usable) < 2:
        return 0.0
    logs = []
    for x, y in usable:
        if np.any(x <= 0) or np.any(y <= 0):
            raise InvalidArgumentError("collapse curves need positive x and y")
        order = np.argsort(x)
        logs.append((np.log(x[order]), np.log(y[order])))
    lo = max(lx[0] for lx, _ in logs)
    hi = min(lx[-1] for lx, _ in logs)
    if lo >= hi:
        raise InvalidArgumentError("collapse curves do not overlap")
    grid = np.linspace(lo, hi, grid_points)
    stacked = np.stack([np.interp(grid, lx, ly) for lx, ly in logs])
    return float(np.max(stacked.max(axis=0) - stacked.min(axis=0)))
