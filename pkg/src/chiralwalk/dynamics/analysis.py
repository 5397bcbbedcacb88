from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import stats

from chiralwalk.core.lattice import site_labels
from chiralwalk.exceptions import InvalidArgumentError


class PowerLaw(NamedTuple):
    exponent: float
    stderr: float
    prefactor: float
    points: int


def power_law_exponent(
    t: np.ndarray, values: np.ndarray, window: tuple[float, float] | None = None
) -> PowerLaw:
    """Least-squares slope of ln(values) against ln(t) inside ``window``.

    Non-positive times and values are skipped.
    """
    t = np.asarray(t, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if t.shape != values.shape:
        raise InvalidArgumentError(f"shape mismatch: {t.shape} vs {values.shape}")
    mask = (t > 0) & (values > 0) & np.isfinite(values)
    if window is not None:
        lo, hi = window
        mask &= (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 3:
        raise InvalidArgumentError("need at least three positive points in the window")
    fit = stats.linregress(np.log(t[mask]), np.log(values[mask]))
    return PowerLaw(
        float(fit.slope), float(fit.stderr), float(np.exp(fit.intercept)), int(np.count_nonzero(mask))
    )


def excess_kurtosis(probs: np.ndarray, sites: np.ndarray | None = None) -> float:
    """Fourth standardized moment minus 3 of a distribution over sites; 0 for a Gaussian."""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1:
        raise InvalidArgumentError("expected a single distribution")
    n = site_labels(probs.size) if sites is None else np.asarray(sites, dtype=np.float64)
    total = probs.sum()
    if total <= 0:
        raise InvalidArgumentError("distribution has no weight")
    weights = probs / total
    mean = np.dot(weights, n)
    centered = n - mean
    variance = np.dot(weights, centered**2)
    if variance == 0:
        raise InvalidArgumentError("kurtosis of a point mass is undefined")
    return float(np.dot(weights, centered**4) / variance**2 - 3.0)
