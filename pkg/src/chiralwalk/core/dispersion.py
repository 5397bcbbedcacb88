"""Clean-walk dispersion and its band edges."""

from __future__ import annotations

import numpy as np


def dispersion(k: float | np.ndarray, theta: float | np.ndarray) -> np.ndarray:
    """Quasi-energy branches solving cos(omega) = cos(k) cos(theta).

    Returns an array with a trailing axis of length 2 holding ``(-w, +w)`` with
    ``w = arccos(cos k cos theta)`` in [0, pi], i.e. both branches in (-pi, pi].
    At w = pi the lower branch is reported as +pi as well.
    """
    w = np.arccos(np.clip(np.cos(k) * np.cos(theta), -1.0, 1.0))
    lower = np.where(w == np.pi, np.pi, -w)
    return np.stack([lower, w], axis=-1)


def band_edges(theta: float) -> tuple[float, float]:
    """Lower and upper edge of the positive band, where cos^2 omega <= cos^2 theta."""
    c = abs(float(np.cos(theta)))
    return float(np.arccos(c)), float(np.arccos(-c))
