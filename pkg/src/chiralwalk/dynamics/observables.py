"""Observables of a walker state.

Each function accepts a :class:`WalkerState` or a raw amplitude array of shape
``(..., N, 2)``; the batch forms are what the ensemble driver uses.
"""

from __future__ import annotations

import numpy as np

from chiralwalk.core.lattice import WalkerState, site_labels


def _amplitudes(state: WalkerState | np.ndarray) -> np.ndarray:
    return state.amplitudes if isinstance(state, WalkerState) else np.asarray(state)


def probability_distribution(state: WalkerState | np.ndarray) -> np.ndarray:
    """P_n = |psi_{n,R}|^2 + |psi_{n,L}|^2."""
    amps = _amplitudes(state)
    return np.sum(amps.real**2 + amps.imag**2, axis=-1)


def survival_probability(state: WalkerState | np.ndarray) -> float | np.ndarray:
    """P_n at the origin n = 0."""
    probs = probability_distribution(state)
    value = probs[..., probs.shape[-1] // 2]
    return float(value) if np.ndim(value) == 0 else value


def distribution_moments(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean site and variance of distributions over the last axis.

    The variance is accumulated about the mean, so it is never negative.
    """
    n = site_labels(probs.shape[-1]).astype(np.float64)
    total = np.sum(probs, axis=-1)
    mean = np.sum(probs * n, axis=-1) / total
    centered = n - mean[..., None]
    variance = np.sum(probs * centered**2, axis=-1) / total
    return mean, variance


def position_variance(state: WalkerState | np.ndarray) -> float | np.ndarray:
    """<n^2> - <n>^2 with n the site label."""
    _, variance = distribution_moments(probability_distribution(state))
    return float(variance) if np.ndim(variance) == 0 else variance
