"""One-step evolution U = S (sum_n |n><n| x C_n).

The kernels work on amplitude arrays of shape ``(..., N, 2)`` so the same code
advances a single state or a whole batch of ensemble samples at once.
"""

from __future__ import annotations

import numpy as np

from chiralwalk.core.disorder import CoinField, DisorderMode
from chiralwalk.core.lattice import BoundaryConfig, L, R, WalkerState
from chiralwalk.exceptions import InvalidArgumentError, LatticeOverflowError

# Probability allowed on an open line's outermost sites before a step.
GUARD_TOLERANCE = 1e-30


def apply_coin(amps: np.ndarray, cos: np.ndarray, sin: np.ndarray) -> np.ndarray:
    """Site-local rotation; ``cos``/``sin`` broadcast against ``amps[..., 0]``."""
    right, left = amps[..., R], amps[..., L]
    out = np.empty_like(amps)
    out[..., R] = cos * right - sin * left
    out[..., L] = sin * right + cos * left
    return out


def apply_reflecting_site(coined: np.ndarray, amps: np.ndarray, index: int, sign: int) -> None:
    """Overwrite one site of ``coined`` with the reflecting coin [[0, -s], [s, 0]] applied to ``amps``."""
    coined[..., index, R] = -sign * amps[..., index, L]
    coined[..., index, L] = sign * amps[..., index, R]


def apply_shift(amps: np.ndarray, periodic: bool = True) -> np.ndarray:
    """Move R one site right and L one site left."""
    out = np.empty_like(amps)
    if periodic:
        out[..., R] = np.roll(amps[..., R], 1, axis=-1)
        out[..., L] = np.roll(amps[..., L], -1, axis=-1)
        return out
    out[..., 1:, R] = amps[..., :-1, R]
    out[..., 0, R] = 0.0
    out[..., :-1, L] = amps[..., 1:, L]
    out[..., -1, L] = 0.0
    return out


def check_guard(amps: np.ndarray) -> None:
    edge = np.abs(amps[..., 0, :]) ** 2 + np.abs(amps[..., -1, :]) ** 2
    if np.max(np.sum(edge, axis=-1)) >= GUARD_TOLERANCE:
        raise LatticeOverflowError(
            "walker reached the guard sites of the open line; use N >= 2*steps + 4",
            diagnostics={"edge_probability": float(np.max(edge))},
        )


def advance(
    amps: np.ndarray, cos: np.ndarray, sin: np.ndarray, periodic: bool = True
) -> np.ndarray:
    """Coin then shift on raw amplitude arrays."""
    if not periodic:
        check_guard(amps)
    return apply_shift(apply_coin(amps, cos, sin), periodic)


def _check_consistent(state: WalkerState, coin_field: CoinField) -> None:
    if coin_field.n_sites != state.n_sites:
        raise InvalidArgumentError(
            f"field has {coin_field.n_sites} sites but state has {state.n_sites}"
        )


def step(
    state: WalkerState,
    coin_field: CoinField,
    boundary: BoundaryConfig | None = None,
    t: int = 0,
) -> WalkerState:
    """Apply U once; ``t`` selects the coin angle of a temporal field."""
    boundary = boundary or BoundaryConfig.ring()
    _check_consistent(state, coin_field)
    cos, sin = coin_field.coin_entries(t)
    return WalkerState(advance(state.amplitudes, cos, sin, boundary.periodic))


def evolve(
    state: WalkerState,
    coin_field: CoinField,
    boundary: BoundaryConfig | None = None,
    steps: int = 1,
    start: int = 0,
) -> WalkerState:
    """Apply U ``steps`` times, starting at time index ``start``."""
    if steps < 0:
        raise InvalidArgumentError(f"steps must be >= 0, got {steps}")
    boundary = boundary or BoundaryConfig.ring()
    _check_consistent(state, coin_field)
    amps = state.amplitudes
    static = None if coin_field.mode is DisorderMode.TEMPORAL else coin_field.coin_entries()
    for t in range(start, start + steps):
        cos, sin = static if static is not None else coin_field.coin_entries(t)
        amps = advance(amps, cos, sin, boundary.periodic)
    return WalkerState(amps)
