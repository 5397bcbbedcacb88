"""Coin operators: the rotation coin and the two reflecting walls."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from chiralwalk.exceptions import InvalidArgumentError


class Wall(Enum):
    """Sign of a reflecting coin. The value is the coin's lower-left entry."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value: "Wall | str | int") -> "Wall":
        if isinstance(value, Wall):
            return value
        aliases = {"+": cls.PLUS, "plus": cls.PLUS, "-": cls.MINUS, "minus": cls.MINUS}
        if isinstance(value, str) and value.strip().lower() in aliases:
            return aliases[value.strip().lower()]
        if value in (1, -1):
            return cls(value)
        raise InvalidArgumentError(f"unknown wall sign {value!r}; expected '+' or '-'")

    @property
    def symbol(self) -> str:
        return "+" if self is Wall.PLUS else "-"


@dataclass(frozen=True, eq=False)
class CoinMatrix:
    """A 2x2 unitary acting on the (R, L) chirality pair."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise InvalidArgumentError(f"coin must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vector, dtype=np.complex128)

    @property
    def determinant(self) -> complex:
        m = self.matrix
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(2))))

    def is_unitary(self, tol: float = 1e-14) -> bool:
        return self.unitarity_residual() <= tol


def make_coin(theta: float) -> CoinMatrix:
    """Rotation coin [[cos, -sin], [sin, cos]]; theta = pi/4 is the Hadamard walk."""
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"coin angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return CoinMatrix(np.array([[c, -s], [s, c]]))


def make_reflecting_coin(sign: Wall | str | int) -> CoinMatrix:
    """Antidiagonal wall coin turning R into L and L into R.

    ``-`` gives [[0, 1], [-1, 0]], ``+`` gives [[0, -1], [1, 0]]; they are the
    rotation coins at theta = -pi/2 and +pi/2 with the zeros kept exact.
    """
    s = float(Wall.parse(sign).value)
    return CoinMatrix(np.array([[0.0, -s], [s, 0.0]]))

