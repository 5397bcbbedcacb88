"""Transfer matrices of the quasi-energy eigenvalue equation.

For U psi = e^{i omega} psi the amplitudes obey

    (psi_{n+1,R}, psi_{n,L}) = T_n (psi_{n,R}, psi_{n-1,L})

with T_n = [[e^{-i omega}/c_n, -t_n], [-t_n, e^{i omega}/c_n]], where
c_n = cos(theta_n) and t_n = tan(theta_n). det T_n = sec^2 - tan^2 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chiralwalk.exceptions import InvalidArgumentError, SingularCoinError

# |cos theta| at or below this makes T_n singular (reflecting limit).
SINGULAR_COS = 1e-12


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    theta: float
    omega: float
    matrix: np.ndarray

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _check_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return float(value)


def transfer_matrix(theta: float, omega: float) -> TransferMatrix:
    theta, omega = _check_finite("theta", theta), _check_finite("omega", omega)
    c = math.cos(theta)
    if abs(c) <= SINGULAR_COS:
        raise SingularCoinError(f"transfer matrix is singular at theta={theta!r} (cos theta = {c:.3e})")
    t = math.sin(theta) / c
    phase = complex(math.cos(omega), -math.sin(omega))
    matrix = np.array([[phase / c, -t], [-t, phase.conjugate() / c]], dtype=np.complex128)
    matrix.setflags(write=False)
    return TransferMatrix(theta, omega, matrix)


def transfer_stack(thetas: np.ndarray, omega: float) -> np.ndarray:
    """T_n for every angle at once, shape ``(len(thetas), 2, 2)``."""
    thetas = np.asarray(thetas, dtype=np.float64)
    c = np.cos(thetas)
    if np.any(np.abs(c) <= SINGULAR_COS):
        raise SingularCoinError("transfer matrix is singular at one of the angles")
    t = np.sin(thetas) / c
    phase = complex(math.cos(omega), -math.sin(omega))
    out = np.empty((thetas.size, 2, 2), dtype=np.complex128)
    out[:, 0, 0] = phase / c
    out[:, 0, 1] = -t
    out[:, 1, 0] = -t
    out[:, 1, 1] = phase.conjugate() / c
    return out


def iterate_amplitudes(
    thetas: np.ndarray, omega: float, start: tuple[complex, complex] = (1.0, 0.0)
) -> np.ndarray:
    """Amplitude pairs along a segment, ``v[k] = (psi_{k,R}, psi_{k-1,L})`` for k = 0..K.

    ``thetas[k]`` is the coin angle of segment site k and ``start`` is v[0].
    """
    stack = transfer_stack(thetas, omega)
    out = np.empty((len(stack) + 1, 2), dtype=np.complex128)
    out[0] = start
    for k, matrix in enumerate(stack):
        out[k + 1] = matrix @ out[k]
    return out
