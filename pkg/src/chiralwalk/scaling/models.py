"""Critical forms near the delocalized energy.

With x = delta_omega * tau (0 < x < 1):

    rho(delta_omega) = rho0 / (x |ln x|^3)
    xi(delta_omega)  = xi0 |ln x|
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from chiralwalk.exceptions import DomainError


class ScalingModel(Enum):
    DOS = "dos"
    XI = "xi"

    @property
    def amplitude_name(self) -> str:
        return "rho0" if self is ScalingModel.DOS else "xi0"


def scaled_argument(delta_omega: float | np.ndarray, tau: float) -> np.ndarray:
    x = np.asarray(delta_omega, dtype=np.float64) * tau
    if not np.all(np.isfinite(x)) or np.any(x <= 0) or np.any(x >= 1):
        raise DomainError("scaling forms need 0 < delta_omega * tau < 1")
    return x


def _scalar_or_array(value: np.ndarray) -> float | np.ndarray:
    return float(value) if value.ndim == 0 else value


def eval_dos_model(delta_omega: float | np.ndarray, rho0: float, tau: float) -> float | np.ndarray:
    x = scaled_argument(delta_omega, tau)
    return _scalar_or_array(rho0 / (x * np.abs(np.log(x)) ** 3))


def eval_xi_model(delta_omega: float | np.ndarray, xi0: float, tau: float) -> float | np.ndarray:
    x = scaled_argument(delta_omega, tau)
    return _scalar_or_array(xi0 * np.abs(np.log(x)))


def eval_model(
    model: ScalingModel, delta_omega: float | np.ndarray, amplitude: float, tau: float
) -> float | np.ndarray:
    if model is ScalingModel.DOS:
        return eval_dos_model(delta_omega, amplitude, tau)
    return eval_xi_model(delta_omega, amplitude, tau)
