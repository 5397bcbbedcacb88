"""Fits of measured localization lengths and densities to the critical forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any

import numpy as np
from loguru import logger
from scipy.optimize import least_squares

from chiralwalk.scaling.exceptions import FitError
from chiralwalk.scaling.models import ScalingModel

XI_WINDOW = (1e-12, 1e-3)
DOS_WINDOW = (3e-4, 1e-1)
MIN_XI_POINTS = 6
MIN_XI_DECADES = 4.0
MIN_DOS_POINTS = 8
MAX_EVALUATIONS = 200
GRADIENT_TOLERANCE = 1e-10
# RMS of ln(data / model) above this marks the model as a poor description.
MISMATCH_THRESHOLD = 0.1
# Keeps delta_omega_max * tau strictly below 1 during the DOS fit.
TAU_MARGIN = 1e-3


@dataclass(frozen=True)
class ScalingFit:
    model: ScalingModel
    amplitude: float
    tau: float
    window: tuple[float, float]
    points: int
    residual_norm: float
    r_squared: float
    rms_log_residual: float
    residual_trace: tuple[float, ...] = ()
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def mismatch(self) -> bool:
        return self.rms_log_residual > MISMATCH_THRESHOLD

    @property
    def parameters(self) -> dict[str, float]:
        return {self.model.amplitude_name: self.amplitude, "tau": self.tau}

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model.value,
            "parameters": self.parameters,
            "window": list(self.window),
            "points": self.points,
            "residual_norm": self.residual_norm,
            "r_squared": self.r_squared,
            "rms_log_residual": self.rms_log_residual,
            "mismatch": self.mismatch,
            "residual_trace": list(self.residual_trace),
            **self.extras,
        }


def _select(
    delta_omega: np.ndarray, values: np.ndarray, window: tuple[float, float], *extra: np.ndarray
) -> tuple[np.ndarray, ...]:
    delta_omega = np.asarray(delta_omega, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if delta_omega.shape != values.shape:
        raise FitError(f"shape mismatch: {delta_omega.shape} vs {values.shape}")
    lo, hi = window
    keep = (delta_omega >= lo) & (delta_omega <= hi)
    return (delta_omega[keep], values[keep], *(np.asarray(e, dtype=np.float64)[keep] for e in extra))


def _r_squared(values: np.ndarray, model: np.ndarray) -> float:
    total = float(np.sum((values - values.mean()) ** 2))
    if total == 0:
        return 1.0 if np.allclose(values, model) else 0.0
    return 1.0 - float(np.sum((values - model) ** 2)) / total


def _report(fit: ScalingFit) -> ScalingFit:
    if fit.mismatch:
        logger.warning(
            "{} fit: rms log residual {:.3f} exceeds {}; the critical form describes the data poorly",
            fit.model.value,
            fit.rms_log_residual,
            MISMATCH_THRESHOLD,
        )
    else:
        logger.info("{} fit: {} over {} points", fit.model.value, fit.parameters, fit.points)
    return fit


def fit_xi(
    delta_omega: np.ndarray,
    xi: np.ndarray,
    stderr: np.ndarray | None = None,
    *,
    window: tuple[float, float] = XI_WINDOW,
) -> ScalingFit:
    """Weighted linear fit of xi against ln(delta_omega).

    The slope is -xi0 and the intercept -xi0 ln(tau).
    """
    sigma = np.ones_like(np.asarray(xi, dtype=np.float64)) if stderr is None else stderr
    d, values, sigma = _select(delta_omega, xi, window, sigma)
    count = d.size
    if not (np.all(np.isfinite(values)) and np.all(values > 0)):
        raise FitError("localization lengths must be finite and positive", points=count)
    if count < MIN_XI_POINTS:
        raise FitError(f"need >= {MIN_XI_POINTS} points in the window, got {count}", points=count)
    if np.any(d <= 0) or math.log10(d.max() / d.min()) < MIN_XI_DECADES - 1e-9:
        raise FitError(
            f"delta omega must span >= {MIN_XI_DECADES:g} decades in the window", points=count
        )
    weights = np.where(np.isfinite(sigma) & (sigma > 0), 1.0 / sigma, 0.0)
    if np.count_nonzero(weights) < 2:
        raise FitError("not enough points with usable error bars", points=count)

    log_d = np.log(d)
    slope, intercept = np.polyfit(log_d, values, 1, w=weights)
    xi0 = -float(slope)
    if not (math.isfinite(xi0) and xi0 > 0):
        raise FitError(f"xi does not grow as delta omega shrinks (slope {slope:.3g})", points=count)
    tau = math.exp(float(intercept) / float(slope))
    if d.max() * tau >= 1:
        raise FitError(
            f"fitted tau={tau:.3g} puts the window outside delta_omega * tau < 1", points=count
        )
    model = xi0 * np.abs(np.log(d * tau))
    residual = (values - model) * weights
    return _report(
        ScalingFit(
            model=ScalingModel.XI,
            amplitude=xi0,
            tau=tau,
            window=(float(d.min()), float(d.max())),
            points=count,
            residual_norm=float(np.linalg.norm(residual)),
            r_squared=_r_squared(values, model),
            rms_log_residual=float(np.sqrt(np.mean(np.log(values / model) ** 2))),
            residual_trace=(float(0.5 * np.sum(residual**2)),),
        )
    )


def _log_dos(params: np.ndarray, log_d: np.ndarray) -> np.ndarray:
    log_rho0, log_tau = params
    log_x = log_d + log_tau
    return log_rho0 - log_x - 3.0 * np.log(np.abs(log_x))


def _log_dos_jacobian(params: np.ndarray, log_d: np.ndarray) -> np.ndarray:
    log_x = log_d + params[1]
    jac = np.empty((log_d.size, 2))
    jac[:, 0] = 1.0
    jac[:, 1] = -1.0 - 3.0 / log_x
    return jac


def fit_dos(
    delta_omega: np.ndarray,
    rho: np.ndarray,
    *,
    tau_guess: float | None = None,
    window: tuple[float, float] = DOS_WINDOW,
    max_evaluations: int = MAX_EVALUATIONS,
) -> ScalingFit:
    """Nonlinear least squares of ln(rho) in the log-parameters (ln rho0, ln tau).

    ``tau_guess`` (for example tau from a xi fit) seeds the search; otherwise
    tau starts at 1. ln rho0 then starts at its exact optimum for that tau.
    """
    d, values = _select(delta_omega, rho, window)
    count = d.size
    if count < MIN_DOS_POINTS:
        raise FitError(f"need >= {MIN_DOS_POINTS} points in the window, got {count}", points=count)
    if not (np.all(np.isfinite(values)) and np.all(values > 0)) or np.any(d <= 0):
        raise FitError("densities and offsets must be finite and positive", points=count)
    if np.ptp(d) == 0:
        raise FitError("all delta omega values are equal", points=count)

    log_d, log_rho = np.log(d), np.log(values)
    upper = -float(log_d.max()) - TAU_MARGIN
    start_tau = math.log(tau_guess) if tau_guess else 0.0
    start_tau = min(start_tau, upper - 10 * TAU_MARGIN)
    start_rho0 = float(np.mean(log_rho - _log_dos(np.array([0.0, start_tau]), log_d)))

    # Starting cost, then the cost after each accepted step: with an analytic
    # Jacobian every call is a trial step, and trf accepts only cost decreases.
    trace: list[float] = []

    def residuals(params: np.ndarray) -> np.ndarray:
        r = _log_dos(params, log_d) - log_rho
        cost = 0.5 * float(np.dot(r, r))
        if not trace or cost < trace[-1]:
            trace.append(cost)
        return r

    try:
        result = least_squares(
            residuals,
            np.array([start_rho0, start_tau]),
            jac=partial(_log_dos_jacobian, log_d=log_d),
            bounds=([-np.inf, -np.inf], [np.inf, upper]),
            method="trf",
            max_nfev=max_evaluations,
            gtol=GRADIENT_TOLERANCE,
            ftol=1e-12,
            xtol=1e-12,
        )
    except ValueError as exc:
        raise FitError(str(exc), points=count, residual_trace=trace) from exc
    if not result.success:
        raise FitError(
            f"DOS fit did not converge: {result.message}",
            points=count,
            residual_trace=trace,
            diagnostics={"status": int(result.status), "evaluations": int(result.nfev)},
        )
    rho0, tau = math.exp(result.x[0]), math.exp(result.x[1])
    log_model = _log_dos(result.x, log_d)
    return _report(
        ScalingFit(
            model=ScalingModel.DOS,
            amplitude=rho0,
            tau=tau,
            window=(float(d.min()), float(d.max())),
            points=count,
            residual_norm=float(np.linalg.norm(result.fun)),
            r_squared=_r_squared(log_rho, log_model),
            rms_log_residual=float(np.sqrt(np.mean(result.fun**2))),
            residual_trace=tuple(trace),
            extras={"evaluations": int(result.nfev)},
        )
    )


def tau_consistency(first: ScalingFit, second: ScalingFit) -> float:
    """Ratio of the two fitted mean free times; 1 when the observables agree."""
    return first.tau / second.tau
