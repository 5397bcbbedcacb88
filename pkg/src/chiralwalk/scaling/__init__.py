"""Critical scaling forms, their fits and collapse diagnostics."""

from chiralwalk.scaling.collapse import collapse_curve, collapse_scatter, reference_curve
from chiralwalk.scaling.exceptions import FitError
from chiralwalk.scaling.fits import ScalingFit, fit_dos, fit_xi, tau_consistency
from chiralwalk.scaling.models import ScalingModel, eval_dos_model, eval_model, eval_xi_model

__all__ = [
    "FitError",
    "ScalingFit",
    "ScalingModel",
    "collapse_curve",
    "collapse_scatter",
    "eval_dos_model",
    "eval_model",
    "eval_xi_model",
    "fit_dos",
    "fit_xi",
    "reference_curve",
    "tau_consistency",
]
