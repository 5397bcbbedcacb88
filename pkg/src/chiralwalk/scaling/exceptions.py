"""Exceptions for chiralwalk.scaling."""

from __future__ import annotations

from collections.abc import Sequence

from chiralwalk.exceptions import NumericalError


class FitError(NumericalError):
    """Raised when a scaling fit cannot be made or does not converge."""

    def __init__(
        self,
        message: str,
        *,
        points: int = 0,
        residual_trace: Sequence[float] = (),
        diagnostics: dict | None = None,
    ):
        super().__init__(message, diagnostics=diagnostics)
        self.points = points
        self.residual_trace = list(residual_trace)
