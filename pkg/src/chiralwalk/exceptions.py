"""Common exception base for chiralwalk.

Every error chiralwalk raises derives from :class:`ChiralWalkError`, so callers
can catch the whole family with one ``except``. Argument errors also derive
from ``ValueError`` and numerical failures from ``ArithmeticError`` so plain
``except ValueError`` handlers keep working.
"""

from __future__ import annotations

from typing import Any


class ChiralWalkError(Exception):
    """Base class for all errors raised by chiralwalk."""


class InvalidArgumentError(ChiralWalkError, ValueError):
    """An argument violates a documented precondition."""


class SingularCoinError(InvalidArgumentError):
    """A transfer matrix was requested where cos(theta) vanishes."""


class DomainError(InvalidArgumentError):
    """A scaling model was evaluated outside 0 < delta_omega * tau < 1."""


class ConfigError(ChiralWalkError, ValueError):
    """An experiment config or an input table failed schema validation."""


class CapacityError(ChiralWalkError, MemoryError):
    """A dense operator would exceed the configured size cap."""


class NumericalError(ChiralWalkError, ArithmeticError):
    """A numerical routine failed or produced an out-of-tolerance result."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class LatticeOverflowError(NumericalError):
    """Amplitude reached the guard sites of an open line."""
