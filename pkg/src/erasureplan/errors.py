"""Exception types shared across the package."""

from __future__ import annotations


class ErasurePlanError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ErasurePlanError, ValueError):
    """Malformed or mutually inconsistent input values."""


class NotCorrectableError(ErasurePlanError):
    """The code cannot correct erasures at the requested positions.

    Carries an optional ``witness``: a vector that commutes with every
    stabilizer, is supported on the erased positions, and is not itself
    a stabilizer -- i.e. an undetectable nontrivial error.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InconsistentSyndromeError(ErasurePlanError):
    """Measurement outcomes admit no error consistent with the model."""


class SizeLimitError(ErasurePlanError):
    """The requested exhaustive computation exceeds the supported size."""


class UndefinedMinimumError(ErasurePlanError):
    """The minimized set is empty, so the minimum does not exist."""


class MalformedSurfaceError(InvalidInputError):
    """The surface's incidence data does not define a valid code."""
