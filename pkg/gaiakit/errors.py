"""Exceptions raised by gaiakit.

Failures of an axiom in a finite presentation are reported, not raised
(see :class:`gaiakit.schemas.ValidationReport`). Exceptions are reserved for
inputs that cannot be processed at all.
"""


class GaiaKitError(Exception):
    """Base class for every gaiakit error."""


class StructuralError(GaiaKitError, ValueError):
    """Unknown identifier or malformed table."""


class ValidationError(GaiaKitError, ValueError):
    """A value violates the invariants checked at construction."""


class ArityError(GaiaKitError, ValueError):
    """Arity or array shape mismatch."""


class CapacityError(GaiaKitError, RuntimeError):
    """An exhaustive search or product construction exceeded its budget."""


class NonContractionError(GaiaKitError, RuntimeError):
    """A fixed-point iteration did not behave like a contraction."""


class FormatError(GaiaKitError, ValueError):
    """An input file could not be parsed.

    Args:
        message: Human readable description
        line: 1-based line of the error, when known
        column: 1-based column of the error, when known
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
