"""
Exception hierarchy for the DF state library.

Every error is a ValueError as well, so callers written against plain
ValueError keep working.
"""
from typing import Iterable, Optional


class DfSimError(ValueError):
    """Base class for all library errors."""


class CapacityError(DfSimError):
    """Qubit count above what the dense representation supports."""


class ShapeError(DfSimError):
    """Qubit counts or lengths that should agree do not."""


class DomainError(DfSimError):
    """Argument outside the mathematical domain of an operation."""


class InvalidUnitaryError(DfSimError):
    """Matrix is not a 2x2 unitary."""


class PreconditionError(DfSimError):
    """Inputs violate a documented precondition."""


class ProtocolError(DfSimError):
    """The DF BB84 signal set cannot be realized."""


class ConfigError(DfSimError):
    """Settings file holds an invalid value."""


class UnknownLabelError(DfSimError):
    """State label outside the documented label set."""

    def __init__(self, label: str, valid: Iterable[str]):
        self.label = label
        self.valid = list(valid)
        super().__init__(
            f"Unknown state label {label!r}; valid labels: {', '.join(self.valid)}"
        )


class DfvecParseError(DfSimError):
    """Malformed DFVEC text."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
