"""Exception hierarchy shared across the package."""

from __future__ import annotations


class EdaModelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(EdaModelError, ValueError):
    """An argument violates a documented precondition."""


class RecordingFormatError(EdaModelError):
    """A recording or event file could not be parsed.

    Attributes:
        line_number: 1-based line where parsing failed, if known.
    """

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message if line_number is None
                         else f"line {line_number}: {message}")
        self.line_number = line_number


class NumericalError(EdaModelError):
    """A numerical routine failed to produce a trustworthy result."""


class IllConditionedError(NumericalError):
    """A least-squares regressor is rank deficient beyond repair."""


class DegeneratePolesError(NumericalError):
    """Two poles coincide (or nearly so); partial fractions are undefined.

    Attributes:
        poles: the offending pair.
    """

    def __init__(self, message: str, poles: tuple[complex, complex] | None = None):
        super().__init__(message)
        self.poles = poles


class DegenerateModelError(NumericalError):
    """Pruning or decomposition left no usable model."""


class NonConvergedError(NumericalError):
    """An iterative solver hit its iteration cap before meeting tolerance.

    Attributes:
        best: best iterate found (solver specific).
        residual: optimality residual at ``best``.
    """

    def __init__(self, message: str, best=None, residual: float | None = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class EmptySnaError(EdaModelError):
    """No valley/peak pair cleared the minimum amplitude threshold."""


class InsufficientDataError(EdaModelError):
    """Too few observations for the requested statistic."""


class UndefinedVarianceError(EdaModelError):
    """The observed series is constant, so explained variance is undefined."""


class InvalidSpecError(EdaModelError):
    """A synthetic-recording specification is internally inconsistent."""
