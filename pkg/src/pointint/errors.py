"""Exception hierarchy shared by all modules."""


class PointInteractionError(Exception):
    """Base class for errors raised by :mod:`pointint`."""


class ConfigurationError(PointInteractionError, ValueError):
    """Invalid point configuration or boundary pair.

    ``indices`` carries the offending (0-based) index pair when the error
    concerns two centers, e.g. duplicates.
    """

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices


class DomainError(PointInteractionError, ValueError):
    """Argument outside the domain of a function (branch cut, singularity)."""


class NumericError(PointInteractionError, ArithmeticError):
    """Non-finite input or output."""


class SingularMatrixError(NumericError):
    """Exactly singular linear system; ``pivot`` is the vanishing LU pivot."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class NotPSDError(NumericError):
    pass


class ConditioningError(NumericError):
    pass


class EvaluationError(PointInteractionError, ValueError):
    """Pointwise evaluation requested at a singular point."""


class UnsupportedFormulaError(PointInteractionError):
    """The requested closed formula does not apply in this setting."""


class SpectrumHitError(PointInteractionError):
    """Spectral parameter lies (numerically) on the spectrum.

    Raised when ``C - D M(z)`` is singular, i.e. ``z`` is an eigenvalue of
    the extension, or, on the positive half-axis, a resonance energy.
    """

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class ScanBoundaryWarning(UserWarning):
    """A bound-state branch has not crossed zero inside the scan window."""
