"""Exception hierarchy.

Validation problems (bad input, unsupported regime) derive from
:class:`ValidationError`; failures of a numerical procedure on valid input
derive from :class:`NumericalError`.  The CLI maps them to exit codes 2 and 3.
"""


class WLPRError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(WLPRError, ValueError):
    pass


class NumericalError(WLPRError, ArithmeticError):
    pass


class DomainError(ValidationError):
    pass


class IntegerBandwidth(ValidationError):
    pass


class BandwidthTooSmall(ValidationError):
    pass


class DegreeTooHigh(ValidationError):
    pass


class DataTooShort(ValidationError):
    pass


class LevelBudgetExceeded(ValidationError):
    pass


class NotPi0Reproducing(ValidationError):
    pass


class MaskNotPositive(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class OutOfScope(ValidationError):
    """The requested verdict is not covered by the available theory.

    ``report`` carries whatever numerical evidence was gathered anyway.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class QuadratureFailure(NumericalError):
    pass


class SingularNormalEquations(NumericalError):
    pass
