"""Exception hierarchy shared by every qhol module."""


class QholError(Exception):
    """Base class for all user-facing errors raised by qhol."""


class NegativeExponent(QholError, ValueError):
    pass


class LengthMismatch(QholError, ValueError):
    pass


class IndexOutOfRange(QholError, ValueError):
    pass


class CapExceeded(QholError, RuntimeError):
    """Brute-force enumeration would exceed the configured arrangement cap."""


class NotApplicable(QholError, ValueError):
    pass


class InvalidQMatrix(QholError, ValueError):
    pass


class QMatrixMismatch(QholError, ValueError):
    pass


class NegativeExponentInPolydiskMode(QholError, ValueError):
    pass


class GeneratorCountMismatch(QholError, ValueError):
    pass


class ArityMismatch(QholError, ValueError):
    pass


class DimensionMismatch(QholError, ValueError):
    pass


class BadParams(QholError, ValueError):
    pass


class NonpositiveRho(BadParams):
    pass


class FactorMismatch(QholError, ValueError):
    pass


class NonUnivariateFactor(QholError, ValueError):
    pass


class IncompatibleSpecs(QholError, ValueError):
    pass


class GradingUndefined(QholError, ValueError):
    pass


class NonUnimodularGroupMode(QholError, ValueError):
    pass


class ExprError(QholError):
    """Failure while reading expressions, elements or configuration."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class UnknownGenerator(ExprError):
    pass


class NegativePowerNotAllowed(ExprError):
    pass


class ModeMismatch(ExprError):
    pass


class FormatError(ExprError):
    pass


class ConfigError(ExprError):
    pass
