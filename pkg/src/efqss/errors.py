"""Exception hierarchy shared by every module."""


class QSSError(Exception):
    """Base class for all errors raised by efqss."""


class ConfigError(QSSError, ValueError):
    pass


class ModulusMismatch(QSSError, ValueError):
    pass


class ZeroInverse(QSSError, ZeroDivisionError):
    pass


class InvalidEvaluationPoints(ConfigError):
    pass


class NotActive(QSSError, ValueError):
    pass


class WrongBasis(QSSError, ValueError):
    pass


class NotNormalized(QSSError, ValueError):
    pass


class DimensionMismatch(QSSError, ValueError):
    pass


class WriteOnceViolation(QSSError, RuntimeError):
    pass


class PrematureRecovery(QSSError, RuntimeError):
    pass


class BudgetError(QSSError, ValueError):
    pass
