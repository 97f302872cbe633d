"""Exception hierarchy shared by all modules."""


class SqottoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SqottoError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(DomainError):
    """A documented precondition (e.g. the late-time assumption) is violated."""


class UnsupportedRegimeError(DomainError):
    """The physical regime is valid but not handled (e.g. overdamped baths)."""


class NumericError(SqottoError, ArithmeticError):
    """A numerical routine failed to reach the requested tolerance.

    Attributes
    ----------
    last_good:
        Last abscissa (time or integration variable) at which the routine was
        still within tolerance, if meaningful.
    """

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ConfigError(SqottoError):
    """Raised while parsing or validating run configuration files."""

    def __init__(self, message, problems=None, lineno=None):
        super().__init__(message)
        self.problems = list(problems or [])
        self.lineno = lineno
