"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HpFracError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HpFracError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class RangeError(HpFracError, OverflowError):
    """A requested quantity over- or underflows double precision."""


class AccuracyError(HpFracError, ArithmeticError):
    """No evaluation branch reached the requested tolerance.

    ``estimate`` is the best value found and ``error_bound`` its estimated
    absolute error.
    """

    def __init__(self, message: str, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class AssemblyError(HpFracError, ArithmeticError):
    pass


class SingularSystemError(HpFracError, ArithmeticError):
    """A resolvent system could not be factorized."""

    def __init__(self, message: str, node_index: int | None = None):
        super().__init__(message)
        self.node_index = node_index


class TruncationError(HpFracError, ArithmeticError):
    """A spectral expansion was truncated before reaching its tolerance."""

    def __init__(self, message: str, tail: float | None = None):
        super().__init__(message)
        self.tail = tail


class ConfigError(HpFracError, ValueError):
    pass
