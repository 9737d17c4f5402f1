"""Exception hierarchy shared by all modules."""


class UcusumError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(UcusumError, ValueError):
    """Unknown kernel name, invalid bandwidth, malformed scenario, ..."""


class SampleTooSmallError(UcusumError, ValueError):
    pass


class DataError(UcusumError, ValueError):
    """Non-finite observations or a series/kernel dimensionality mismatch."""


class DomainError(UcusumError, ValueError):
    pass


class DegenerateVarianceError(UcusumError, ArithmeticError):
    """The long-run variance estimate is not strictly positive.

    The raw estimate is kept on ``value`` so callers can report it.
    """

    def __init__(self, value, message=None):
        self.value = float(value)
        if message is None:
            message = f"degenerate long-run variance estimate ({self.value!r})"
        super().__init__(message)
