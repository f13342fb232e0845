"""Exception types shared across the package."""


class BspecError(Exception):
    """Base class for all errors raised by this package."""


class NonPrimeModulus(BspecError, ValueError):
    pass


class DivisionByZero(BspecError, ZeroDivisionError):
    pass


class DimensionMismatch(BspecError, ValueError):
    pass


class ZeroVector(BspecError, ValueError):
    pass


class DegenerateForm(BspecError, ValueError):
    pass


class TooFewDirections(BspecError, ValueError):
    pass


class SetsNotDisjoint(BspecError, ValueError):
    pass


class BudgetExceeded(BspecError, RuntimeError):
    pass


class CounterOverflow(BspecError, OverflowError):
    """A 64-bit counter would wrap; counts are never silently truncated."""


class EmptyTensor(BspecError, ValueError):
    pass


class ZeroParameter(BspecError, ValueError):
    pass


class SizeExceedsSpace(BspecError, ValueError):
    pass


class PointSetFormatError(BspecError, ValueError):
    pass


class ConfigError(BspecError, ValueError):
    pass
