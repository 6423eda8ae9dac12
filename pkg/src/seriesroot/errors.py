"""Exception types shared by every module.

The CLI maps :class:`PreconditionError` to exit code 2 and
:class:`NumericalBreakdownError` to exit code 3.
"""


class SeriesRootError(Exception):
    """Base class for all library errors."""


class PreconditionError(SeriesRootError, ValueError):
    """An input violates a documented precondition."""


class DocumentError(PreconditionError):
    """A map or polynomial document could not be parsed."""


class NumericalBreakdownError(SeriesRootError, ArithmeticError):
    """A numerical procedure failed to reach its stated accuracy."""


class ExponentSaturationError(NumericalBreakdownError, OverflowError):
    """An extended-range exponent left the signed 64-bit range."""
