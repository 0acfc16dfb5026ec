"""Exception hierarchy shared by every netdecomp module."""


class NetdecompError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NetdecompError, ValueError):
    """The input document (or a scalar string inside it) is malformed."""


class ValidationError(NetdecompError, ValueError):
    """A well-formed input violates a structural assumption on (A, B, C)."""


class DimensionError(NetdecompError, ValueError):
    pass


class SingularMatrix(NetdecompError, ArithmeticError):
    pass


class InvalidChoice(NetdecompError, ValueError):
    """A proposed completion set does not give an invertible R22 block."""


class BudgetExceeded(NetdecompError, RuntimeError):
    pass


class MismatchedSystem(NetdecompError, ValueError):
    pass


class InvariantViolation(NetdecompError, AssertionError):
    """An internal guarantee failed; always indicates a bug, never bad input."""
