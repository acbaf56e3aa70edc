"""Exception types raised across the package."""


class AvgMixError(Exception):
    """Base class for all errors raised by avgmix."""


class ParseError(AvgMixError, ValueError):
    """Malformed graph6 input."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UnsupportedSize(AvgMixError, ValueError):
    pass


class PartitionError(AvgMixError, ValueError):
    pass


class SymmetryError(AvgMixError, ValueError):
    pass


class ConvergenceError(AvgMixError, ArithmeticError):
    pass


class DimensionError(AvgMixError, ValueError):
    pass


class DomainError(AvgMixError, ValueError):
    pass


class KindError(AvgMixError, ValueError):
    """Operation needs a different Hamiltonian kind."""


class PreconditionError(AvgMixError, ValueError):
    pass


class InvariantError(AvgMixError, ValueError):
    pass
