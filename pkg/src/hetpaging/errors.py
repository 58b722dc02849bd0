"""Exception hierarchy shared by every module."""


class HetPagingError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HetPagingError, ValueError):
    """An argument violates a documented precondition."""


class NotLaminarError(ParameterError):
    """A family that must be laminar has two overlapping, non-nested members."""


class CapExceeded(HetPagingError):
    """An exponential routine was asked to run above its configured cap."""


class BudgetExceeded(CapExceeded):
    """The offline oracle hit its state budget."""


class TraceParseError(HetPagingError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class InvariantViolation(HetPagingError, AssertionError):
    """An internal invariant that the analysis guarantees did not hold."""


class UnknownPage(HetPagingError, KeyError):
    """Weighted lookup for a page missing from the weight map."""
