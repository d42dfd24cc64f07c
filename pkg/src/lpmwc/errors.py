"""Exception hierarchy shared by every solver and the command line."""


class LpmwcError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstance(LpmwcError, ValueError):
    pass


class InvalidP(InvalidInstance):
    pass


class UnsupportedP(LpmwcError):
    """The requested algorithm is not defined for this exponent (p = inf)."""


class BudgetExceeded(LpmwcError):
    pass


class SizeLimit(LpmwcError):
    pass


class Infeasible(LpmwcError):
    pass


class IterationCap(LpmwcError):
    pass


class UnionNotV(LpmwcError, ValueError):
    pass


class OddN(InvalidInstance):
    pass


class ConstraintViolation(InvalidInstance):
    pass


class InfeasibleAssignment(LpmwcError, ValueError):
    def __init__(self, message: str, constraint: str, vertex: int | None = None):
        super().__init__(message)
        self.constraint = constraint
        self.vertex = vertex


class ParseError(LpmwcError, ValueError):
    pass
