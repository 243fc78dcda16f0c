class SqGenError(Exception):
    """Base class for every error raised by sq-gen."""


class DomainError(SqGenError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularSystem(SqGenError, ArithmeticError):
    pass


class InconsistentData(SqGenError, ValueError):
    """Supplied data contradicts itself, e.g. an extra sample off a fitted polynomial."""


class DuplicateAbscissa(InconsistentData):
    pass


class DegenerateModel(SqGenError, ValueError):
    pass


class DegenerateParameter(SqGenError, ValueError):
    """The parameter t (or a derived denominator) lies in the degeneracy set."""


class NotOnCurve(SqGenError, ValueError):
    pass


class NotASquare(SqGenError, ValueError):
    pass


class SingularJacobian(SqGenError, ArithmeticError):
    pass


class ExceptionalPoint(SqGenError, ArithmeticError):
    """A birational map is undefined at the given point."""


class MemberExceptional(ExceptionalPoint):
    """The m-th multiple lands on an exceptional point. Retrying with another m is expected to work."""

    retryable = True

    def __init__(self, m: int, reason: str = ""):
        self.m = m
        message = f"member m={m} is exceptional for the quartic/cubic map"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class InvalidMultiplier(SqGenError, ValueError):
    pass


class TorsionSeed(SqGenError, ValueError):
    pass


class TorsionInput(SqGenError, ValueError):
    pass


class SizeLimit(SqGenError, ArithmeticError):
    """Coordinates or moduli grew past the configured digit guard."""
