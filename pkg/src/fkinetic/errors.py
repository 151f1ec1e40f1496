"""Exception hierarchy shared by every module in the package."""


class FKineticError(Exception):
    """Base class for all errors raised by fkinetic."""


class ValidationError(FKineticError, ValueError):
    """Malformed input data (polynomial, problem, sweep spec)."""


class DomainError(FKineticError, ValueError):
    """Argument outside the domain an operation supports."""


class PoleError(DomainError):
    """Gamma evaluated at a nonpositive integer."""


class ConvergenceError(FKineticError, ArithmeticError):
    """A series did not meet its stopping rule within the term budget."""


class SingularEvaluation(DomainError):
    """Evaluation at t = 0 of a quantity that blows up like t**(-lambda)."""


class OutputError(FKineticError, OSError):
    """Writing results failed; carries the offending path."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
