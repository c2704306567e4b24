"""Exception hierarchy shared by all genjac modules."""


class GenJacError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(GenJacError, ValueError):
    pass


class DivisionByZero(GenJacError, ZeroDivisionError):
    pass


class InvalidClass(GenJacError, ValueError):
    """A representative that is not a unit modulo the modulus."""


class NotCoprime(GenJacError, ValueError):
    """A divisor or point meets the support of the modulus."""


class BudgetExceeded(GenJacError):
    pass


class NoCanonicalMap(GenJacError):
    """The smaller modulus does not divide the larger one."""


class TrivialCharacter(GenJacError, ValueError):
    pass


class DegreeBoundViolation(GenJacError, ArithmeticError):
    pass


class NumericalFailure(GenJacError, ArithmeticError):
    pass


class IncompleteBundle(GenJacError):
    pass


class CarrierTooSmall(GenJacError):
    pass


class CarrierMismatch(GenJacError):
    pass


class InjectivityViolation(GenJacError):
    pass


class NoTwistFound(GenJacError):
    """Valid negative answer of the twist search; ``reason`` says why."""

    def __init__(self, reason, rejected=()):
        super().__init__(reason)
        self.reason = reason
        self.rejected = list(rejected)


class InvalidComparison(GenJacError, ValueError):
    pass


class HypothesisViolated(GenJacError, ValueError):
    pass


class ParseError(GenJacError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidCurve(GenJacError, ValueError):
    pass


class EvaluationAtSupport(GenJacError, ArithmeticError):
    pass
