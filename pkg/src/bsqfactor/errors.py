"""Exception hierarchy shared by the library and the CLI."""


class BsqError(Exception):
    """Base class for all errors raised by :mod:`bsqfactor`."""


class DivisionByZero(BsqError, ZeroDivisionError):
    pass


class ZeroPolynomial(BsqError, ValueError):
    pass


class LogarithmicPart(BsqError, ArithmeticError):
    """The integrand has a nonzero logarithmic part, so no rational antiderivative exists."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class PoleError(BsqError, ZeroDivisionError):
    pass


class DivisionByZeroOperator(BsqError, ZeroDivisionError):
    pass


class NonConstantCoefficient(BsqError, ValueError):
    pass


class InexactDivision(BsqError, ArithmeticError):
    pass


class NonSquare(BsqError, ValueError):
    pass


class PreconditionViolated(BsqError, ValueError):
    pass


class NotXFree(BsqError, ArithmeticError):
    """A differential resultant still depends on x. Never expected for commuting input."""


class OrderTooSmall(BsqError, ValueError):
    pass


class BadOrder(BsqError, ValueError):
    pass


class NoCentralizerFound(BsqError, LookupError):
    def __init__(self, message, branch=None, cap=None):
        super().__init__(message)
        self.branch = branch
        self.cap = cap


class NotOnCurve(BsqError, ValueError):
    pass


class ZeroDenominator(BsqError, ZeroDivisionError):
    pass


class ParseError(BsqError, ValueError):
    def __init__(self, message, position=None, text=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
        self.text = text


class UnboundConstant(BsqError, NameError):
    pass
