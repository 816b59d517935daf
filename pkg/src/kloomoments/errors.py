"""Exception hierarchy shared by every module of the package."""


class KloosError(Exception):
    """Base class for all errors raised by kloomoments."""


class ReducibleModulus(KloosError, ValueError):
    pass


class DegreeMismatch(KloosError, ValueError):
    pass


class UnsupportedDegree(KloosError, ValueError):
    pass


class ZeroInverse(KloosError, ZeroDivisionError):
    pass


class ZeroParameter(KloosError, ValueError):
    pass


class BudgetExceeded(KloosError, RuntimeError):
    pass


class NotPowerOfTwo(KloosError, ValueError):
    pass


class NonIntegralCount(KloosError, ArithmeticError):
    """An exact division by q left a remainder; always an internal bug."""


class ParityViolation(KloosError, ArithmeticError):
    """N - K was odd where a Hamming weight (N - K)/2 was expected."""


class InjectivityFailure(KloosError, RuntimeError):
    pass


class IdentityViolation(KloosError, AssertionError):
    """A checked identity failed; carries both sides for diagnosis."""

    def __init__(self, name, h, lhs, rhs):
        self.name = name
        self.h = h
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{name} fails at h={h}: lhs={lhs} rhs={rhs}")
