"""Exception hierarchy shared by all modules."""


class MdsArrayError(Exception):
    """Base class for all library errors."""


class NotPrime(MdsArrayError):
    def __init__(self, q):
        super().__init__(f"{q} is not prime")
        self.q = q


class DivisionByZero(MdsArrayError, ZeroDivisionError):
    pass


class FieldTooSmall(MdsArrayError):
    def __init__(self, needed, q):
        super().__init__(f"need {needed} distinct elements but field has only {q}")
        self.needed = needed
        self.q = q


class BadParameters(MdsArrayError):
    pass


class OutOfRange(MdsArrayError):
    pass


class TooManyErasures(MdsArrayError):
    pass


class TooManyFailures(MdsArrayError):
    pass


class TooFewHelpers(MdsArrayError):
    pass


class DecodingFailure(MdsArrayError):
    pass


class UnsupportedSpec(MdsArrayError):
    pass


class SingularSystem(MdsArrayError):
    """Internal assertion failure: a system the construction guarantees to be
    invertible turned out singular.  Indicates a bug, not a recoverable state."""


class SingularDifference(MdsArrayError):
    pass


class NotIntegral(MdsArrayError):
    pass


class ShardFormatError(MdsArrayError):
    pass
