"""Exception types raised across the package."""


class HeisError(ValueError):
    """Base class for all contract violations raised by heislw."""


class NotPrime(HeisError):
    pass


class EvenCharacteristic(HeisError):
    pass


class ReducibleModulus(HeisError):
    pass


class DivisionByZero(HeisError, ZeroDivisionError):
    pass


class ContextMismatch(HeisError):
    pass


class BadAxis(HeisError):
    pass


class ZeroScalar(HeisError):
    pass


class ArityMismatch(HeisError):
    pass


class WrongDimension(HeisError):
    pass


class DimensionMismatch(HeisError):
    pass


class BadExponent(HeisError):
    pass


class BadRange(HeisError):
    pass


class BadField(HeisError):
    pass


class EmptySet(HeisError):
    pass


class TooLarge(HeisError):
    """A capacity guard tripped; ``cost`` carries the estimate that failed."""

    def __init__(self, message, cost=None):
        super().__init__(message)
        self.cost = cost


class Unclassifiable(HeisError):
    pass
