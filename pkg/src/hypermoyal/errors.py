"""Exception types shared across the package."""


class HypermoyalError(Exception):
    """Base class for every package-specific error."""


class SignatureMismatchError(HypermoyalError, ValueError):
    """Operands carry different signatures of the squared imaginary unit."""


class DimensionMismatchError(HypermoyalError, ValueError):
    """Operands live on spaces of different dimension."""


class ZeroDivisorError(HypermoyalError, ZeroDivisionError):
    """Inversion of zero or of a light-cone element was attempted."""


class NotRepresentableError(HypermoyalError, ValueError):
    """The value admits no hyperbolic polar decomposition."""


class DegreeCapError(HypermoyalError, ValueError):
    """A product would exceed the configured total-degree cap."""


class ParseError(HypermoyalError, ValueError):
    """Malformed expression text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ValidationError(HypermoyalError, ValueError):
    """Malformed probability table or input file."""


class InvalidStateError(HypermoyalError, ValueError):
    """Amplitudes produced a probability outside [0, 1].

    Carries the offending value and the violated bound so callers can report
    which constraint was broken instead of silently clamping.
    """

    def __init__(self, message: str, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound
