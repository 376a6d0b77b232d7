"""Exception types raised across the package."""


class HermixError(Exception):
    """Base class for all errors raised by hermix."""


class InvalidParameter(HermixError, ValueError):
    pass


class OrderTooLarge(HermixError, ValueError):
    pass


class MomentNotFinite(HermixError, ValueError):
    pass


class NonPolynomialParameter(HermixError, ValueError):
    pass


class InsufficientMoments(HermixError, ValueError):
    pass


class EmptySample(HermixError, ValueError):
    pass


class RingMismatch(HermixError, ValueError):
    pass


class NotZeroDimensional(HermixError):
    """The ideal has infinitely many solutions.

    ``free_variables`` lists the variables with no pure power among the
    leading terms of the basis (the staircase witness).
    """

    def __init__(self, free_variables):
        self.free_variables = tuple(free_variables)
        names = ", ".join(self.free_variables)
        super().__init__(f"ideal is not zero-dimensional: no pure power of {names} among leading terms")


class NotMonic(HermixError, ValueError):
    pass


class NotUnivariate(HermixError, ValueError):
    pass


class BasisMismatch(HermixError, ValueError):
    pass


class NoConvergence(HermixError):
    pass


class SeparationFailure(HermixError):
    pass


class Underdetermined(HermixError, ValueError):
    pass


class RankDeficient(HermixError):
    def __init__(self, message, components=()):
        self.components = tuple(components)
        super().__init__(message)


class InfeasibleWeights(HermixError, ValueError):
    pass


class NoFeasibleCandidate(HermixError):
    pass


class ParseError(HermixError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownFamily(HermixError, ValueError):
    pass


class MalformedLine(HermixError, ValueError):
    def __init__(self, line_number, text=""):
        self.line_number = line_number
        super().__init__(f"malformed line {line_number}: {text!r}")


class Overdetermined(HermixError, ValueError):
    pass
