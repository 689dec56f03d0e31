"""Exception types shared across the package."""


class HardEdgeError(Exception):
    """Base class for all errors raised by :mod:`hardedge`."""


class DomainError(HardEdgeError, ValueError):
    """A parameter lies outside the domain where the operation is defined."""


class AccuracyError(HardEdgeError, ArithmeticError):
    """A numerical routine could not reach its target tolerance.

    Attributes
    ----------
    achieved : float
        The error bound that was actually attained.
    """

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved bound {achieved:.3e})")
        self.achieved = achieved


class IntegrationError(HardEdgeError, ArithmeticError):
    """The SDE integrator produced a non-finite state."""


class EigensolverError(HardEdgeError, ArithmeticError):
    """Bisection failed to isolate an eigenvalue.

    Attributes
    ----------
    intervals : list of (float, float)
        Bracketing intervals at the time of failure.
    """

    def __init__(self, message, intervals):
        super().__init__(message)
        self.intervals = intervals
