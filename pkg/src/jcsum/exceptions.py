"""Exception types shared across the package."""


class JcsumError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(JcsumError, ValueError):
    """A physical or configuration parameter is out of its allowed range."""


class DomainError(JcsumError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NumericalFailureError(JcsumError, RuntimeError):
    """An iterative or quadrature scheme failed to reach its tolerance.

    Carries diagnostic payload so callers can report how far off the
    computation ended up.
    """

    def __init__(self, message, *, estimate=None, last_iterate=None):
        super().__init__(message)
        self.estimate = estimate
        self.last_iterate = last_iterate


class WrongBranchError(NumericalFailureError):
    """A root lands outside the strip of the requested branch."""


class BranchJumpError(NumericalFailureError):
    """Continuation along a trajectory lost continuity (branch switch)."""

    def __init__(self, message, *, tau=None, **kw):
        super().__init__(message, **kw)
        self.tau = tau
