"""Exception and warning types shared across the package."""


class ZnavError(Exception):
    """Base class for all znav errors."""


class DomainError(ZnavError):
    """A point (or a finite-difference stencil around it) left the chart."""


class StepError(ZnavError):
    """A finite-difference step underflowed below representable resolution."""


class SingularError(ZnavError):
    """A matrix required to be positive definite is singular or indefinite."""


class NegativeFormError(ZnavError):
    """A Hermitian quadratic form evaluated significantly below zero."""


class WindTooStrongError(ZnavError):
    """The mild-wind condition ||W||_h < ||u||_h failed at an evaluated point."""


class ZeroWindError(ZnavError):
    """An operation requiring a nonzero wind received a zero-wind structure."""


class ConvexityError(ZnavError):
    """||b||^2 left (0, 1), so the Randers data is not strongly pseudoconvex."""


class ZeroDirectionError(ZnavError):
    """A tangent direction eta = 0 was passed where F is not smooth."""


class BetaZeroError(ZnavError):
    """The Randers spray formula was evaluated on its singular locus beta = 0."""


class EmptyPathError(ZnavError):
    """A path with fewer than two samples cannot be integrated."""


class StepFailureError(ZnavError):
    """The adaptive integrator's step size underflowed away from the boundary."""


class HypothesisNotMetError(ZnavError):
    """A conditional identity was requested with its hypothesis flag false."""

    def __init__(self, message, *, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class UnknownScenarioError(ZnavError):
    """Requested builtin scenario name does not exist."""


class ParseError(ZnavError):
    """Field-expression source text could not be parsed."""

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position
        self.expected = tuple(expected)


class ValidationError(ZnavError):
    """A scenario file failed schema or invariant validation."""


class NonPositiveDefiniteWarning(UserWarning):
    """A fundamental tensor evaluation produced a non-positive eigenvalue."""
