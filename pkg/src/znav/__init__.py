"""Zermelo navigation on Hermitian manifolds.

Builds time-optimal complex Finsler metrics from navigation data
(background Hermitian metric, position-dependent own speed, wind field and
a constant drift phase), integrates their geodesics, computes holomorphic
curvature, and runs the numerical classification battery (Kahler,
generalized Berwald, Douglas, complex Berwald, projective relatedness and
flatness).
"""

from .errors import (
    BetaZeroError,
    ConvexityError,
    DomainError,
    EmptyPathError,
    HypothesisNotMetError,
    NegativeFormError,
    NonPositiveDefiniteWarning,
    ParseError,
    SingularError,
    StepError,
    StepFailureError,
    UnknownScenarioError,
    ValidationError,
    WindTooStrongError,
    ZeroDirectionError,
    ZeroWindError,
    ZnavError,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
