"""Forward and inverse solutions of the generalized navigation problem.

A structure bundles a background Hermitian metric h, a position-dependent
own-speed magnitude f(z) = ||u(z)||_h, a wind field W(z) and a constant
drift phase angle phi = arg h(v, Wbar).  Under mild wind, ||W||_h < f <= 1,
the time-optimal indicatrix is the norm

    F(z, eta) = ( sqrt(q^2 cos^2(phi) + ||eta||_h^2 e) - q cos(phi) ) / e

with q = |h(eta, Wbar)| and e = f^2 - ||W||_h^2.  For cos(phi) < 0 this is
the Randers composition alpha + |beta| of a modified Hermitian metric and a
(1,0)-form; for cos(phi) = 0 or W = 0 it is conformal to h.  The inverse
map reconstructs (h, f, W) from Randers data.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import NamedTuple

import numpy as np

from .errors import (
    ConvexityError,
    WindTooStrongError,
    ZeroWindError,
)
from .wirtinger import (
    MatrixField,
    ScalarField,
    VectorField,
    as_point,
    as_vector,
    hermitian_form,
    hermitian_inverse,
    hermitian_norm,
)


class SolutionKind(enum.Enum):
    RANDERS = "Randers"
    CONFORMAL_HERMITIAN = "ConformalHermitian"
    ALPHA_BETA_NON_RANDERS = "AlphaBetaNonRanders"


class SolutionClass(NamedTuple):
    kind: SolutionKind
    #: set when the metric may fail strong pseudoconvexity (cos(phi) > 0)
    convexity_warning: bool


@dataclasses.dataclass(frozen=True)
class ZermeloStructure:
    """Navigation data (h, f, W, cos phi) with a constant drift phase.

    The wind being identically zero is declared by ``wind_is_zero`` rather
    than detected by sampling; mild-wind validity is checked lazily at every
    evaluated point.
    """

    h: MatrixField
    speed: ScalarField
    wind: VectorField
    cos_phi: float
    wind_is_zero: bool = False

    def __post_init__(self):
        if not -1.0 <= self.cos_phi <= 1.0:
            raise ValueError(f"cos(phi) must lie in [-1, 1], got {self.cos_phi}")
        if not (self.h.dim == self.speed.dim == self.wind.dim):
            raise ValueError("h, speed and wind dimensions disagree")

    @property
    def dim(self) -> int:
        return self.h.dim

    def in_domain(self, z) -> bool:
        return self.h.in_domain(z)

    def speed_value(self, z) -> float:
        f = self.speed(z)
        if abs(f.imag) > 1e-10 * max(1.0, abs(f)):
            raise ValueError(f"own speed must be real, got {f}")
        f = f.real
        if not 0.0 < f <= 1.0 + 1e-12:
            raise ValueError(f"own speed must lie in (0, 1], got {f}")
        return float(f)

    def wind_value(self, z) -> np.ndarray:
        if self.wind_is_zero:
            return np.zeros(self.dim, dtype=np.complex128)
        return self.wind(z)

    def wind_lowered(self, z, h=None) -> np.ndarray:
        """Covariant wind components W_i = h_{ij} conj(W^j)."""
        h = self.h(z) if h is None else h
        return h @ np.conj(self.wind_value(z))

    def eps_tilde(self, z, h=None) -> float:
        """Resultant-speed margin f^2 - ||W||_h^2; positive under mild wind."""
        h = self.h(z) if h is None else h
        f = self.speed_value(z)
        wnorm = 0.0 if self.wind_is_zero else hermitian_norm(h, self.wind(z))
        eps = f * f - wnorm * wnorm
        if eps <= 0.0:
            raise WindTooStrongError(
                f"||W||_h = {wnorm} >= f = {f} at z = {z}; mild-wind condition failed")
        return eps


def solve_forward(s: ZermeloStructure, z, eta) -> float:
    """Value F(z, eta) of the time-optimal metric for the given structure.

    Returns 0 exactly when eta = 0; with zero wind reduces to ||eta||_h / f.
    """
    z = as_point(z, s.dim)
    eta = as_vector(eta, s.dim)
    h = s.h(z)
    eps = s.eps_tilde(z, h=h)
    if not np.any(eta):
        return 0.0
    nrm = hermitian_norm(h, eta)
    if s.wind_is_zero:
        return nrm / s.speed_value(z)
    q = abs(hermitian_form(h, eta, s.wind(z)))
    p = q * s.cos_phi
    return (math.sqrt(p * p + nrm * nrm * eps) - p) / eps


def classify_solution(s: ZermeloStructure) -> SolutionClass:
    """Case tag of the induced metric: Randers, conformal, or alpha-beta.

    Nonzero wind with constant cos(phi) < 0 gives a complex Randers metric
    (exactly realizable through the inverse problem at cos(phi) = -1); zero
    wind or cos(phi) = 0 gives a Hermitian metric conformal to h; and
    cos(phi) > 0 gives an alpha - |beta| function that need not be strongly
    pseudoconvex, flagged with a convexity warning.
    """
    if s.wind_is_zero or s.cos_phi == 0.0:
        return SolutionClass(SolutionKind.CONFORMAL_HERMITIAN, False)
    if s.cos_phi < 0.0:
        return SolutionClass(SolutionKind.RANDERS, False)
    return SolutionClass(SolutionKind.ALPHA_BETA_NON_RANDERS, True)


@dataclasses.dataclass(frozen=True)
class RandersData:
    """Pair (a, b) of a Hermitian metric and a (1,0)-form, plus the speed f.

    Composes the norm F = alpha + |beta| with alpha = sqrt(a_{ij} eta^i
    conj(eta^j)) and beta = b_i eta^i; strong pseudoconvexity requires
    ||b||^2 = a^{ji} b_i conj(b_j) in (0, 1) wherever evaluated.
    """

    a: MatrixField
    b: VectorField
    f: ScalarField

    @property
    def dim(self) -> int:
        return self.a.dim

    def in_domain(self, z) -> bool:
        return self.a.in_domain(z)

    def components(self, z, eta) -> tuple[float, complex]:
        """(alpha, beta) at (z, eta)."""
        z = as_point(z, self.dim)
        eta = as_vector(eta, self.dim)
        alpha = hermitian_norm(self.a(z), eta)
        beta = complex(np.dot(self.b(z), eta))
        return alpha, beta

    def value(self, z, eta) -> float:
        """Randers norm alpha + |beta|."""
        alpha, beta = self.components(z, eta)
        return alpha + abs(beta)

    def b_raised(self, z, a=None) -> np.ndarray:
        """Contravariant components b^i = a^{ji} conj(b_j)."""
        a = self.a(z) if a is None else a
        return hermitian_inverse(a).T @ np.conj(self.b(z))

    def norm_b_sq(self, z, a=None) -> float:
        """||b||^2 = b_i b^i; real and in (0, 1) for pseudoconvex data."""
        val = complex(np.dot(self.b(z), self.b_raised(z, a=a))).real
        return float(val)


def build_randers_data(s: ZermeloStructure) -> RandersData:
    """Decompose the forward solution into Randers data (a, b, f).

    a_{ij} = h_{ij}/e + (W_i/e)(conj(W_j)/e) cos^2(phi) and
    b_i = -(W_i/e) cos(phi) with W_i the lowered wind and e the mild-wind
    margin; then alpha + |beta| reproduces the forward solution pointwise
    whenever cos(phi) < 0.  The resulting ||b||^2 equals
    ||W||^2 cos^2(phi) / (f^2 - ||W||^2 sin^2(phi)) < 1.
    """
    if s.wind_is_zero:
        raise ZeroWindError("Randers decomposition requires a nonzero wind")
    cos_phi = s.cos_phi
    cos2 = cos_phi * cos_phi

    def a_fn(z):
        h = s.h(z)
        eps = s.eps_tilde(z, h=h)
        wlow = s.wind_lowered(z, h=h)
        return h / eps + np.outer(wlow, np.conj(wlow)) * (cos2 / (eps * eps))

    def b_fn(z):
        h = s.h(z)
        eps = s.eps_tilde(z, h=h)
        return -s.wind_lowered(z, h=h) * (cos_phi / eps)

    n = s.dim
    return RandersData(
        a=MatrixField(fn=a_fn, dim=n, domain=s.h.domain),
        b=VectorField(fn=b_fn, dim=n, domain=s.h.domain),
        f=s.speed,
    )


def solve_inverse(r: RandersData) -> ZermeloStructure:
    """Reconstruct navigation data whose forward solution is the given metric.

    Built pointwise as h_{ij} = w (a_{ij} - b_i conj(b_j)), ||u|| = f and
    W^i = f^2 b^i / w with w = f^2 (1 - ||b||^2); the reconstruction
    satisfies ||W||_h = f ||b|| < f and has margin e = w.  With the returned
    phase cos(phi) = -1 the round trip through build_randers_data reproduces
    (a, b) pointwise.
    """

    def omega(z) -> float:
        nb = r.norm_b_sq(z)
        if not 0.0 < nb < 1.0:
            raise ConvexityError(f"||b||^2 = {nb} outside (0, 1) at z = {z}")
        f = r.f(z).real
        if not 0.0 < f <= 1.0 + 1e-12:
            raise ValueError(f"ship speed must lie in (0, 1], got {f}")
        return f * f * (1.0 - nb)

    def h_fn(z):
        b = r.b(z)
        return omega(z) * (r.a(z) - np.outer(b, np.conj(b)))

    def wind_fn(z):
        f = r.f(z).real
        return (f * f / omega(z)) * r.b_raised(z)

    n = r.dim
    return ZermeloStructure(
        h=MatrixField(fn=h_fn, dim=n, domain=r.a.domain),
        speed=r.f,
        wind=VectorField(fn=wind_fn, dim=n, domain=r.a.domain),
        cos_phi=-1.0,
    )


def orthogonality_angle(s: ZermeloStructure, z, v) -> float:
    """Phase arg h(v, Wbar) in (-pi, pi] of a direction against the wind.

    The cosine of the result vanishes exactly when Re h(v, Wbar) = 0, i.e.
    when v and W are orthogonal; the value pi signals h(v, Wbar) < 0.  A
    vanishing pairing h(v, Wbar) = 0 has no phase of its own and reports
    pi/2 so that orthogonality still reads off as cos = 0.
    """
    if s.wind_is_zero:
        raise ZeroWindError("orthogonality angle undefined for zero wind")
    z = as_point(z, s.dim)
    v = as_vector(v, s.dim)
    if not np.any(v):
        raise ValueError("direction v must be nonzero")
    w = s.wind(z)
    if not np.any(w):
        raise ZeroWindError(f"wind vanishes at z = {z}")
    inner = hermitian_form(s.h(z), v, w)
    if inner == 0:
        return math.pi / 2.0
    return math.atan2(inner.imag, inner.real)
