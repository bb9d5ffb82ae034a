"""Complex Finsler metrics, fundamental tensors and path lengths.

A metric is a positive |lambda|-homogeneous function F(z, eta) on the slit
tangent bundle; its fundamental tensor is the mixed Hessian

    g_{ij}(z, eta) = d^2 F^2 / (d eta^i d conj(eta^j)),

computed here by central differences on the real and imaginary parts of
eta.  Purely Hermitian metrics have F^2 exactly quadratic in eta, so they
get a larger default step (second differences of quadratics are exact and
the bigger step suppresses the roundoff floor eps/s^2).
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import (
    BetaZeroError,
    EmptyPathError,
    NonPositiveDefiniteWarning,
    ZeroDirectionError,
)
from .navigation import RandersData, ZermeloStructure, SolutionKind, classify_solution, solve_forward
from .wirtinger import (
    MatrixField,
    as_point,
    as_vector,
    hermitian_norm,
    hermitian_part,
)

#: default eta step for fundamental tensors of genuinely Finsler metrics;
#: balances second-difference truncation against the eps/s^2 roundoff floor
GENERIC_ETA_STEP = 3e-4
#: eta step for metrics with F^2 quadratic in eta (truncation is zero)
QUADRATIC_ETA_STEP = 1e-2


def _always_inside(z) -> bool:
    return True


@dataclasses.dataclass(frozen=True)
class FinslerMetric:
    """Callable metric with provenance and differentiation hints."""

    fn: Callable
    dim: int
    provenance: str  # forward-solution | randers-composed | hermitian | conformal
    eta_step: float = GENERIC_ETA_STEP
    #: optional analytic fundamental tensor (z, eta) -> matrix
    exact_g: Callable | None = None
    domain: Callable = _always_inside

    def F(self, z, eta) -> float:
        return float(self.fn(z, eta))

    def in_domain(self, z) -> bool:
        return bool(self.domain(z))


@dataclasses.dataclass(frozen=True)
class FundamentalTensor:
    """Fundamental tensor value with its base point and direction."""

    g: np.ndarray
    z: np.ndarray
    eta: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.g).min())


def hermitian_metric(g: MatrixField, provenance: str = "hermitian") -> FinslerMetric:
    """Norm metric F = sqrt(g_{ij} eta^i conj(eta^j)) of a Hermitian field."""

    def fn(z, eta):
        return hermitian_norm(g(z), as_vector(eta, g.dim))

    return FinslerMetric(fn=fn, dim=g.dim, provenance=provenance,
                         eta_step=QUADRATIC_ETA_STEP,
                         exact_g=lambda z, eta: g(z), domain=g.domain)


def randers_metric(r: RandersData) -> FinslerMetric:
    """Composed Randers norm F = alpha + |beta|."""

    def fn(z, eta):
        return r.value(z, eta)

    return FinslerMetric(fn=fn, dim=r.dim, provenance="randers-composed",
                         exact_g=lambda z, eta: randers_fundamental_tensor(r, z, eta),
                         domain=r.a.domain)


def forward_metric(s: ZermeloStructure) -> FinslerMetric:
    """Time-optimal metric of a navigation structure, as a FinslerMetric.

    Conformal cases (zero wind or cos(phi) = 0) carry their exact Hermitian
    fundamental tensor; Randers cases carry the closed-form Randers one.
    """
    kind = classify_solution(s).kind

    def fn(z, eta):
        return solve_forward(s, z, eta)

    if kind is SolutionKind.CONFORMAL_HERMITIAN:
        def g_exact(z, eta):
            h = s.h(z)
            if s.wind_is_zero:
                f = s.speed_value(z)
                return h / (f * f)
            return h / s.eps_tilde(z, h=h)

        return FinslerMetric(fn=fn, dim=s.dim, provenance="conformal",
                             eta_step=QUADRATIC_ETA_STEP, exact_g=g_exact,
                             domain=s.h.domain)

    g_exact = None
    if kind is SolutionKind.RANDERS:
        from .navigation import build_randers_data

        data = build_randers_data(s)
        g_exact = lambda z, eta: randers_fundamental_tensor(data, z, eta)
    return FinslerMetric(fn=fn, dim=s.dim, provenance="forward-solution",
                         exact_g=g_exact, domain=s.h.domain)


def randers_fundamental_tensor(r: RandersData, z, eta) -> np.ndarray:
    """Closed-form fundamental tensor of F = alpha + |beta|.

    With m_i = a_{ij} conj(eta^j):

        g = (1 + |b|/al) a - |b|/(2 al^3) m m*
            + beta/(2 al |b|) m b* + conj(beta)/(2 al |b|) b m*
            + (1 + al/(2 |b|)) b b*

    where al = alpha, |b| = |beta| and * is the conjugate-transpose of a
    column.  Singular on the locus beta = 0 (|beta| in denominators), where
    the composed norm is not smooth in eta.
    """
    z = as_point(z, r.dim)
    eta = as_vector(eta, r.dim)
    a = r.a(z)
    b = r.b(z)
    alpha = hermitian_norm(a, eta)
    beta = complex(np.dot(b, eta))
    ab = abs(beta)
    if ab < 1e-12 * max(1.0, alpha):
        raise BetaZeroError("fundamental tensor requested on the beta = 0 locus")
    m = a @ np.conj(eta)
    g = (
        (1.0 + ab / alpha) * a
        - (ab / (2 * alpha**3)) * np.outer(m, np.conj(m))
        + (beta / (2 * alpha * ab)) * np.outer(m, np.conj(b))
        + (np.conj(beta) / (2 * alpha * ab)) * np.outer(b, np.conj(m))
        + (1.0 + alpha / (2 * ab)) * np.outer(b, np.conj(b))
    )
    return hermitian_part(g)


def fundamental_tensor(m: FinslerMetric, z, eta, step: float | None = None,
                       warn_indefinite: bool = True) -> FundamentalTensor:
    """Mixed eta-Hessian of F^2 by central differences.

    Treats eta^i through its real and imaginary parts; the 2n x 2n real
    Hessian H of F^2 is folded into

        g_{ij} = ( H[x_i,x_j] + H[y_i,y_j] + i (H[x_i,y_j] - H[y_i,x_j]) ) / 4

    and re-symmetrized.  Refuses eta = 0 (the metric is smooth only off the
    zero section) and warns when an eigenvalue is nonpositive, which flags
    convexity failure.
    """
    z = as_point(z, m.dim)
    eta = as_vector(eta, m.dim)
    n = m.dim
    if float(np.max(np.abs(eta))) < 1e-14:
        raise ZeroDirectionError("fundamental tensor undefined at eta = 0")
    s = (m.eta_step if step is None else float(step)) * max(1.0, float(np.max(np.abs(eta))))

    x0 = np.concatenate([eta.real, eta.imag])

    def f2(x):
        return m.F(z, x[:n] + 1j * x[n:]) ** 2

    dim2 = 2 * n
    f_center = f2(x0)
    hess = np.empty((dim2, dim2))
    for p in range(dim2):
        ep = np.zeros(dim2)
        ep[p] = s
        hess[p, p] = (f2(x0 + ep) - 2.0 * f_center + f2(x0 - ep)) / (s * s)
        for q in range(p + 1, dim2):
            eq = np.zeros(dim2)
            eq[q] = s
            cross = (f2(x0 + ep + eq) - f2(x0 + ep - eq)
                     - f2(x0 - ep + eq) + f2(x0 - ep - eq)) / (4 * s * s)
            hess[p, q] = hess[q, p] = cross

    g = 0.25 * (hess[:n, :n] + hess[n:, n:] + 1j * (hess[:n, n:] - hess[n:, :n]))
    g = hermitian_part(g)
    tensor = FundamentalTensor(g=g, z=z, eta=eta)
    if warn_indefinite and tensor.min_eigenvalue <= 0.0:
        warnings.warn(
            f"fundamental tensor not positive definite at z={z}, eta={eta} "
            f"(min eigenvalue {tensor.min_eigenvalue})",
            NonPositiveDefiniteWarning, stacklevel=2)
    return tensor


#: deterministic scaling factors probing |lambda|-homogeneity
_HOMOGENEITY_FACTORS = (0.5, 2.0, 1j, 0.7 * np.exp(2.1j), -1.3 + 0.4j)


@dataclasses.dataclass(frozen=True)
class FinslerConditionsReport:
    """Per-condition verdicts with worst-case residuals over a sample set."""

    samples_used: int
    max_homogeneity_defect: float
    min_value_nonzero: float
    max_zero_defect: float
    min_g_eigenvalue: float
    passed: dict

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


def verify_finsler_conditions(m: FinslerMetric, samples,
                              homogeneity_tol: float = 1e-8) -> FinslerConditionsReport:
    """Check positivity, vanishing only at eta = 0, homogeneity and convexity."""
    samples = list(samples)
    if not samples:
        raise ValueError("sample list must be nonempty")
    worst_hom = 0.0
    min_value = math.inf
    worst_zero = 0.0
    min_eig = math.inf
    zero = np.zeros(m.dim, dtype=np.complex128)
    for z, eta in samples:
        value = m.F(z, eta)
        min_value = min(min_value, value)
        worst_zero = max(worst_zero, abs(m.F(z, zero)))
        for lam in _HOMOGENEITY_FACTORS:
            scaled = m.F(z, lam * as_vector(eta, m.dim))
            worst_hom = max(worst_hom, abs(scaled - abs(lam) * value) / max(1.0, abs(value)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPositiveDefiniteWarning)
            min_eig = min(min_eig, fundamental_tensor(m, z, eta).min_eigenvalue)
    return FinslerConditionsReport(
        samples_used=len(samples),
        max_homogeneity_defect=worst_hom,
        min_value_nonzero=min_value,
        max_zero_defect=worst_zero,
        min_g_eigenvalue=min_eig,
        passed={
            "positivity": min_value > 0.0,
            "zero_iff_zero": worst_zero <= 1e-12,
            "homogeneity": worst_hom <= homogeneity_tol,
            "convexity": min_eig > 0.0,
        },
    )


def path_length(m: FinslerMetric, path) -> float:
    """Length integral of F(gamma, dgamma/dt) along a sampled path.

    Composite Simpson on uniform time grids, trapezoid otherwise; the path
    must provide matching times, points and velocities.
    """
    times = np.asarray(path.times, dtype=float)
    if times.size < 2:
        raise EmptyPathError("path needs at least two samples")
    values = np.array([m.F(zp, vp) for zp, vp in zip(path.points, path.velocities)])
    dt = np.diff(times)
    if np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
        return float(simpson(values, x=times))
    return float(np.trapezoid(values, x=times))
