"""Spray coefficients, geodesic ODE integration and trajectory diagnostics.

The nonlinear connection of a metric with fundamental tensor g is

    N^i_j = g^{mi} dg_{lm}/dz^j eta^l,        2 G^i = N^i_j eta^j,

(indices on inverses follow a^{ji} = inv[j, i]); geodesics solve

    d2 gamma^k/dt2 + 2 G^k(gamma, dgamma/dt) = theta*^k(gamma, dgamma/dt)

where theta* is the weak-Kahler defect term.  For a Hermitian metric a the
defect has the closed form theta*^k = -Gamma_{lrm} a^{mk} eta^l conj(eta^r)
with Gamma_{lrm} = da_{lm}/dzbar^r - da_{lr}/dzbar^m; for Randers norms
alpha + |beta| both G and theta* have closed forms in terms of the data
(a, b) and the underlying Hermitian spray, singular only on beta = 0.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from .errors import (
    BetaZeroError,
    ConvexityError,
    DomainError,
    StepFailureError,
    ZnavError,
)
from .metrics import FinslerMetric, fundamental_tensor
from .navigation import RandersData, ZermeloStructure
from .wirtinger import (
    MatrixField,
    VectorField,
    as_point,
    as_vector,
    hermitian_form,
    hermitian_inverse,
    hermitian_norm,
    matrix_z_derivatives,
    wirtinger_d,
)


@dataclasses.dataclass(frozen=True)
class SprayEvaluation:
    """Spray coefficients G^i, defect theta*^i and optionally N^i_j at (z, eta)."""

    G: np.ndarray
    theta_star: np.ndarray
    N: np.ndarray | None = None


SprayFn = Callable[[np.ndarray, np.ndarray], SprayEvaluation]


def _vector_z_derivatives(field: VectorField, z, conjugate: bool, order: int = 2) -> np.ndarray:
    """Stack d(field_i)/dz^j (or dzbar^j); shape (n, n) indexed [j, i]."""
    return np.stack([wirtinger_d(field, z, j, conjugate=conjugate, order=order)
                     for j in range(field.dim)])


def _hermitian_connection(g: MatrixField, z, eta, order: int = 2, step: float | None = None):
    """Shared pieces of a Hermitian spray: (a, ainv, N, G, Gamma, theta)."""
    z = as_point(z, g.dim)
    eta = as_vector(eta, g.dim)
    a = g(z)
    ainv = hermitian_inverse(a)
    dg = matrix_z_derivatives(g, z, conjugate=False, order=order, step=step)
    dgbar = matrix_z_derivatives(g, z, conjugate=True, order=order, step=step)
    # N^i_j = a^{mi} da_{lm}/dz^j eta^l
    N = np.einsum("mi,jlm,l->ij", ainv, dg, eta)
    G = 0.5 * (N @ eta)
    # Gamma[l, r, m] = da_{lm}/dzbar^r - da_{lr}/dzbar^m
    gamma = dgbar.transpose(1, 0, 2) - dgbar.transpose(1, 2, 0)
    theta = -np.einsum("lrm,mk,l,r->k", gamma, ainv, eta, np.conj(eta))
    return a, ainv, N, G, gamma, theta


def hermitian_spray(g: MatrixField, z, eta, order: int = 2, step: float | None = None) -> SprayEvaluation:
    """Spray of a Hermitian metric field, with its weak-Kahler defect.

    The defect theta* vanishes identically exactly for Kahler fields
    (Gamma = 0).
    """
    _, _, N, G, _, theta = _hermitian_connection(g, z, eta, order=order, step=step)
    return SprayEvaluation(G=G, theta_star=theta, N=N)


def hermitian_spray_fn(g: MatrixField, order: int = 2, step: float | None = None) -> SprayFn:
    return lambda z, eta: hermitian_spray(g, z, eta, order=order, step=step)


def _randers_pieces(r: RandersData, z, eta, order: int = 2):
    z = as_point(z, r.dim)
    eta = as_vector(eta, r.dim)
    a, ainv, n_a, g_a, gamma, theta_a = _hermitian_connection(r.a, z, eta, order=order)
    b = r.b(z)
    alpha = hermitian_norm(a, eta)
    beta = complex(np.dot(b, eta))
    ab = abs(beta)
    if ab < 1e-12 * max(1.0, alpha):
        raise BetaZeroError("Randers spray formula is singular on beta = 0")
    bup = ainv.T @ np.conj(b)
    nb = complex(np.dot(b, bup)).real
    if not 0.0 < nb < 1.0:
        raise ConvexityError(f"||b||^2 = {nb} outside (0, 1) at z = {z}")
    return z, eta, a, ainv, n_a, g_a, gamma, theta_a, b, bup, alpha, beta, ab, nb


def _randers_g_and_dg(a, da, b, db, dbbar, eta):
    """Fundamental tensor of alpha + |beta| and its z-derivatives at fixed eta.

    The tensor is the closed form used throughout (see
    metrics.randers_fundamental_tensor); its z-derivative is assembled by
    the chain rule from the derivative blocks da[j], db[j] and
    dbbar[j] = d(conj b)/dz^j, so the only numerical error is the one
    already present in those first derivatives.
    """
    n = eta.size
    eta_bar = np.conj(eta)
    alpha2 = complex(np.einsum("lm,l,m->", a, eta, eta_bar)).real
    alpha = np.sqrt(alpha2)
    beta = complex(np.dot(b, eta))
    ab = abs(beta)
    m = a @ eta_bar
    lbar = a.T @ eta  # equals conj(m)
    bbar = np.conj(b)

    c1 = 1.0 + ab / alpha
    c2 = -ab / (2.0 * alpha**3)
    c3 = beta / (2.0 * alpha * ab)
    c4 = np.conj(beta) / (2.0 * alpha * ab)
    c5 = 1.0 + alpha / (2.0 * ab)
    g = (c1 * a + c2 * np.outer(m, lbar) + c3 * np.outer(m, bbar)
         + c4 * np.outer(b, lbar) + c5 * np.outer(b, bbar))

    dg = np.empty((n, n, n), dtype=np.complex128)
    for j in range(n):
        d_alpha2 = complex(np.einsum("lm,l,m->", da[j], eta, eta_bar))
        d_alpha = d_alpha2 / (2.0 * alpha)
        d_beta = complex(np.dot(db[j], eta))
        d_betabar = complex(np.dot(dbbar[j], eta_bar))
        d_ab = (np.conj(beta) * d_beta + beta * d_betabar) / (2.0 * ab)
        d_m = da[j] @ eta_bar
        d_lbar = da[j].T @ eta
        d_c1 = d_ab / alpha - ab * d_alpha / alpha2
        d_c2 = -d_ab / (2.0 * alpha**3) + 3.0 * ab * d_alpha / (2.0 * alpha**4)
        d_c3 = d_beta / (2.0 * alpha * ab) - beta * (d_alpha * ab + alpha * d_ab) / (2.0 * alpha2 * ab * ab)
        d_c4 = d_betabar / (2.0 * alpha * ab) - np.conj(beta) * (d_alpha * ab + alpha * d_ab) / (2.0 * alpha2 * ab * ab)
        d_c5 = d_alpha / (2.0 * ab) - alpha * d_ab / (2.0 * ab * ab)
        dg[j] = (
            d_c1 * a + c1 * da[j]
            + d_c2 * np.outer(m, lbar) + c2 * (np.outer(d_m, lbar) + np.outer(m, d_lbar))
            + d_c3 * np.outer(m, bbar) + c3 * (np.outer(d_m, bbar) + np.outer(m, dbbar[j]))
            + d_c4 * np.outer(b, lbar) + c4 * (np.outer(db[j], lbar) + np.outer(b, d_lbar))
            + d_c5 * np.outer(b, bbar) + c5 * (np.outer(db[j], bbar) + np.outer(b, dbbar[j]))
        )
    return g, dg


def randers_spray(r: RandersData, z, eta, order: int = 2) -> SprayEvaluation:
    """Spray and weak-Kahler defect of a Randers norm from its data (a, b).

    The connection is the defining contraction N^i_j = g^{mi} dg_{lm}/dz^j
    eta^l evaluated on the closed-form fundamental tensor of alpha + |beta|,
    with dg assembled exactly by the chain rule from first derivatives of a
    and b.  That makes the reduction to the a-spray on generalized-Berwald
    data an identity rather than a cancellation of separately differenced
    terms.  theta* is the defect g^{mk} g_{hp} (conj L^p_{jm} -
    conj L^p_{mj}) eta^h conj(eta^j) with L^p_{jm} the eta-derivatives of N,
    which only differences the analytic eta-dependence of N.
    """
    (z, eta, a, ainv, n_a, g_a, gamma, theta_a,
     b, bup, alpha, beta, ab, nb) = _randers_pieces(r, z, eta, order=order)

    da = matrix_z_derivatives(r.a, z, conjugate=False, order=order)
    db = _vector_z_derivatives(r.b, z, conjugate=False, order=order)
    db_zbar = _vector_z_derivatives(r.b, z, conjugate=True, order=order)
    dbbar = np.conj(db_zbar)  # [j, r] = d(conj b_r)/dz^j

    def connection(ee):
        g, dg = _randers_g_and_dg(a, da, b, db, dbbar, ee)
        return g, np.einsum("mi,jlm,l->ij", hermitian_inverse(g), dg, ee)

    g0, N = connection(eta)
    G = 0.5 * (N @ eta)

    n = r.dim
    s = 1e-5 * max(1.0, float(np.max(np.abs(eta))))
    L = np.empty((n, n, n), dtype=np.complex128)  # [p, j, m] = dN^p_m / d eta^j
    for j in range(n):
        shift = np.zeros(n, dtype=np.complex128)
        shift[j] = s
        nxp = connection(eta + shift)[1]
        nxm = connection(eta - shift)[1]
        shift[j] = 1j * s
        nyp = connection(eta + shift)[1]
        nym = connection(eta - shift)[1]
        L[:, j, :] = 0.5 * ((nxp - nxm) / (2 * s) - 1j * (nyp - nym) / (2 * s))
    lbar_t = np.conj(L)
    skew = lbar_t - lbar_t.transpose(0, 2, 1)
    theta = np.einsum("mk,hp,pjm,h,j->k", hermitian_inverse(g0), g0, skew,
                      eta, np.conj(eta))
    return SprayEvaluation(G=G, theta_star=theta, N=N)


def randers_spray_fn(r: RandersData, order: int = 2) -> SprayFn:
    return lambda z, eta: randers_spray(r, z, eta, order=order)


def berwald_defect(r: RandersData, z, eta, order: int = 2) -> complex:
    """Scalar (delta_k |beta|^2) eta^k along the a-connection.

    Vanishing over a sample set certifies the generalized-Berwald property
    of the Randers norm, under which its spray reduces to the a-spray.
    """
    (z, eta, a, ainv, n_a, g_a, gamma, theta_a,
     b, bup, alpha, beta, ab, nb) = _randers_pieces(r, z, eta, order=order)
    db = _vector_z_derivatives(r.b, z, conjugate=False, order=order)
    db_zbar = _vector_z_derivatives(r.b, z, conjugate=True, order=order)
    delta_beta = db @ eta - n_a.T @ b          # [k] = (db_i/dz^k) eta^i - N^i_k b_i
    delta_beta_bar = np.conj(db_zbar) @ np.conj(eta)  # [k] = (d conj(b_j)/dz^k) conj(eta^j)
    return complex(np.dot(eta, np.conj(beta) * delta_beta + beta * delta_beta_bar))


def spray_from_g(g_fn: Callable, dim: int, z, eta, z_step: float = 1e-5,
                 order: int = 2, want_theta: bool = False,
                 eta_step: float = 1e-4) -> SprayEvaluation:
    """Spray extracted from an arbitrary fundamental tensor (z, eta) -> matrix.

    This is the direct route through the defining contraction and serves as
    the oracle for the closed-form Randers spray.  When ``want_theta`` the
    weak-Kahler defect is assembled from the eta-derivatives L^p_{jm} of the
    connection, which needs nested differencing and is accordingly slower
    and noisier.
    """
    z = as_point(z, dim)
    eta = as_vector(eta, dim)

    def connection(zz, ee):
        g0 = g_fn(zz, ee)
        field = MatrixField(fn=lambda w: g_fn(w, ee), dim=dim)
        dg = matrix_z_derivatives(field, zz, conjugate=False, order=order, step=z_step)
        return g0, np.einsum("mi,jlm,l->ij", hermitian_inverse(g0), dg, ee)

    g0, N = connection(z, eta)
    G = 0.5 * (N @ eta)
    theta = np.zeros(dim, dtype=np.complex128)
    if want_theta:
        s = eta_step * max(1.0, float(np.max(np.abs(eta))))
        L = np.empty((dim, dim, dim), dtype=np.complex128)  # [p, j, m]
        for j in range(dim):
            shift = np.zeros(dim, dtype=np.complex128)
            shift[j] = s
            nxp = connection(z, eta + shift)[1]
            nxm = connection(z, eta - shift)[1]
            shift[j] = 1j * s
            nyp = connection(z, eta + shift)[1]
            nym = connection(z, eta - shift)[1]
            L[:, j, :] = 0.5 * ((nxp - nxm) / (2 * s) - 1j * (nyp - nym) / (2 * s))
        lbar = np.conj(L)
        skew = lbar - lbar.transpose(0, 2, 1)  # conj(L)[p,j,m] - conj(L)[p,m,j]
        theta = np.einsum("mk,hp,pjm,h,j->k", hermitian_inverse(g0), g0, skew,
                          eta, np.conj(eta))
    return SprayEvaluation(G=G, theta_star=theta, N=N)


def metric_spray_fn(m: FinslerMetric, use_exact_g: bool = True,
                    want_theta: bool = False) -> SprayFn:
    """Generic spray evaluator for a FinslerMetric.

    Prefers the metric's analytic fundamental tensor when available;
    otherwise differences F^2 in eta, with wider fourth-order z-stencils to
    stay above the second-difference noise floor.
    """
    if use_exact_g and m.exact_g is not None:
        g_fn = m.exact_g
        z_step, order = 1e-5, 2
    else:
        def g_fn(z, eta, _m=m):
            return fundamental_tensor(_m, z, eta, warn_indefinite=False).g

        z_step, order = 1e-2, 4
    return lambda z, eta: spray_from_g(g_fn, m.dim, z, eta, z_step=z_step,
                                       order=order, want_theta=want_theta)


# --- geodesic integration ---------------------------------------------------

# Dormand-Prince 4(5) embedded pair
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])


@dataclasses.dataclass(frozen=True)
class GeodesicPath:
    """Uniformly resampled geodesic with per-sample velocities."""

    times: np.ndarray
    points: np.ndarray      # (m, n) complex
    velocities: np.ndarray  # (m, n) complex
    terminated_reason: str  # completed | left_domain | step_failure

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _hermite(t, ta, tb, ya, fa, yb, fb):
    dt = tb - ta
    th = (t - ta) / dt
    h00 = (1 + 2 * th) * (1 - th) ** 2
    h10 = th * (1 - th) ** 2
    h01 = th * th * (3 - 2 * th)
    h11 = th * th * (th - 1)
    return h00 * ya + h10 * dt * fa + h01 * yb + h11 * dt * fb


def integrate_geodesic(spray_fn: SprayFn, z0, eta0, t_span=(0.0, 1.0),
                       tol: float = 1e-9, domain: Callable | None = None,
                       n_samples: int = 257, max_steps: int = 100_000) -> GeodesicPath:
    """Adaptive 4(5) integration of the geodesic system.

    The complex state (z, eta) is advanced with a Dormand-Prince pair,
    keeping the embedded local error below ``tol`` (mixed absolute and
    relative); stage failures shrink the step, and a domain exit is refined
    by bisection on the step length to 1e-10 in time before truncating the
    trajectory with reason ``left_domain``.  The result is resampled on a
    uniform grid through cubic Hermite interpolation between accepted steps.
    """
    z0 = as_point(z0)
    eta0 = as_vector(eta0, z0.size)
    if not np.any(eta0):
        raise ValueError("initial velocity must be nonzero")
    n = z0.size
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    span = t1 - t0
    if domain is not None and not domain(z0):
        raise DomainError(f"initial point {z0} outside the domain")

    def rhs(y):
        z, eta = y[:n], y[n:]
        if domain is not None and not domain(z):
            raise DomainError("left domain")
        ev = spray_fn(z, eta)
        return np.concatenate([eta, ev.theta_star - 2.0 * ev.G])

    def try_step(y, f0, h):
        """One DP45 step; returns (y5, f_new, err_norm) or raises."""
        k = [f0]
        for i in range(1, 7):
            yi = y + h * sum(_DP_A[i][j] * k[j] for j in range(i))
            k.append(rhs(yi))
        y5 = y + h * sum(_DP_B5[j] * k[j] for j in range(7))
        y4 = y + h * sum(_DP_B4[j] * k[j] for j in range(7))
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale))
        return y5, k[6], err  # k7 = f(t+h, y5), FSAL

    y = np.concatenate([z0, eta0])
    f = rhs(y)
    t = t0
    nodes_t, nodes_y, nodes_f = [t], [y], [f]
    h = span / 100.0
    h_min = max(span * 1e-13, 1e-14)
    reason = "completed"
    steps = 0

    while t < t1 - 1e-14 * span:
        steps += 1
        if steps > max_steps:
            raise StepFailureError(f"exceeded {max_steps} steps")
        h = min(h, t1 - t)
        try:
            y_new, f_new, err = try_step(y, f, h)
        except (ZnavError, np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
            if h <= h_min:
                if isinstance(exc, DomainError):
                    reason = "left_domain"
                    break
                raise StepFailureError(f"step size underflow at t = {t}: {exc}") from exc
            h = max(h / 2.0, h_min)
            continue
        if err > 1.0:
            h = max(h * max(0.2, 0.9 * err ** -0.2), h_min)
            if h <= h_min:
                raise StepFailureError(f"step size underflow at t = {t}")
            continue
        exited = domain is not None and not domain(y_new[:n])
        if exited:
            # refine the exit time by bisection on the step length
            lo, hi = 0.0, h
            y_lo, f_lo = y, f
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                try:
                    y_mid, f_mid, err_mid = try_step(y, f, mid)
                    inside = err_mid <= 1.0 and (domain is None or domain(y_mid[:n]))
                except (ZnavError, np.linalg.LinAlgError, FloatingPointError, ValueError):
                    inside = False
                if inside:
                    lo, y_lo, f_lo = mid, y_mid, f_mid
                else:
                    hi = mid
            if lo > 0.0:
                t = t + lo
                nodes_t.append(t)
                nodes_y.append(y_lo)
                nodes_f.append(f_lo)
            reason = "left_domain"
            break
        t = t + h
        y, f = y_new, f_new
        nodes_t.append(t)
        nodes_y.append(y)
        nodes_f.append(f)
        h = h * min(5.0, 0.9 * (err + 1e-16) ** -0.2)

    # uniform resampling through cubic Hermite interpolation
    t_end = nodes_t[-1]
    times = np.linspace(t0, t_end, n_samples)
    ys = np.empty((n_samples, 2 * n), dtype=np.complex128)
    seg = 0
    for i, tt in enumerate(times):
        while seg < len(nodes_t) - 2 and tt > nodes_t[seg + 1]:
            seg += 1
        if len(nodes_t) == 1:
            ys[i] = nodes_y[0]
        else:
            ys[i] = _hermite(tt, nodes_t[seg], nodes_t[seg + 1],
                             nodes_y[seg], nodes_f[seg], nodes_y[seg + 1], nodes_f[seg + 1])
    return GeodesicPath(times=times, points=ys[:, :n], velocities=ys[:, n:],
                        terminated_reason=reason)


@dataclasses.dataclass(frozen=True)
class ResultantSample:
    """Velocity split v = u + W at one trajectory sample, with diagnostics."""

    t: float
    v: np.ndarray
    W: np.ndarray
    u: np.ndarray
    norm_v: float
    norm_W: float
    norm_u: float
    #: arg h(v, conj(W)); None for zero wind
    phase_vW: float | None
    #: cos of the angle between u and W; None for zero wind
    cos_angle_uW: float | None


def resultant_decomposition(s: ZermeloStructure, path: GeodesicPath) -> list[ResultantSample]:
    """Split each sampled velocity into own motion u = v - W plus wind W."""
    out = []
    for t, z, v in zip(path.times, path.points, path.velocities):
        h = s.h(z)
        w = s.wind_value(z)
        u = v - w
        norm_w = hermitian_norm(h, w)
        norm_u = hermitian_norm(h, u)
        phase = None
        cos_uw = None
        if norm_w > 0.0:
            inner_vw = hermitian_form(h, v, w)
            phase = float(np.arctan2(inner_vw.imag, inner_vw.real))
            if norm_u > 0.0:
                cos_uw = float(hermitian_form(h, u, w).real / (norm_u * norm_w))
        out.append(ResultantSample(t=float(t), v=v.copy(), W=w, u=u,
                                   norm_v=hermitian_norm(h, v), norm_W=norm_w,
                                   norm_u=norm_u, phase_vW=phase, cos_angle_uW=cos_uw))
    return out
