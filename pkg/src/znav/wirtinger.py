"""Complex linear algebra and numerical Wirtinger differentiation.

Scalar-, vector- and matrix-valued fields over a chart of C^n are carried as
callables wrapped with their dimension and a domain predicate.  Derivatives
are taken with central differences on the underlying real coordinates
x^k, y^k of z^k = x^k + i y^k and combined into the Wirtinger operators

    d/dz^k    = (d/dx^k - i d/dy^k) / 2
    d/dzbar^k = (d/dx^k + i d/dy^k) / 2

which is exact calculus for holomorphic/antiholomorphic parts and needs no
symbolic machinery.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from .errors import DomainError, NegativeFormError, SingularError, StepError

#: default relative step for first Wirtinger derivatives of analytic fields
FIRST_DERIVATIVE_STEP = 1e-5
#: default outer step for nested (second-level) derivatives
NESTED_DERIVATIVE_STEP = 1e-4


def as_point(values, dim: int | None = None) -> np.ndarray:
    """Coerce to a 1-D complex128 coordinate vector, checking finiteness."""
    z = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if z.ndim != 1 or z.size < 1:
        raise ValueError("a point must be a nonempty 1-D complex vector")
    if dim is not None and z.size != dim:
        raise ValueError(f"expected dimension {dim}, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise ValueError("coordinates must be finite")
    return z


def as_vector(values, dim: int | None = None) -> np.ndarray:
    """Coerce to a 1-D complex128 tangent/covector component array."""
    return as_point(values, dim)


def _always_inside(z) -> bool:
    return True


@dataclasses.dataclass(frozen=True)
class ScalarField:
    """Deterministic scalar field z -> f(z) on an open domain of C^n."""

    fn: Callable
    dim: int
    domain: Callable = _always_inside

    def __call__(self, z) -> complex:
        return complex(self.fn(z))

    def in_domain(self, z) -> bool:
        return bool(self.domain(z))


@dataclasses.dataclass(frozen=True)
class VectorField:
    """Deterministic field of complex n-vectors (tangent or covector components)."""

    fn: Callable
    dim: int
    domain: Callable = _always_inside

    def __call__(self, z) -> np.ndarray:
        v = np.asarray(self.fn(z), dtype=np.complex128)
        if v.shape != (self.dim,):
            raise ValueError(f"vector field returned shape {v.shape}, expected ({self.dim},)")
        return v

    def in_domain(self, z) -> bool:
        return bool(self.domain(z))


@dataclasses.dataclass(frozen=True)
class MatrixField:
    """Field of n x n conjugate-symmetric matrices (metric values).

    Values are re-symmetrized as (m + m^dagger)/2 on evaluation so that
    downstream consumers never see finite-difference asymmetry drift.
    """

    fn: Callable
    dim: int
    domain: Callable = _always_inside
    hermitianize: bool = True

    def __call__(self, z) -> np.ndarray:
        m = np.asarray(self.fn(z), dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"matrix field returned shape {m.shape}, expected square of dim {self.dim}")
        if self.hermitianize:
            m = 0.5 * (m + m.conj().T)
        return m

    def in_domain(self, z) -> bool:
        return bool(self.domain(z))


def constant_matrix_field(m, domain: Callable = _always_inside) -> MatrixField:
    m = hermitian_part(np.asarray(m, dtype=np.complex128))
    return MatrixField(fn=lambda z, _m=m: _m, dim=m.shape[0], domain=domain)


def constant_vector_field(v, dim: int | None = None, domain: Callable = _always_inside) -> VectorField:
    v = as_vector(v, dim)
    return VectorField(fn=lambda z, _v=v: _v, dim=v.size, domain=domain)


def constant_scalar_field(value, dim: int, domain: Callable = _always_inside) -> ScalarField:
    return ScalarField(fn=lambda z, _v=complex(value): _v, dim=dim, domain=domain)


def _field_value(field, z) -> np.ndarray:
    if hasattr(field, "in_domain") and not field.in_domain(z):
        raise DomainError(f"stencil point {z} left the field domain")
    return np.asarray(field(z), dtype=np.complex128)


def wirtinger_d(field, z, k: int, conjugate: bool = False, order: int = 2,
                step: float | None = None) -> complex | np.ndarray:
    """Wirtinger derivative of a field with respect to z^k (or zbar^k).

    Parameters
    ----------
    field : ScalarField, VectorField, MatrixField or bare callable
        Evaluated at points near ``z``; must be defined on the whole stencil.
    z : array_like
        Base point in C^n.
    k : int
        Coordinate index, 0-based.
    conjugate : bool
        If True return d/dzbar^k instead of d/dz^k.
    order : {2, 4}
        Central-difference order.  The 4th-order stencil costs twice as many
        evaluations and is used where first-derivative noise must stay below
        the truncation floor of a subsequent differentiation.
    step : float, optional
        Absolute step; default is ``1e-5 * max(1, |z^k|)``.

    Returns
    -------
    complex scalar for scalar fields, ndarray matching the field shape
    otherwise.
    """
    z = as_point(z)
    if not 0 <= k < z.size:
        raise ValueError(f"coordinate index {k} out of range for dimension {z.size}")
    s = FIRST_DERIVATIVE_STEP * max(1.0, abs(z[k])) if step is None else float(step)
    if s <= 0 or abs(z[k]) + s == abs(z[k]) or 1.0 + s == 1.0:
        raise StepError(f"finite-difference step {s} underflows at |z^k| = {abs(z[k])}")

    def shifted(dx: float, dy: float) -> np.ndarray:
        zz = z.copy()
        zz[k] = zz[k] + complex(dx, dy)
        return _field_value(field, zz)

    if order == 2:
        dfx = (shifted(+s, 0) - shifted(-s, 0)) / (2 * s)
        dfy = (shifted(0, +s) - shifted(0, -s)) / (2 * s)
    elif order == 4:
        dfx = (8 * (shifted(+s, 0) - shifted(-s, 0)) - (shifted(+2 * s, 0) - shifted(-2 * s, 0))) / (12 * s)
        dfy = (8 * (shifted(0, +s) - shifted(0, -s)) - (shifted(0, +2 * s) - shifted(0, -2 * s))) / (12 * s)
    else:
        raise ValueError("order must be 2 or 4")

    d = 0.5 * (dfx + 1j * dfy) if conjugate else 0.5 * (dfx - 1j * dfy)
    return complex(d) if d.shape == () else d


def matrix_z_derivatives(field: MatrixField, z, conjugate: bool = False,
                         order: int = 2, step: float | None = None) -> np.ndarray:
    """Stack of d(field)/dz^j (or dzbar^j) for all j; shape (n, dim, dim)."""
    z = as_point(z)
    return np.stack([wirtinger_d(field, z, j, conjugate=conjugate, order=order, step=step)
                     for j in range(z.size)])


def hermitian_part(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    return 0.5 * (m + m.conj().T)


def check_hermitian(m, tol: float = 1e-12) -> np.ndarray:
    """Validate conjugate symmetry within ``tol`` (relative) and symmetrize."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(m))))
    if float(np.max(np.abs(m - m.conj().T))) > tol * scale:
        raise ValueError("matrix is not conjugate-symmetric within tolerance")
    return hermitian_part(m)


def _hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0].real])
    if n == 2:
        tr = (m[0, 0] + m[1, 1]).real
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
        disc = np.sqrt(max(tr * tr - 4.0 * det, 0.0))
        return np.array([(tr - disc) / 2.0, (tr + disc) / 2.0])
    return np.linalg.eigvalsh(m)


def hermitian_inverse(m, sym_tol: float = 1e-12) -> np.ndarray:
    """Inverse of a positive-definite conjugate-symmetric matrix.

    Uses the closed form for n <= 2 (bit-stable on the 2 x 2 metrics that
    dominate this package) and a Cholesky factorization otherwise; the result
    is re-symmetrized.  Raises SingularError when the smallest eigenvalue
    drops below 1e-12 of the largest.
    """
    m = check_hermitian(m, tol=sym_tol)
    n = m.shape[0]
    eigs = _hermitian_eigenvalues(m)
    lmax = float(eigs.max())
    if lmax <= 0 or float(eigs.min()) < 1e-12 * lmax:
        raise SingularError(f"matrix is singular or not positive definite (eigenvalues {eigs})")
    if n == 1:
        inv = np.array([[1.0 / m[0, 0]]])
    elif n == 2:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
    else:
        try:
            low = np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise SingularError("Cholesky factorization failed") from exc
        low_inv = np.linalg.solve(low, np.eye(n, dtype=np.complex128))
        inv = low_inv.conj().T @ low_inv
    return hermitian_part(inv)


def hermitian_form(m, v, w) -> complex:
    """Sesquilinear form sum_{ij} m[i,j] v^i conj(w^j)."""
    m = np.asarray(m, dtype=np.complex128)
    v = as_vector(v, m.shape[0])
    w = as_vector(w, m.shape[0])
    return complex(np.dot(v, m @ np.conj(w)))


def hermitian_norm(m, v) -> float:
    """Norm sqrt(sum m[i,j] v^i conj(v^j)) of a vector in a Hermitian metric.

    Raises NegativeFormError when the quadratic form evaluates below -1e-12,
    which signals a matrix that is not positive definite.
    """
    q = hermitian_form(m, v, v).real
    if q < -1e-12:
        raise NegativeFormError(f"quadratic form evaluated to {q} < 0")
    return float(np.sqrt(max(q, 0.0)))
