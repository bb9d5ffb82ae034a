import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from znav.errors import DomainError, NegativeFormError, SingularError, StepError
from znav.wirtinger import (
    MatrixField,
    ScalarField,
    as_point,
    hermitian_form,
    hermitian_inverse,
    hermitian_norm,
    hermitian_part,
    wirtinger_d,
)


def scalar(fn, dim=2, domain=None):
    kwargs = {"domain": domain} if domain is not None else {}
    return ScalarField(fn=fn, dim=dim, **kwargs)


def hartogs_potential(z):
    # log(1 / ((1 - |z1|^2)(|z1|^2 - |z2|^2))), defined for |z2| < |z1| < 1
    u = 1.0 - abs(z[0]) ** 2
    s = abs(z[0]) ** 2 - abs(z[1]) ** 2
    return -np.log(u * s)


class TestWirtingerDerivative:
    def test_holomorphic_coordinate(self):
        f = scalar(lambda z: z[0])
        d = wirtinger_d(f, [0.3 + 0.1j, 0.0], k=0)
        assert d == pytest.approx(1.0, abs=1e-10)
        dbar = wirtinger_d(f, [0.3 + 0.1j, 0.0], k=0, conjugate=True)
        assert abs(dbar) < 1e-10

    def test_product_rule_on_modulus_squared(self):
        f = scalar(lambda z: abs(z[0]) ** 2)
        d = wirtinger_d(f, [0.5, 0.0], k=0)
        assert d == pytest.approx(0.5, abs=1e-10)

    def test_hartogs_potential_matches_hand_derivative(self):
        # d/dz of -log(1-z zbar) - log(z zbar - w wbar) is zbar/u - zbar/s;
        # at (0.5, 0.2): 0.5 * (1/0.75 - 1/0.21) = -12/7 (worked out by hand)
        f = scalar(hartogs_potential)
        d = wirtinger_d(f, [0.5, 0.2], k=0)
        assert d == pytest.approx(-12.0 / 7.0, rel=1e-8)

    def test_polynomial_field_against_symbolic(self):
        # p(z, zbar) = z1^2 zbar2 + 3 zbar1 + z2 has dp/dz1 = 2 z1 zbar2,
        # dp/dzbar1 = 3, dp/dz2 = 1, dp/dzbar2 = z1^2
        f = scalar(lambda z: z[0] ** 2 * np.conj(z[1]) + 3 * np.conj(z[0]) + z[1])
        rng = np.random.default_rng(7)
        for _ in range(20):
            z = as_point(rng.normal(size=2) + 1j * rng.normal(size=2))
            assert wirtinger_d(f, z, 0) == pytest.approx(2 * z[0] * np.conj(z[1]), rel=1e-6, abs=1e-8)
            assert wirtinger_d(f, z, 0, conjugate=True) == pytest.approx(3.0, rel=1e-6)
            assert wirtinger_d(f, z, 1) == pytest.approx(1.0, rel=1e-6)
            assert wirtinger_d(f, z, 1, conjugate=True) == pytest.approx(z[0] ** 2, rel=1e-6, abs=1e-8)

    def test_real_field_conjugate_symmetry(self):
        f = scalar(lambda z: (abs(z[0]) ** 2 + 0.3 * (z[1] + np.conj(z[1]))).real)
        z = as_point([0.4 + 0.2j, -0.1 + 0.5j])
        d = wirtinger_d(f, z, 0)
        dbar = wirtinger_d(f, z, 0, conjugate=True)
        assert dbar == pytest.approx(np.conj(d), abs=1e-10)

    def test_fourth_order_stencil_is_tighter(self):
        f = scalar(lambda z: np.exp(3 * z[0]) * np.conj(z[0]))
        z = as_point([0.7 + 0.3j, 0.0])
        exact = 3 * np.exp(3 * z[0]) * np.conj(z[0])
        err2 = abs(wirtinger_d(f, z, 0, order=2, step=1e-3) - exact)
        err4 = abs(wirtinger_d(f, z, 0, order=4, step=1e-3) - exact)
        assert err4 < err2 / 10

    def test_domain_error_when_stencil_exits(self):
        f = scalar(hartogs_potential, domain=lambda z: abs(z[1]) < abs(z[0]) < 1.0)
        with pytest.raises(DomainError):
            wirtinger_d(f, [0.999999, 0.2], k=0)

    def test_step_underflow(self):
        f = scalar(lambda z: z[0])
        with pytest.raises(StepError):
            wirtinger_d(f, [1.0, 0.0], k=0, step=1e-300)


class TestHermitianInverse:
    def test_identity(self):
        assert np.allclose(hermitian_inverse(np.eye(2)), np.eye(2))

    def test_diagonal(self):
        inv = hermitian_inverse(np.diag([2.0, 4.0]))
        assert np.allclose(inv, np.diag([0.5, 0.25]))

    def test_hartogs_new_metric_inverse_matches_closed_form(self):
        # inverse of the Hartogs-triangle Randers intermediate metric at
        # (0.5, 0.2) against eps * (h^{-1} - W W^dag / ||u||^2), both sides
        # evaluated independently from the hand-expanded entries
        z, w = 0.5, 0.2
        u = 1 - abs(z) ** 2
        s = abs(z) ** 2 - abs(w) ** 2
        zz = abs(z) ** 2
        h = zz * np.array(
            [
                [1 / u**2 + abs(w) ** 2 / s**2, -np.conj(z) * w / s**2],
                [-z * np.conj(w) / s**2, zz / s**2],
            ],
            dtype=complex,
        )
        a = np.array(
            [
                [8 * (1 / (2 * u**2) + abs(w) ** 2 / s**2), -8 * w * np.conj(z) / s**2],
                [-8 * z * np.conj(w) / s**2, 8 * zz / s**2],
            ],
            dtype=complex,
        )
        eps = zz / 4
        f2 = zz / 2
        wind = np.array([0.0, -s / (2 * z)], dtype=complex)
        # cos(phi) = -1: a^{-1} = eps*(h^{-1} - W W^dag / ||u||^2) in index
        # convention a^{jbar i} = inv[j, i], i.e. inv[j, i] -= W^i conj(W^j) ...
        hinv = hermitian_inverse(h)
        expected = eps * (hinv - (1.0 / f2) * np.outer(np.conj(wind), wind))
        assert np.allclose(hermitian_inverse(a), expected, rtol=1e-9, atol=1e-12)

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=40, deadline=None)
    def test_involution_on_random_pd(self, n, seed):
        rng = np.random.default_rng(seed)
        b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = b @ b.conj().T + 0.5 * np.eye(n)
        again = hermitian_inverse(hermitian_inverse(m))
        assert np.allclose(again, hermitian_part(m), rtol=1e-8)

    def test_singular_raises(self):
        with pytest.raises(SingularError):
            hermitian_inverse(np.diag([1.0, 1e-15]))
        with pytest.raises(SingularError):
            hermitian_inverse(np.diag([1.0, -1.0]))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            hermitian_inverse(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestHermitianNorm:
    def test_euclidean(self):
        assert hermitian_norm(np.eye(2), [3.0, 4.0]) == pytest.approx(5.0)

    def test_diagonal(self):
        assert hermitian_norm(np.diag([4.0, 1.0]), [1.0, 0.0]) == pytest.approx(2.0)

    def test_hartogs_weighted_metric_unit_direction(self):
        # sqrt(h_22bar) at (0.5, 0.2) for the |z|^2-weighted Hartogs metric is
        # |z|^2 / (|z|^2 - |w|^2) = 0.25 / 0.21 = 25/21 (worked out by hand)
        z, w = 0.5, 0.2
        s = abs(z) ** 2 - abs(w) ** 2
        h22 = abs(z) ** 4 / s**2
        h = np.diag([1.0, h22])  # off-diagonals irrelevant for v = (0, 1)
        assert hermitian_norm(h, [0.0, 1.0]) == pytest.approx(25.0 / 21.0, rel=1e-12)

    @given(
        st.complex_numbers(min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False),
        st.integers(min_value=0, max_value=10**6),
    )
    @settings(max_examples=50, deadline=None)
    def test_absolute_homogeneity(self, lam, seed):
        rng = np.random.default_rng(seed)
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = b @ b.conj().T + np.eye(3)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert hermitian_norm(m, lam * v) == pytest.approx(abs(lam) * hermitian_norm(m, v), rel=1e-10)

    def test_negative_form_raises(self):
        with pytest.raises(NegativeFormError):
            hermitian_norm(np.diag([1.0, -1.0]), [0.0, 1.0])

    def test_form_value(self):
        m = np.array([[2.0, 1j], [-1j, 3.0]])
        v = np.array([1.0, 1j])
        w = np.array([0.0, 1.0])
        # sum m[i,j] v^i conj(w^j) = m[0,1] v^0 + m[1,1] v^1
        assert hermitian_form(m, v, w) == pytest.approx(1j + 3j)


class TestMatrixField:
    def test_values_are_symmetrized(self):
        field = MatrixField(fn=lambda z: np.array([[1.0, 0.1 + 1e-14j], [0.1, 1.0]]), dim=2)
        m = field(as_point([0.0, 0.0]))
        assert np.allclose(m, m.conj().T)
