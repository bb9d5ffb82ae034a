"""Shared builders for randomized structures and Randers data.

The generators keep coefficients gentle so mild wind and strong
pseudoconvexity hold over the sampling box [-0.7, 0.7]^4 with margin; every
consumer still validates lazily at evaluated points.
"""

import math

import numpy as np
import pytest

from znav.navigation import RandersData, ZermeloStructure
from znav.wirtinger import MatrixField, ScalarField, VectorField, hermitian_form, hermitian_norm


def random_points(rng, count, dim=2, radius=0.7):
    return [radius * (rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim))
            for _ in range(count)]


def affine_vector(rng, scale, dim=2):
    v0 = scale * (rng.normal(size=dim) + 1j * rng.normal(size=dim))
    v1 = 0.5 * scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return lambda z: v0 + v1 @ np.asarray(z)


def random_hermitian_field(rng, dim=2, bump=0.3):
    vec = affine_vector(rng, 1.0, dim)

    def fn(z):
        v = vec(z)
        return np.eye(dim) + bump * np.outer(v, np.conj(v))

    return MatrixField(fn=fn, dim=dim)


def random_structure(seed, cos_phi=-1.0, dim=2):
    rng = np.random.default_rng(seed)
    h = random_hermitian_field(rng, dim)
    wind_fn = affine_vector(rng, 0.12, dim)
    f0 = rng.uniform(0.75, 0.95)

    def speed_fn(z):
        return f0 * (1.0 + 0.1 * abs(z[0]) ** 2 / (1.0 + abs(z[0]) ** 2))

    return ZermeloStructure(
        h=h,
        speed=ScalarField(fn=speed_fn, dim=dim),
        wind=VectorField(fn=wind_fn, dim=dim),
        cos_phi=cos_phi,
    )


def random_randers(seed, dim=2, b_scale=0.35, antiholo=0.0):
    """Random pseudoconvex data; ``antiholo`` adds conj(z)-dependence to b."""
    rng = np.random.default_rng(seed)
    a = random_hermitian_field(rng, dim)
    b0 = b_scale * (rng.normal(size=dim) + 1j * rng.normal(size=dim))
    b0 *= (b_scale * (1 + rng.uniform())) / np.max(np.abs(b0))
    b1 = 0.15 * b_scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    b2 = antiholo * b_scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    f0 = rng.uniform(0.7, 0.95)
    return RandersData(
        a=a,
        b=VectorField(fn=lambda z: b0 + b1 @ np.asarray(z) + b2 @ np.conj(np.asarray(z)), dim=dim),
        f=ScalarField(fn=lambda z: f0, dim=dim),
    )


def unit_resultant_direction(s, z, sin_sign=1.0):
    """A velocity v = u + W with ||u||_h = f and arg h(v, Wbar) = phi."""
    h = s.h(z)
    w = s.wind(z)
    f = s.speed_value(z)
    nw = hermitian_norm(h, w)
    assert nw > 0
    cos_phi = s.cos_phi
    sin_phi = sin_sign * math.sqrt(max(0.0, 1.0 - cos_phi * cos_phi))
    radial = nw * nw * cos_phi + math.sqrt(nw**4 * cos_phi**2 + nw * nw * (f * f - nw * nw))
    phase = (radial * complex(cos_phi, sin_phi) - nw * nw) / (f * nw)
    u = f * phase * w / nw
    return u + w, u


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
