"""Built-in manifolds, winds and closed-form reference solutions.

The bank carries four navigation scenarios on the Hartogs triangle
D = {(z, w) : |w| < |z| < 1} in C^2, their zero-wind variants, and a
constant-wind Euclidean scenario whose solution is locally Minkowski.  The
Hartogs metrics are given by hand-expanded Hessian entries of the potential
log(1/((1 - |z|^2)(|z|^2 - |w|^2))) (optionally weighted by |z|^2) rather
than by differencing the potential numerically, which keeps one
finite-difference layer out of every downstream tolerance.

All reference geodesics lie in the real slice and belong to the family

    gamma(t) = (lam, lam (mu e^{c t} - 1) / (mu e^{c t} + 1))

with the exponent rate c pinned by each scenario's initial conditions.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from .errors import UnknownScenarioError
from .navigation import ZermeloStructure
from .wirtinger import MatrixField, ScalarField, VectorField, as_point

SQ2 = math.sqrt(2.0)

#: default fixture parameters for the closed-form geodesics
LAMBDA = 0.5
MU = 1.0

#: hard guard keeping evaluation points off the metric blow-up locus
_EDGE = 1e-6


def hartogs_domain(z) -> bool:
    z = np.asarray(z)
    return bool(abs(z[1]) < abs(z[0]) - _EDGE and abs(z[0]) < 1.0 - _EDGE)


def _phi_hessian(z) -> np.ndarray:
    """Hessian of the Hartogs potential; entries expanded by hand."""
    zz = abs(z[0]) ** 2
    ww = abs(z[1]) ** 2
    u = 1.0 - zz
    s = zz - ww
    return np.array(
        [
            [1.0 / u**2 + ww / s**2, -np.conj(z[0]) * z[1] / s**2],
            [-z[0] * np.conj(z[1]) / s**2, zz / s**2],
        ],
        dtype=np.complex128,
    )


def _weighted_hessian(z) -> np.ndarray:
    return (abs(z[0]) ** 2) * _phi_hessian(z)


def _wind_inward(z) -> np.ndarray:
    s = abs(z[0]) ** 2 - abs(z[1]) ** 2
    return np.array([0.0, -s / (2.0 * z[0])], dtype=np.complex128)


def _wind_rotated(z) -> np.ndarray:
    s = abs(z[0]) ** 2 - abs(z[1]) ** 2
    return np.array([0.0, 1j * s / (2.0 * z[0])], dtype=np.complex128)


_ZERO_WIND = lambda z: np.zeros(2, dtype=np.complex128)  # noqa: E731


@dataclasses.dataclass(frozen=True)
class ReferenceSolution:
    """Closed-form geodesic with expected lengths and classification flags."""

    curve: Callable  # t -> (point, velocity)
    acceleration: Callable  # t -> complex n-vector
    t_span: tuple = (0.0, 1.0)
    expected_lengths: dict = dataclasses.field(default_factory=dict)
    params: dict = dataclasses.field(default_factory=dict)

    def start(self):
        return self.curve(self.t_span[0])

    def sample(self, times):
        pts, vels = [], []
        for t in times:
            p, v = self.curve(t)
            pts.append(p)
            vels.append(v)
        return np.array(pts), np.array(vels)


@dataclasses.dataclass(frozen=True)
class Scenario:
    """A navigation structure with sampling metadata and reference data."""

    name: str
    structure: ZermeloStructure
    #: per-real-coordinate (lo, hi) bounds for deterministic sampling,
    #: ordered (Re z1, Im z1, Re z2, Im z2, ...)
    sample_box: tuple
    reference: ReferenceSolution | None = None
    reference_alt: ReferenceSolution | None = None
    expected_flags: dict = dataclasses.field(default_factory=dict)
    extras: dict = dataclasses.field(default_factory=dict)
    description: str = ""


def _tanh_reference(lam: float, mu: float, c: float, lengths: dict, params=None) -> ReferenceSolution:
    def curve(t):
        e = mu * math.exp(c * t)
        point = np.array([lam, lam * (e - 1.0) / (e + 1.0)], dtype=np.complex128)
        vel = np.array([0.0, 2.0 * lam * c * e / (e + 1.0) ** 2], dtype=np.complex128)
        return point, vel

    def acceleration(t):
        e = mu * math.exp(c * t)
        return np.array([0.0, 2.0 * lam * c * c * e * (1.0 - e) / (e + 1.0) ** 3],
                        dtype=np.complex128)

    return ReferenceSolution(curve=curve, acceleration=acceleration,
                             expected_lengths=dict(lengths),
                             params={"lam": lam, "mu": mu, "c": c, **(params or {})})


_HARTOGS_BOX = ((0.35, 0.85), (-0.30, 0.30), (-0.40, 0.40), (-0.40, 0.40))


def _hartogs_structure(weighted: bool, wind_fn, speed_fn, cos_phi: float,
                       wind_is_zero: bool = False) -> ZermeloStructure:
    h_fn = _weighted_hessian if weighted else _phi_hessian
    return ZermeloStructure(
        h=MatrixField(fn=h_fn, dim=2, domain=hartogs_domain),
        speed=ScalarField(fn=speed_fn, dim=2, domain=hartogs_domain),
        wind=VectorField(fn=wind_fn, dim=2, domain=hartogs_domain),
        cos_phi=cos_phi,
        wind_is_zero=wind_is_zero,
    )


def _speed_weighted(z):
    return abs(z[0]) / SQ2


def _speed_const(z):
    return 1.0 / SQ2


_EUCLID_WIND = np.array([0.25 + 0.10j, -0.15 + 0.20j], dtype=np.complex128)
_EUCLID_SPEED = 0.8
_EUCLID_START = np.array([0.10 + 0.05j, -0.20 + 0.10j], dtype=np.complex128)
_EUCLID_DIR = np.array([0.60 + 0.20j, 0.35 - 0.15j], dtype=np.complex128)


def _euclid_reference() -> ReferenceSolution:
    # scale the fixture direction so the solution metric is 1 at the start;
    # along a straight line in constant fields every sampled value repeats
    from .navigation import solve_forward

    structure = _euclid_structure()
    eta0 = _EUCLID_DIR / solve_forward(structure, _EUCLID_START, _EUCLID_DIR)
    norm_h = math.sqrt(float(np.vdot(eta0, eta0).real))

    def curve(t):
        return _EUCLID_START + t * eta0, eta0.copy()

    def acceleration(t):
        return np.zeros(2, dtype=np.complex128)

    return ReferenceSolution(curve=curve, acceleration=acceleration,
                             expected_lengths={"F": 1.0, "h": norm_h},
                             params={"start": _EUCLID_START, "eta0": eta0})


def _euclid_structure() -> ZermeloStructure:
    return ZermeloStructure(
        h=MatrixField(fn=lambda z: np.eye(2, dtype=np.complex128), dim=2,
                      domain=lambda z: bool(np.max(np.abs(z)) < 2.0)),
        speed=ScalarField(fn=lambda z: _EUCLID_SPEED, dim=2),
        wind=VectorField(fn=lambda z: _EUCLID_WIND.copy(), dim=2),
        cos_phi=-1.0,
    )


def _build_bank() -> dict:
    bank = {}

    c1 = SQ2 - 1.0
    bank["hartogs_ex1"] = Scenario(
        name="hartogs_ex1",
        structure=_hartogs_structure(True, _wind_inward, _speed_weighted, -1.0),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, c1, {
            "F": 1.0, "a": 2.0 - SQ2, "h": (SQ2 - 1.0) * LAMBDA / 2.0,
        }),
        expected_flags={
            "kahler_a": True, "kahler_h": False, "generalized_berwald": True,
            "douglas": True, "complex_berwald": True, "projectively_flat": False,
            "projectively_related_a_F": True, "projectively_related_h_F": False,
        },
        extras={"norm_b_sq": 0.5,
                "eps_tilde": lambda z: abs(z[0]) ** 2 / 4.0,
                "wind_norm_sq": lambda z: abs(z[0]) ** 2 / 4.0,
                "constant_speed_norm_v": (SQ2 - 1.0) * LAMBDA / 2.0},
        description="weighted Hartogs metric, inward wind, Randers solution",
    )

    bank["hartogs_ex2"] = Scenario(
        name="hartogs_ex2",
        structure=_hartogs_structure(True, _wind_rotated, _speed_weighted, 0.0),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, 1.0, {"F": 1.0, "h": LAMBDA / 2.0}),
        expected_flags={
            "kahler": True, "generalized_berwald": True, "douglas": True,
            "complex_berwald": True, "projectively_flat": False,
            "projectively_related_h_F": False, "homothetic": False,
        },
        extras={"conformal_factor": lambda z: 2.0 / abs(z[0]),
                "cos_angle_uW": -SQ2 / 2.0,
                "eps_tilde": lambda z: abs(z[0]) ** 2 / 4.0},
        description="weighted Hartogs metric, rotated wind, conformal solution",
    )

    bank["hartogs_ex3"] = Scenario(
        name="hartogs_ex3",
        structure=_hartogs_structure(False, _wind_inward, _speed_const, -1.0),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, c1, {
            "F": 1.0, "a": 2.0 - SQ2, "h": (SQ2 - 1.0) / 2.0,
        }),
        expected_flags={
            "kahler_a": True, "kahler_h": True, "generalized_berwald": True,
            "douglas": True, "complex_berwald": True, "projectively_flat": False,
            "projectively_related_a_F": True, "projectively_related_h_F": True,
        },
        extras={"norm_b_sq": 0.5, "eps_tilde_const": 0.25},
        description="unweighted Hartogs metric, inward wind; h, a, F share geodesics",
    )

    bank["hartogs_ex4"] = Scenario(
        name="hartogs_ex4",
        structure=_hartogs_structure(False, _wind_rotated, _speed_const, 0.0),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, 1.0, {"F": 1.0, "h": 0.5}),
        expected_flags={
            "kahler": True, "generalized_berwald": True, "douglas": True,
            "complex_berwald": True, "projectively_flat": False,
            "projectively_related_h_F": True, "homothetic": True,
        },
        extras={"conformal_factor": 2.0, "g_equals_h_times": 4.0,
                "curvature_ratio_vs_h": 0.25, "eps_tilde_const": 0.25},
        description="unweighted Hartogs metric, rotated wind; F = 2h homothetic",
    )

    nowind_weighted = Scenario(
        name="hartogs_ex1_nowind",
        structure=_hartogs_structure(True, _ZERO_WIND, _speed_weighted, -1.0,
                                     wind_is_zero=True),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, SQ2, {"F": 1.0, "h": LAMBDA * SQ2 / 2.0}),
        reference_alt=_tanh_reference(LAMBDA, MU, -SQ2, {"F": 1.0, "h": LAMBDA * SQ2 / 2.0}),
        expected_flags={"kahler": True, "homothetic": False,
                        "projectively_related_h_F": False},
        extras={"conformal_factor": lambda z: SQ2 / abs(z[0])},
        description="weighted Hartogs metric without wind; conformal solution",
    )
    bank["hartogs_ex1_nowind"] = nowind_weighted
    bank["hartogs_ex2_nowind"] = dataclasses.replace(nowind_weighted, name="hartogs_ex2_nowind")

    nowind_const = Scenario(
        name="hartogs_ex3_nowind",
        structure=_hartogs_structure(False, _ZERO_WIND, _speed_const, -1.0,
                                     wind_is_zero=True),
        sample_box=_HARTOGS_BOX,
        reference=_tanh_reference(LAMBDA, MU, SQ2, {"F": 1.0, "h": SQ2 / 2.0}),
        reference_alt=_tanh_reference(LAMBDA, MU, -SQ2, {"F": 1.0, "h": SQ2 / 2.0}),
        expected_flags={"kahler": True, "homothetic": True,
                        "projectively_related_h_F": True},
        extras={"conformal_factor": SQ2},
        description="unweighted Hartogs metric without wind; homothetic solution",
    )
    bank["hartogs_ex3_nowind"] = nowind_const
    bank["hartogs_ex4_nowind"] = dataclasses.replace(nowind_const, name="hartogs_ex4_nowind")

    bank["euclidean_const_wind"] = Scenario(
        name="euclidean_const_wind",
        structure=_euclid_structure(),
        sample_box=((-1.2, 1.2),) * 4,
        reference=_euclid_reference(),
        expected_flags={
            "kahler_a": True, "kahler_h": True, "generalized_berwald": True,
            "douglas": True, "complex_berwald": True, "projectively_flat": True,
            "projectively_related_a_F": True, "projectively_related_h_F": True,
        },
        extras={"locally_minkowski": True, "curvature_zero": True,
                "eps_tilde_const": _EUCLID_SPEED**2 - float(np.vdot(_EUCLID_WIND, _EUCLID_WIND).real),
                "wind_components": _EUCLID_WIND},
        description="Euclidean metric, constant wind; locally Minkowski solution",
    )
    return bank


_BANK = None


def scenario_names() -> list[str]:
    global _BANK
    if _BANK is None:
        _BANK = _build_bank()
    return sorted(_BANK)


def builtin(name: str) -> Scenario:
    """Fetch a built-in scenario by name; raises UnknownScenarioError."""
    global _BANK
    if _BANK is None:
        _BANK = _build_bank()
    try:
        return _BANK[name]
    except KeyError:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(_BANK))}") from None
