"""Deterministic low-discrepancy sample plans over scenario domains.

Classification reports must be reproducible, so evaluation points come from
a Halton sequence mapped into a per-scenario box, rejecting points outside
the declared domain or closer than a margin to its boundary (probed by
axis-aligned perturbations, since domains are black-box predicates).  The
seed offsets the sequence start, keeping plans deterministic per seed.
"""

from __future__ import annotations

import numpy as np

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _radical_inverse(index: int, base: int) -> float:
    inv = 0.0
    f = 1.0 / base
    while index > 0:
        inv += f * (index % base)
        index //= base
        f /= base
    return inv


def halton_point(index: int, dim: int) -> np.ndarray:
    if dim > len(_PRIMES):
        raise ValueError(f"halton sampler supports up to {len(_PRIMES)} dimensions")
    return np.array([_radical_inverse(index, _PRIMES[k]) for k in range(dim)])


def sample_points(box, domain=None, count: int = 64, seed: int = 0,
                  margin: float = 1e-3, max_tries: int = 200_000) -> list[np.ndarray]:
    """Deterministic points inside the domain, at least ``margin`` from its edge.

    ``box`` is a sequence of (lo, hi) bounds over the flattened real
    coordinates (Re z1, Im z1, Re z2, Im z2, ...).
    """
    box = np.asarray(box, dtype=float)
    rdim = box.shape[0]
    n = rdim // 2
    lo, hi = box[:, 0], box[:, 1]
    out = []
    index = 1 + 7919 * int(seed)
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("sampler failed to find enough interior points")
        x = lo + (hi - lo) * halton_point(index, rdim)
        index += 1
        z = x[0::2] + 1j * x[1::2]
        if domain is not None:
            if not domain(z):
                continue
            clear = True
            for k in range(n):
                for delta in (margin, -margin, 1j * margin, -1j * margin):
                    probe = z.copy()
                    probe[k] += delta
                    if not domain(probe):
                        clear = False
                        break
                if not clear:
                    break
            if not clear:
                continue
        out.append(z)
    return out


def sample_directions(count: int, dim: int, seed: int = 0,
                      reject=None, max_tries: int = 200_000) -> list[np.ndarray]:
    """Deterministic complex directions with components in the unit box.

    ``reject`` may veto directions (e.g. too close to a formula's singular
    locus); vetoed entries are replaced by later sequence members.
    """
    out = []
    index = 11 + 104729 * int(seed)
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("direction sampler exhausted its tries")
        x = 2.0 * halton_point(index, 2 * dim) - 1.0
        index += 1
        eta = x[0::2] + 1j * x[1::2]
        if float(np.max(np.abs(eta))) < 0.1:
            continue
        if reject is not None and reject(eta):
            continue
        out.append(eta)
    return out


def sample_plan(box, domain=None, n_points: int = 8, n_dirs: int = 8,
                seed: int = 0, margin: float = 1e-3, reject_dir=None) -> list[tuple]:
    """Cartesian plan of (point, direction) pairs; directions vary per point."""
    points = sample_points(box, domain=domain, count=n_points, seed=seed, margin=margin)
    plan = []
    for i, z in enumerate(points):
        dirs = sample_directions(n_dirs, len(z), seed=seed + 31 * (i + 1),
                                 reject=(lambda e, _z=z: reject_dir(_z, e)) if reject_dir else None)
        plan.extend((z, eta) for eta in dirs)
    return plan
