"""Points, configurations, and geodesic geometry of the unit-volume flat torus.

The torus is R^r / Z^r with the Euclidean metric.  Points are stored as
canonical representatives with every coordinate in [0, 1); all arithmetic
re-wraps so optimization steps cannot drift out of the fundamental domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def wrap(v) -> np.ndarray:
    """Reduce coordinates mod 1 into [0, 1) componentwise.

    Idempotent.  Rejects non-finite input.
    """
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("wrap: non-finite coordinate")
    out = v - np.floor(v)
    # v - floor(v) can round up to exactly 1.0 for tiny negative v
    return np.where(out >= 1.0, out - 1.0, out)


@dataclass(frozen=True)
class Configuration:
    """An ordered (labeled) set of N points on T^r, coordinates in [0,1)^r.

    Order matters for gradients and traces; the energy itself is
    permutation-invariant, which the tests assert rather than the
    representation enforcing it.
    """

    coords: np.ndarray  # shape (N, r), float64, every entry in [0, 1)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("Configuration needs an (N, r) array with N, r >= 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("Configuration: non-finite coordinate")
        if np.any(c < 0.0) or np.any(c >= 1.0):
            raise ValueError("Configuration: coordinates must lie in [0, 1)")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def r(self) -> int:
        return self.coords.shape[1]

    def translated(self, shift) -> "Configuration":
        """Common translation x_j -> x_j + shift (mod 1)."""
        return Configuration(wrap(self.coords + np.asarray(shift, float)))

    def permuted(self, perm) -> "Configuration":
        return Configuration(self.coords[np.asarray(perm, int)])


def geodesic_displacement(x, y) -> np.ndarray:
    """Shortest-representative displacement from x to y on the torus.

    Returns the representative of y - x (mod 1) with every component in
    (-1/2, 1/2]; the antipodal tie at distance 1/2 resolves to +1/2, which
    makes the operation total (the pair energy only sees cos(2 pi n t) and
    is unaffected by the choice).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    d = y - x
    return d - np.ceil(d - 0.5)


def distance(x, y) -> float:
    """Length of the shorter geodesic between x and y; at most sqrt(r)/2."""
    return float(np.linalg.norm(geodesic_displacement(x, y)))


def equispaced(n: int) -> Configuration:
    """The configuration j/N (j = 0..N-1) on the 1-torus (Nth roots of unity)."""
    if n < 1:
        raise ValueError("equispaced: N must be >= 1")
    return Configuration(np.arange(n, dtype=float).reshape(-1, 1) / n)


def random_configuration(n: int, r: int, seed: int) -> Configuration:
    """N points i.i.d. uniform on [0,1)^r from a seeded PCG64 generator."""
    if n < 1 or r < 1:
        raise ValueError("random_configuration: N and r must be >= 1")
    rng = np.random.default_rng(seed)
    return Configuration(rng.random((n, r)))
