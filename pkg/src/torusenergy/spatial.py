"""The geometric side: image sums over lattice translates and signed forces.

Interaction propagates along every geodesic between two points, i.e. over
all integer translates of the source.  Truncating translates at |gamma| <= G
leaves a tail controlled by each family's certified spatial envelope.  The
Poisson bridge ties this side to the spectral one:

    sum over ordered pairs (j, m) of sum_gamma k(x_j - x_m + gamma)
        = N^2 khat(0) + [spectral energy with M -> inf],

which the tests exercise for every family with a spatial envelope.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import UnsupportedOperationError
from .geometry import Configuration
from .potentials import Potential


def _require_1d(config: Configuration) -> np.ndarray:
    if config.r != 1:
        raise ValueError(f"spatial operations need r=1, got r={config.r}")
    return config.coords[:, 0]


def _check_spatial(potential: Potential) -> None:
    if not potential.has_spatial_envelope:
        # triggers the family's UnsupportedOperationError with its message
        potential.spatial_tail_bound(1)


def _nearest_rep(d: float) -> float:
    """Reduce a separation to its (-1/2, 1/2] representative; the image set
    {d + gamma} is unchanged and the truncation window sits symmetrically."""
    return d - math.ceil(d - 0.5)


def pair_potential_sum(x, y, potential: Potential, g_cut: int) -> float:
    """sum_{|gamma| <= G} k(d + gamma) with d the nearest representative of
    x - y (the infinite image set is the same for any representative; the
    reduced one centers the truncation window)."""
    if g_cut < 1:
        raise ValueError("image cutoff G must be >= 1")
    _check_spatial(potential)
    d = _nearest_rep(float(np.asarray(x, float).reshape(()) - np.asarray(y, float).reshape(())))
    gammas = np.arange(-g_cut, g_cut + 1, dtype=float)
    return math.fsum(np.asarray(potential.k(d + gammas), dtype=float))


def total_energy_spatial(config: Configuration, potential: Potential, g_cut: int) -> float:
    """Image-sum energy over all ordered pairs, self pairs included.

    The j = m terms contribute the position-independent self-image sum
    N * sum_gamma k(gamma); subtracting N^2 khat(0) recovers the spectral
    energy (Poisson summation applied pairwise).
    """
    if g_cut < 1:
        raise ValueError("image cutoff G must be >= 1")
    _check_spatial(potential)
    x = _require_1d(config)
    gammas = np.arange(-g_cut, g_cut + 1, dtype=float)
    terms = []
    for j in range(x.size):
        for m in range(x.size):
            args = _nearest_rep(x[j] - x[m]) + gammas
            terms.append(math.fsum(np.asarray(potential.k(args), dtype=float)))
    return math.fsum(terms)


def spatial_energy_tail_bound(config: Configuration, potential: Potential, g_cut: int) -> float:
    """Certified bound on the image-sum truncation of total_energy_spatial."""
    return config.n**2 * potential.spatial_tail_bound(g_cut)


def force_at(config: Configuration, j: int, potential: Potential, g_cut: int) -> float:
    """Signed net force on point j from every source image within |gamma| <= G.

    Each image of source m at x_m + gamma pushes along the circle with
    magnitude H(|u|) = -k'(|u|) and direction sign(u), u = x_j - x_m - gamma
    (positive direction = increasing coordinate).  The m = j identity image
    is excluded; the remaining self images cancel in +- pairs.
    """
    if g_cut < 1:
        raise ValueError("image cutoff G must be >= 1")
    _check_spatial(potential)
    x = _require_1d(config)
    if not 0 <= j < x.size:
        raise ValueError(f"point index {j} out of range")
    gammas = np.arange(-g_cut, g_cut + 1, dtype=float)
    terms = []
    for m in range(x.size):
        if m == j:
            continue
        u = _nearest_rep(x[j] - x[m]) - gammas
        # H(|u|) sign(u) = -k'(u) because k' is odd
        terms.append(-math.fsum(np.asarray(potential.k_prime(u), dtype=float)))
    terms.append(self_force(x[j], potential, g_cut))
    return math.fsum(terms)


def force_tail_bound(config: Configuration, potential: Potential, g_cut: int) -> float:
    """Certified bound on the image truncation of force_at."""
    return config.n * potential.spatial_force_tail_bound(g_cut)


def self_force(x, potential: Potential, g_cut: int) -> float:
    """Force of a point on itself through its nontrivial images: exactly zero.

    Each geodesic segment is canceled by its negative counterpart, so the
    sum is accumulated in +-gamma pairs and returns 0.0 exactly.
    """
    if g_cut < 1:
        raise ValueError("image cutoff G must be >= 1")
    total = 0.0
    for gamma in range(1, g_cut + 1):
        h = float(potential.force(float(gamma)))
        # image at x+gamma pushes in -1 direction, image at x-gamma in +1
        total += h - h
    return total


def total_energy_spatial_rd(config: Configuration, potential: Potential, g_cut: int) -> float:
    """Image-sum energy on T^r over translates |gamma|_inf <= G (radial k).

    Needs a family exposing an r-dimensional spatial envelope; that is the
    Gaussian here, whose k applies to the Euclidean length of each image
    displacement."""
    if g_cut < 1:
        raise ValueError("image cutoff G must be >= 1")
    if not hasattr(potential, "spatial_tail_bound_rd"):
        raise UnsupportedOperationError(f"{potential.name}: no r-dimensional spatial envelope")
    r = config.r
    shifts = np.array(list(itertools.product(range(-g_cut, g_cut + 1), repeat=r)), dtype=float)
    coords = config.coords
    terms = []
    for j in range(config.n):
        for m in range(config.n):
            d = coords[j] - coords[m]
            d = d - np.round(d)  # nearest representative, componentwise
            norms = np.sqrt(((d + shifts) ** 2).sum(axis=1))
            terms.append(math.fsum(np.asarray(potential.k(norms), dtype=float)))
    return math.fsum(terms)


def poisson_check_rd(
    config: Configuration, potential: Potential, radius: float, g_cut: int
) -> dict:
    """r-dimensional spectral vs image-sum energy with certified bounds."""
    from .spectral import energy_rd

    spec = energy_rd(config, potential, radius)
    spatial = total_energy_spatial_rd(config, potential, g_cut)
    center = config.n**2 * float(potential.k_hat(0.0))
    diff = abs(spec.value - (spatial - center))
    k0 = max(1.0, abs(float(potential.k(0.0))))
    n_images = (2 * g_cut + 2) ** config.r
    fp_slack = 64.0 * np.finfo(float).eps * config.n**2 * n_images * k0
    bound = (
        spec.truncation_bound
        + config.n**2 * potential.spatial_tail_bound_rd(g_cut, config.r)
        + fp_slack
    )
    return {
        "spectral": spec.value,
        "spatial_minus_center": spatial - center,
        "difference": diff,
        "bound": bound,
        "ok": bool(diff <= bound),
    }


def poisson_check(
    config: Configuration, potential: Potential, m_cut: int, g_cut: int
) -> dict:
    """Spectral vs spatial energy with their combined certified bound.

    Returns value pairs and passes iff |difference| <= bound.
    """
    from .spectral import energy_1d  # local import to avoid a cycle

    spec = energy_1d(config, potential, m_cut)
    spatial = total_energy_spatial(config, potential, g_cut)
    center = config.n**2 * float(potential.k_hat(0.0))
    diff = abs(spec.value - (spatial - center))
    # truncation tails plus an envelope for floating-point accumulation: the
    # summands are evaluated to ~1 ulp each, so 64 eps times a term-count
    # times term-scale product safely dominates the rounding of both sides
    k0 = max(1.0, abs(float(potential.k(0.0))))
    fp_slack = 64.0 * np.finfo(float).eps * config.n**2 * (2 * g_cut + 2) * k0
    bound = (
        spec.truncation_bound
        + spatial_energy_tail_bound(config, potential, g_cut)
        + fp_slack
    )
    return {
        "spectral": spec.value,
        "spatial_minus_center": spatial - center,
        "difference": diff,
        "bound": bound,
        "ok": bool(diff <= bound),
    }
