"""Energies and gradients on the Fourier side.

The 1-D energy of a configuration is

    E = 2 sum_{n>=1} khat(n) |S_n|^2,      S_n = sum_j exp(2 pi i n x_j),

truncated at a caller-chosen mode cutoff M and reported together with a
certified truncation bound (|S_n| <= N gives 2 N^2 sum_{n>M} |khat(n)|).
In r dimensions the sum runs over nonzero integer vectors nu with
|nu| <= R, both signs included, with no extra factor of two; at r = 1 and
R = M the two conventions agree because the +-n terms are identical.

Summation order is pinned (ascending mode index; r-D lexicographic within
ascending |nu|^2) with compensated accumulation, so results are reproducible
bit for bit on a fixed build.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, asdict

import numpy as np

from . import kernels
from .geometry import Configuration
from .potentials import Potential


@dataclass(frozen=True)
class EnergyReport:
    """An energy value with the certified truncation error of its mode sum."""

    value: float
    truncation_bound: float
    cutoff: float
    n_modes: int

    def to_dict(self) -> dict:
        return asdict(self)


def structure_factor(config: Configuration, nu) -> complex:
    """Character sum S_nu = sum_j exp(2 pi i (nu, x_j)); |S_nu| <= N."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if nu.shape != (config.r,):
        raise ValueError(f"mode vector has dimension {nu.size}, expected {config.r}")
    phase = 2j * np.pi * (config.coords @ nu)
    return complex(np.exp(phase).sum())


def _require_1d(config: Configuration) -> np.ndarray:
    if config.r != 1:
        raise ValueError(f"operation needs a 1-D configuration, got r={config.r}")
    return config.coords[:, 0]


def energy_1d(config: Configuration, potential: Potential, m_cut: int) -> EnergyReport:
    """Truncated spectral energy 2 sum_{n<=M} khat(n) |S_n|^2."""
    if m_cut < 1:
        raise ValueError("mode cutoff must be >= 1")
    x = _require_1d(config)
    khat = potential.k_hat_integers(m_cut)
    value = kernels.energy_1d(x, khat)
    bound = 2.0 * config.n**2 * potential.tail_sum_bound(m_cut, 0)
    return EnergyReport(value=value, truncation_bound=bound, cutoff=m_cut, n_modes=m_cut)


def gradient_1d(config: Configuration, potential: Potential, m_cut: int) -> np.ndarray:
    """Exact derivative of the truncated energy with respect to each point.

    Entry j is dE/dx_j; its negative is the net force on x_j under the
    truncated mode model.
    """
    if m_cut < 1:
        raise ValueError("mode cutoff must be >= 1")
    x = _require_1d(config)
    khat = potential.k_hat_integers(m_cut)
    return kernels.gradient_1d(x, khat)


def lattice_modes(r: int, radius: float) -> np.ndarray:
    """Nonzero integer vectors with |nu| <= radius, ascending (|nu|^2, lex)."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    top = int(math.floor(radius))
    r2 = radius * radius
    pts = [
        v
        for v in itertools.product(range(-top, top + 1), repeat=r)
        if 0 < sum(c * c for c in v) <= r2
    ]
    pts.sort(key=lambda v: (sum(c * c for c in v), v))
    return np.array(pts, dtype=np.int64).reshape(len(pts), r)


def energy_rd(config: Configuration, potential: Potential, radius: float) -> EnergyReport:
    """Spectral energy over the lattice ball: sum_{0<|nu|<=R} khat(nu) |S_nu|^2."""
    modes = lattice_modes(config.r, radius)
    khat = np.asarray(potential.k_hat_rd(modes), dtype=float)
    value = kernels.energy_rd(config.coords, modes, khat)
    bound = config.n**2 * potential.tail_sum_bound_rd(radius, 0)
    return EnergyReport(value=value, truncation_bound=bound, cutoff=radius, n_modes=modes.shape[0])


def gradient_rd(config: Configuration, potential: Potential, radius: float) -> np.ndarray:
    """(N, r) array of dE/dx_j for the lattice-ball truncated energy."""
    modes = lattice_modes(config.r, radius)
    khat = np.asarray(potential.k_hat_rd(modes), dtype=float)
    return kernels.gradient_rd(config.coords, modes, khat)


def equispaced_energy(n: int, potential: Potential, j_cut: int) -> EnergyReport:
    """Energy of N equispaced points: every mode cancels except multiples of N,
    where the term is 2 N^2 khat(jN); truncated after J multiples."""
    if n < 1 or j_cut < 1:
        raise ValueError("N and J must be >= 1")
    ns = n * np.arange(1, j_cut + 1, dtype=float)
    khat = np.asarray(potential.k_hat(ns), dtype=float)
    value = 2.0 * n * n * math.fsum(khat)
    bound = 2.0 * n * n * potential.tail_sum_bound(j_cut * n, 0)
    return EnergyReport(value=value, truncation_bound=bound, cutoff=j_cut * n, n_modes=j_cut)


def mean_energy_bound(n: int, potential: Potential, m_cut: int) -> float:
    """Certified upper bound 2N sum_n khat(n) for the configuration-space mean,
    hence for the minimum energy."""
    if n < 1 or m_cut < 1:
        raise ValueError("N and M must be >= 1")
    khat = potential.k_hat_integers(m_cut)
    return 2.0 * n * (math.fsum(khat) + potential.tail_sum_bound(m_cut, 0))


def gradient_tail_bound(config: Configuration, potential: Potential, m_cut: int) -> float:
    """Bound on each |dE/dx_j| error of the mode truncation: 8 pi N tail(M, 1)."""
    return 8.0 * np.pi * config.n * potential.tail_sum_bound(m_cut, 1)
