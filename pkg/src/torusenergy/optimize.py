"""Equilibrium search on the truncated spectral energy.

First-order only: projected gradient descent with Armijo backtracking, where
"projection" is the mod-1 wrap back into the fundamental domain.  A seeded
multistart wrapper hunts for global minimizers, and an exhaustive reduced
grid search provides an independent ground-truth oracle at N <= 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import UnsupportedOperationError
from .geometry import Configuration, equispaced, wrap
from .potentials import Potential
from .spectral import EnergyReport, energy_1d, energy_rd, gradient_1d, gradient_rd, lattice_modes

CONVERGED = "Converged"
MAX_ITERS = "MaxIters"
LINE_SEARCH_FAILED = "LineSearchFailed"


@dataclass
class OptimizerParams:
    max_iters: int = 100_000
    grad_tol: float = 1e-10
    initial_step: float = 0.1
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    cutoff: float = 30  # mode cutoff M at r=1, lattice-ball radius R otherwise

    def __post_init__(self):
        if self.max_iters < 1 or self.grad_tol <= 0 or self.initial_step <= 0:
            raise ValueError("max_iters, grad_tol, initial_step must be positive")
        if not 0 < self.backtrack_factor < 1 or not 0 < self.armijo_c < 1:
            raise ValueError("backtrack_factor and armijo_c must lie in (0, 1)")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


@dataclass
class OptimizationTrace:
    """Accepted iterates with their energies and gradient norms."""

    iterates: list = field(default_factory=list)  # (Configuration, energy, grad_inf)
    termination: str = MAX_ITERS
    final: Configuration | None = None

    @property
    def final_energy(self) -> float:
        return self.iterates[-1][1]

    @property
    def final_grad_inf(self) -> float:
        return self.iterates[-1][2]

    def iterate_dicts(self):
        for i, (cfg, energy, gnorm) in enumerate(self.iterates):
            yield {
                "iter": i,
                "energy": energy,
                "grad_inf": gnorm,
                "points": cfg.coords.tolist(),
            }


def _energy_grad_fns(potential: Potential, r: int, cutoff: float):
    if r == 1:
        m_cut = int(cutoff)
        khat = potential.k_hat_integers(m_cut)
        return (
            lambda c: kernels.energy_1d(c[:, 0], khat),
            lambda c: kernels.gradient_1d(c[:, 0], khat).reshape(-1, 1),
        )
    modes = lattice_modes(r, cutoff)
    khat = np.asarray(potential.k_hat_rd(modes), dtype=float)
    return (
        lambda c: kernels.energy_rd(c, modes, khat),
        lambda c: kernels.gradient_rd(c, modes, khat),
    )


def minimize(
    config0: Configuration, potential: Potential, params: OptimizerParams | None = None
) -> OptimizationTrace:
    """Gradient descent with Armijo backtracking on the truncated energy.

    Every iterate is wrapped back into [0,1)^r.  Terminates Converged when
    the gradient infinity norm drops to grad_tol, LineSearchFailed when the
    backtracked step underflows below 1e-16 (recorded, not raised), MaxIters
    otherwise.  Deterministic for fixed inputs.
    """
    params = params or OptimizerParams()
    energy_of, grad_of = _energy_grad_fns(potential, config0.r, params.cutoff)

    cfg = config0
    coords = cfg.coords
    energy = energy_of(coords)
    trace = OptimizationTrace()
    step = params.initial_step
    stalled = 0
    for _ in range(params.max_iters):
        grad = grad_of(coords)
        gnorm = float(np.abs(grad).max())
        trace.iterates.append((cfg, energy, gnorm))
        if gnorm <= params.grad_tol:
            trace.termination = CONVERGED
            trace.final = cfg
            return trace

        gsq = float((grad * grad).sum())
        # warm start one notch above the last accepted step, capped at initial
        step = min(params.initial_step, step / params.backtrack_factor)
        while True:
            if step < 1e-16:
                trace.termination = LINE_SEARCH_FAILED
                trace.final = cfg
                return trace
            cand = wrap(coords - step * grad)
            cand_energy = energy_of(cand)
            if cand_energy <= energy - params.armijo_c * step * gsq:
                break
            step *= params.backtrack_factor
        # progress below float resolution cannot be sustained; a few such
        # accepted steps in a row means the line search is out of digits
        if energy - cand_energy <= 8.0 * np.finfo(float).eps * max(abs(energy), 1e-30):
            stalled += 1
            if stalled >= 8:
                trace.termination = LINE_SEARCH_FAILED
                trace.final = Configuration(cand)
                final_gnorm = float(np.abs(grad_of(cand)).max())
                trace.iterates.append((trace.final, cand_energy, final_gnorm))
                return trace
        else:
            stalled = 0
        coords = cand
        cfg = Configuration(coords)
        energy = cand_energy

    grad = grad_of(coords)
    trace.iterates.append((cfg, energy, float(np.abs(grad).max())))
    trace.termination = CONVERGED if trace.iterates[-1][2] <= params.grad_tol else MAX_ITERS
    trace.final = cfg
    return trace


def is_critical(
    config: Configuration, potential: Potential, cutoff: float, tol: float
) -> bool:
    """True iff the truncated-energy gradient infinity norm is at most tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if config.r == 1:
        grad = gradient_1d(config, potential, int(cutoff))
    else:
        grad = gradient_rd(config, potential, cutoff)
    return bool(np.abs(grad).max() <= tol)


def multistart_global(
    n: int,
    r: int,
    potential: Potential,
    n_starts: int,
    seed: int,
    params: OptimizerParams | None = None,
) -> tuple[Configuration, EnergyReport]:
    """Best minimize result over seeded uniform starts (plus the equispaced
    start at r=1).  Ties resolve to the earliest start, so results are
    deterministic for a fixed seed."""
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    params = params or OptimizerParams()
    rng = np.random.default_rng(seed)

    starts = []
    if r == 1:
        starts.append(equispaced(n))
    for _ in range(n_starts):
        starts.append(Configuration(rng.random((n, r))))

    best_cfg = None
    best_energy = math.inf
    for cfg0 in starts:
        trace = minimize(cfg0, potential, params)
        e = trace.final_energy
        if e < best_energy:
            best_energy = e
            best_cfg = trace.final

    if r == 1:
        report = energy_1d(best_cfg, potential, int(params.cutoff))
    else:
        report = energy_rd(best_cfg, potential, params.cutoff)
    return best_cfg, report


def brute_force_oracle(
    n: int, potential: Potential, grid_m: int, m_cut: int
) -> tuple[Configuration, float]:
    """Exhaustive ground truth at small N on the 1-torus.

    Translation invariance pins x_1 = 0, permutation invariance sorts the
    rest, so the grid search sweeps x_2 <= ... <= x_N over {i/m}; the best
    grid point is then polished by one minimize run.  Intentionally
    independent of multistart heuristics.
    """
    if n > 4:
        raise UnsupportedOperationError("brute_force_oracle: N > 4 is combinatorially out of reach")
    if n < 1:
        raise ValueError("N must be >= 1")
    if grid_m < 8:
        raise ValueError("grid_m must be >= 8")
    khat = potential.k_hat_integers(m_cut)

    best_x = np.zeros(n)
    best_e = kernels.energy_1d(best_x, khat)
    for rest in itertools.combinations_with_replacement(range(grid_m), n - 1):
        x = np.zeros(n)
        x[1:] = np.asarray(rest, dtype=float) / grid_m
        e = kernels.energy_1d(x, khat)
        if e < best_e:
            best_e = e
            best_x = x

    params = OptimizerParams(cutoff=m_cut)
    trace = minimize(Configuration(best_x.reshape(-1, 1)), potential, params)
    if trace.final_energy <= best_e:
        return trace.final, trace.final_energy
    return Configuration(best_x.reshape(-1, 1)), best_e


def sorted_gaps(config: Configuration) -> np.ndarray:
    """Consecutive circular gaps of a 1-D configuration, sorted ascending.

    Translation-invariant fingerprint used to compare configurations up to
    rotation (raw coordinates are meaningless for that purpose).
    """
    if config.r != 1:
        raise ValueError("gaps need r=1")
    xs = np.sort(config.coords[:, 0])
    gaps = np.diff(np.concatenate([xs, [xs[0] + 1.0]]))
    return np.sort(gaps)
