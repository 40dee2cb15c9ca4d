"""Hot numeric kernels: mode sums for energies and gradients.

Every kernel exists twice: a numba @njit version (explicit loops, Kahan
compensation over ascending mode index) and a pure-numpy version (vectorized
terms reduced with math.fsum, which is exactly rounded).  Both honor the
deterministic summation contract: modes ascending, 1-D gradient inner sums in
label order, so a fixed build gives bit-identical results run to run.

Selection: the numba path is used when numba imports and the environment
variable TORUSENERGY_NO_NUMBA is unset/0.  Set TORUSENERGY_NO_NUMBA=1 to
force the numpy fallback; benchmarks/bench_kernels.py times the two paths
against each other.

Inputs are plain float64 arrays: `x` is the flat coordinate vector for r=1
kernels, `xs` an (N, r) matrix for lattice kernels, `khat` the transform
values at the modes being summed, `modes` the (K, r) integer mode matrix in
(|nu|^2, lex) ascending order.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and os.environ.get("TORUSENERGY_NO_NUMBA", "0").lower() not in (
    "1",
    "true",
    "yes",
)

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# pure-numpy path
# ---------------------------------------------------------------------------

def _phases_1d(x: np.ndarray, m_max: int) -> np.ndarray:
    """exp(2 pi i n x_j) for n = 1..M, shape (M, N)."""
    n = np.arange(1, m_max + 1, dtype=float)
    return np.exp((2j * np.pi) * np.outer(n, x))


def energy_1d_numpy(x: np.ndarray, khat: np.ndarray) -> float:
    z = _phases_1d(x, khat.size)
    s = z.sum(axis=1)
    terms = 2.0 * khat * (s.real * s.real + s.imag * s.imag)
    return math.fsum(terms)


def gradient_1d_numpy(x: np.ndarray, khat: np.ndarray) -> np.ndarray:
    m_max = khat.size
    z = _phases_1d(x, m_max)
    s = z.sum(axis=1)
    n = np.arange(1, m_max + 1, dtype=float)
    # d|S_n|^2/dx_j = -4 pi n Im(conj(S_n) e^{2 pi i n x_j}); the imaginary
    # part is written as two separate products so the j-th term cancels
    # exactly at N = 1 (complex multiply may contract with FMA and leave the
    # rounding residual instead)
    im = s.real[:, None] * z.imag - s.imag[:, None] * z.real
    w = (n * khat)[:, None] * im
    grad = np.empty(x.size)
    for j in range(x.size):
        grad[j] = -8.0 * np.pi * math.fsum(w[:, j])
    return grad


def _phases_rd(xs: np.ndarray, modes: np.ndarray) -> np.ndarray:
    """exp(2 pi i (nu_k, x_j)), shape (K, N).  Avoids BLAS so the reduction
    order is fixed regardless of thread count."""
    k, r = modes.shape
    dot = np.zeros((k, xs.shape[0]))
    for c in range(r):
        dot += np.outer(modes[:, c].astype(float), xs[:, c])
    return np.exp((2j * np.pi) * dot)


def energy_rd_numpy(xs: np.ndarray, modes: np.ndarray, khat: np.ndarray) -> float:
    z = _phases_rd(xs, modes)
    s = z.sum(axis=1)
    terms = khat * (s.real * s.real + s.imag * s.imag)
    return math.fsum(terms)


def gradient_rd_numpy(xs: np.ndarray, modes: np.ndarray, khat: np.ndarray) -> np.ndarray:
    z = _phases_rd(xs, modes)
    s = z.sum(axis=1)
    im = s.real[:, None] * z.imag - s.imag[:, None] * z.real  # (K, N)
    n_pts, r = xs.shape
    grad = np.empty((n_pts, r))
    for c in range(r):
        w = (khat * modes[:, c])[:, None] * im
        for j in range(n_pts):
            grad[j, c] = -4.0 * np.pi * math.fsum(w[:, j])
    return grad


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _energy_1d_jit(x, khat):
        n_pts = x.shape[0]
        m_max = khat.shape[0]
        cr = np.empty(n_pts)
        ci = np.empty(n_pts)
        zr = np.empty(n_pts)
        zi = np.empty(n_pts)
        for j in range(n_pts):
            a = TWO_PI * x[j]
            cr[j] = np.cos(a)
            ci[j] = np.sin(a)
            zr[j] = cr[j]
            zi[j] = ci[j]
        total = 0.0
        comp = 0.0
        for n in range(1, m_max + 1):
            if n > 1:
                for j in range(n_pts):
                    tr = zr[j] * cr[j] - zi[j] * ci[j]
                    zi[j] = zr[j] * ci[j] + zi[j] * cr[j]
                    zr[j] = tr
            sr = 0.0
            si = 0.0
            for j in range(n_pts):
                sr += zr[j]
                si += zi[j]
            term = 2.0 * khat[n - 1] * (sr * sr + si * si)
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        return total

    @njit(cache=True)
    def _gradient_1d_jit(x, khat):
        n_pts = x.shape[0]
        m_max = khat.shape[0]
        cr = np.empty(n_pts)
        ci = np.empty(n_pts)
        zr = np.empty(n_pts)
        zi = np.empty(n_pts)
        for j in range(n_pts):
            a = TWO_PI * x[j]
            cr[j] = np.cos(a)
            ci[j] = np.sin(a)
            zr[j] = cr[j]
            zi[j] = ci[j]
        grad = np.zeros(n_pts)
        comp = np.zeros(n_pts)
        for n in range(1, m_max + 1):
            if n > 1:
                for j in range(n_pts):
                    tr = zr[j] * cr[j] - zi[j] * ci[j]
                    zi[j] = zr[j] * ci[j] + zi[j] * cr[j]
                    zr[j] = tr
            sr = 0.0
            si = 0.0
            for j in range(n_pts):
                sr += zr[j]
                si += zi[j]
            c = -8.0 * np.pi * n * khat[n - 1]
            for j in range(n_pts):
                term = c * (sr * zi[j] - si * zr[j])
                y = term - comp[j]
                t = grad[j] + y
                comp[j] = (t - grad[j]) - y
                grad[j] = t
        return grad

    @njit(cache=True)
    def _energy_rd_jit(xs, modes, khat):
        n_pts, r = xs.shape
        k_modes = modes.shape[0]
        total = 0.0
        comp = 0.0
        for k in range(k_modes):
            sr = 0.0
            si = 0.0
            for j in range(n_pts):
                a = 0.0
                for c in range(r):
                    a += modes[k, c] * xs[j, c]
                a *= TWO_PI
                sr += np.cos(a)
                si += np.sin(a)
            term = khat[k] * (sr * sr + si * si)
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        return total

    @njit(cache=True)
    def _gradient_rd_jit(xs, modes, khat):
        n_pts, r = xs.shape
        k_modes = modes.shape[0]
        grad = np.zeros((n_pts, r))
        comp = np.zeros((n_pts, r))
        zr = np.empty(n_pts)
        zi = np.empty(n_pts)
        for k in range(k_modes):
            sr = 0.0
            si = 0.0
            for j in range(n_pts):
                a = 0.0
                for c in range(r):
                    a += modes[k, c] * xs[j, c]
                a *= TWO_PI
                zr[j] = np.cos(a)
                zi[j] = np.sin(a)
                sr += zr[j]
                si += zi[j]
            for j in range(n_pts):
                im = sr * zi[j] - si * zr[j]
                for c in range(r):
                    term = -4.0 * np.pi * khat[k] * modes[k, c] * im
                    y = term - comp[j, c]
                    t = grad[j, c] + y
                    comp[j, c] = (t - grad[j, c]) - y
                    grad[j, c] = t
        return grad


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def energy_1d(x: np.ndarray, khat: np.ndarray) -> float:
    """2 sum_{n=1..M} khat[n] |S_n|^2 with S_n the mode-n character sum."""
    x = np.ascontiguousarray(x, dtype=float)
    khat = np.ascontiguousarray(khat, dtype=float)
    if NUMBA_ENABLED:
        return float(_energy_1d_jit(x, khat))
    return energy_1d_numpy(x, khat)


def gradient_1d(x: np.ndarray, khat: np.ndarray) -> np.ndarray:
    """Exact derivative of energy_1d with respect to each point."""
    x = np.ascontiguousarray(x, dtype=float)
    khat = np.ascontiguousarray(khat, dtype=float)
    if NUMBA_ENABLED:
        return _gradient_1d_jit(x, khat)
    return gradient_1d_numpy(x, khat)


def energy_rd(xs: np.ndarray, modes: np.ndarray, khat: np.ndarray) -> float:
    """sum over listed nonzero modes of khat_k |S_k|^2 (both signs listed)."""
    xs = np.ascontiguousarray(xs, dtype=float)
    khat = np.ascontiguousarray(khat, dtype=float)
    if NUMBA_ENABLED:
        return float(_energy_rd_jit(xs, np.ascontiguousarray(modes, dtype=np.int64), khat))
    return energy_rd_numpy(xs, modes, khat)


def gradient_rd(xs: np.ndarray, modes: np.ndarray, khat: np.ndarray) -> np.ndarray:
    xs = np.ascontiguousarray(xs, dtype=float)
    khat = np.ascontiguousarray(khat, dtype=float)
    if NUMBA_ENABLED:
        return _gradient_rd_jit(xs, np.ascontiguousarray(modes, dtype=np.int64), khat)
    return gradient_rd_numpy(xs, modes, khat)
