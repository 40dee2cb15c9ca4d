"""Radial pair potentials: k, its derivative, its Fourier transform, and
certified truncation bounds.

Transform convention (2 pi in the character):

    khat(xi) = integral k(t) exp(-2 pi i xi t) dt

Each family provides the spectral side exactly or in closed form; the spatial
side (k itself) is closed form where possible and high-accuracy quadrature
otherwise.  Tail bounds are conservative by contract: over-estimates are
allowed, under-estimates are bugs.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .errors import UnsupportedOperationError

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# band-limited building blocks
# ---------------------------------------------------------------------------

def _check_m(m: int) -> None:
    if m < 4 or m % 2 != 0:
        raise ValueError(f"m must be an even integer >= 4, got {m}")


@lru_cache(maxsize=None)
def _sin_power_cos_coeffs(m: int):
    """Finite cosine expansion sin^m t = c0 + sum_{l=1}^{m/2} c_l cos(2 l t)."""
    c0 = math.comb(m, m // 2) / 2**m
    cs = tuple(2.0 * (-1) ** l * math.comb(m, m // 2 + l) / 2**m for l in range(1, m // 2 + 1))
    return c0, cs


def _oscillatory_tail(l: int, p: int, t0: float):
    """integral_{t0}^inf exp(2 i l t) t^{-p} dt by repeated integration by parts.

    Returns (value, remainder_bound).  Each step peels an explicit boundary
    term; the remainder after stopping is bounded by |coef| * t0^{1-p'} / (p'-1),
    which for t0 >= ~40 drops below 1e-17 well before the asymptotic series
    turns around.
    """
    two_il = 2j * l
    boundary_phase = complex(np.cos(2 * l * t0), np.sin(2 * l * t0))
    coef = 1.0 + 0.0j
    val = 0.0 + 0.0j
    pc = p
    best = None
    for _ in range(40):
        val += -coef * boundary_phase * t0 ** (-pc) / two_il
        coef = coef * pc / two_il
        pc += 1
        rem = abs(coef) * t0 ** (-(pc - 1)) / (pc - 1)
        if best is None or rem < best[1]:
            best = (val, rem)
        if rem < 1e-18:
            break
        if best[1] < rem:  # asymptotic series started diverging
            break
    return best


def _integrand_value(t, m):
    # sin^m t / t^{m-1} written as (sin t / t)^m * t, stable down to t = 0
    if t == 0.0:
        return 0.0
    return (math.sin(t) / t) ** m * t


def _phi_tail(y: float, m: int) -> float:
    """integral_y^inf sin^m t / t^{m-1} dt for y >= ~40, semi-analytically.

    The DC part of sin^m integrates in closed form; each oscillatory part is
    an incomplete Fourier integral handled by _oscillatory_tail.
    """
    c0, cs = _sin_power_cos_coeffs(m)
    total = c0 * y ** (-(m - 2)) / (m - 2)
    for l, cl in enumerate(cs, start=1):
        val, _rem = _oscillatory_tail(l, m - 1, y)
        total += cl * val.real
    return total


_PHI_QUAD_ANCHOR = 60.0


def phi_m(y: float, m: int) -> float:
    """The band-limited potential profile integral_y^inf sin^m t / t^{m-1} dt.

    Even, positive, strictly decreasing on [0, inf), vanishing at infinity.
    Computed by adaptive quadrature on [|y|, T] plus the certified
    semi-analytic tail beyond T; absolute accuracy ~1e-12.
    """
    _check_m(m)
    ya = abs(float(y))
    t_anchor = max(ya, _PHI_QUAD_ANCHOR)
    total = _phi_tail(t_anchor, m)
    if ya < t_anchor:
        n_osc = int((t_anchor - ya) / math.pi) + 10
        part, _err = quad(
            _integrand_value,
            ya,
            t_anchor,
            args=(m,),
            epsabs=1e-13,
            epsrel=1e-13,
            limit=max(200, 4 * n_osc),
        )
        total += part
    return total


def cardinal_bspline(x, m: int):
    """Central B-spline of order m (m-fold convolution of the unit box).

    Piecewise polynomial of degree m-1 supported on [-m/2, m/2], evaluated
    by the alternating truncated-power formula and clamped to exactly zero
    outside the support (the alternating sum cancels only up to roundoff).
    """
    x = np.asarray(x, dtype=float)
    t = x + m / 2.0
    acc = np.zeros_like(t)
    for i in range(m + 1):
        acc += (-1.0) ** i * math.comb(m, i) * np.clip(t - i, 0.0, None) ** (m - 1)
    out = acc / math.factorial(m - 1)
    return np.where(np.abs(x) < m / 2.0, out, 0.0)


def phi_m_hat(xi, m: int):
    """Fourier transform of phi_m: supported in |xi| <= m/(2 pi), nonnegative.

    The transform of (sin t/t)^m is pi * B_m(pi xi) with B_m the cardinal
    B-spline (an m-fold convolution of the box transform of sin t/t), and
    differentiating that identity gives

        phi_m_hat(xi) = -B_m'(pi xi) / (4 xi),
        B_m'(u) = B_{m-1}(u + 1/2) - B_{m-1}(u - 1/2),

    with the removable singularity at xi = 0 filled by the limit
    pi (B_{m-2}(0) - B_{m-2}(1)) / 2.  Unimodality of B_m makes the value
    nonnegative everywhere.
    """
    _check_m(m)
    xi_arr = np.asarray(xi, dtype=float)
    scalar = xi_arr.ndim == 0
    xi_arr = np.atleast_1d(xi_arr)
    support = m / TWO_PI
    u = np.pi * xi_arr
    num = cardinal_bspline(u + 0.5, m - 1) - cardinal_bspline(u - 0.5, m - 1)
    small = np.abs(xi_arr) < 1e-7
    safe = np.where(small, 1.0, xi_arr)
    val = -num / (4.0 * safe)
    limit = np.pi * float(cardinal_bspline(0.0, m - 2) - cardinal_bspline(1.0, m - 2)) / 2.0
    val = np.where(small, limit, val)
    val = np.where(np.abs(xi_arr) >= support, 0.0, val)
    return float(val[0]) if scalar else val


# Cumulative quadrature tables so spatial image sums can evaluate phi_m on
# arrays cheaply.  Panels of width 1/4 with 12-point Gauss-Legendre are far
# below 1e-13 error for this integrand; the table stores the cumulative
# integral from each edge out to the anchor, where the certified tail
# formula takes over.

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)
_PHI_PANEL = 0.25
_phi_tables: dict[int, tuple[float, np.ndarray, float]] = {}


def _integrand_array(t, m):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        core = np.where(t == 0.0, 1.0, np.sin(t) / np.where(t == 0.0, 1.0, t))
    return core**m * t


def _phi_table(m: int, ymax: float):
    # rebuilt tables replace the dict entry atomically, so concurrent readers
    # always see a complete (if possibly shorter) table
    cached = _phi_tables.get(m)
    if cached is not None and cached[0] >= ymax:
        return cached
    edge_max = max(ymax * 1.25, _PHI_QUAD_ANCHOR + 4.0)
    n_panels = int(math.ceil(edge_max / _PHI_PANEL))
    edges = np.arange(n_panels + 1) * _PHI_PANEL
    a = edges[:-1]
    half = _PHI_PANEL / 2.0
    nodes = a[:, None] + half * (_GL_X[None, :] + 1.0)
    panel_ints = half * (_integrand_array(nodes, m) * _GL_W[None, :]).sum(axis=1)
    # cumulative integral from edge i out to the last edge
    cum = np.concatenate([np.cumsum(panel_ints[::-1])[::-1], [0.0]])
    anchor = _phi_tail(float(edges[-1]), m)
    table = (float(edges[-1]), cum + anchor, anchor)
    _phi_tables[m] = table
    return table


def phi_m_array(y, m: int) -> np.ndarray:
    """Vectorized phi_m via the cumulative table (extends itself on demand)."""
    _check_m(m)
    y = np.abs(np.asarray(y, dtype=float))
    edge_max, cum, _anchor = _phi_table(m, float(y.max()) if y.size else 1.0)
    idx = np.minimum((y / _PHI_PANEL).astype(int), int(round(edge_max / _PHI_PANEL)) - 1)
    upper = (idx + 1) * _PHI_PANEL
    half = (upper - y) / 2.0
    nodes = y[..., None] + half[..., None] * (_GL_X + 1.0)
    partial = half * (_integrand_array(nodes, m) * _GL_W).sum(axis=-1)
    return cum[idx + 1] + partial


# ---------------------------------------------------------------------------
# bump function
# ---------------------------------------------------------------------------

def bump_psi(t):
    """Standard even C^inf bump: exp(1 - 1/(1 - (2t)^2)) on |t| < 1/2, else 0.

    psi(0) = 1 and psi vanishes to all orders at t = +-1/2.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    inside = np.abs(t) < 0.5
    u = 1.0 - (2.0 * t[inside]) ** 2
    out[inside] = np.exp(1.0 - 1.0 / u)
    return float(out[0]) if scalar else out


def _bump_psi_prime(t):
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    inside = np.abs(t) < 0.5
    ti = t[inside]
    u = 1.0 - 4.0 * ti * ti
    out[inside] = np.exp(1.0 - 1.0 / u) * (-8.0 * ti / (u * u))
    return float(out[0]) if scalar else out


@lru_cache(maxsize=4096)
def _bump_psi_hat(rho: float) -> float:
    """psi_hat(rho) = 2 integral_0^{1/2} psi(t) cos(2 pi rho t) dt (even, real)."""
    val, _ = quad(
        lambda t: bump_psi(t) * math.cos(TWO_PI * rho * t),
        0.0,
        0.5,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=max(100, int(abs(rho)) * 4 + 50),
    )
    return 2.0 * val


@lru_cache(maxsize=4096)
def _bump_psi_hat_prime(rho: float) -> float:
    """d/drho psi_hat = -4 pi integral_0^{1/2} t psi(t) sin(2 pi rho t) dt."""
    val, _ = quad(
        lambda t: t * bump_psi(t) * math.sin(TWO_PI * rho * t),
        0.0,
        0.5,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=max(100, int(abs(rho)) * 4 + 50),
    )
    return -4.0 * np.pi * val


# Certified constants for the bump transform decay |psi_hat(rho)| <= C/rho^2:
# |psi_hat| <= int |psi''| / (4 pi^2 rho^2), and int |psi''| = TV(psi') <=
# 4 max|psi'| <= 64/e since |psi'| = 8|t| e v^2 e^{-v} with v = 1/(1-4t^2) >= 1
# and v^2 e^{-v} <= 4 e^{-2}.  Similarly for the derivative transform with
# int |(t psi)''| <= 2 int|psi'| + (1/2) int|psi''| <= 4 + 32/e.
_PSI_HAT_DECAY = (64.0 / math.e) / (4.0 * np.pi**2)
_PSI_HAT_PRIME_DECAY = (4.0 + 32.0 / math.e) / (2.0 * np.pi)


# ---------------------------------------------------------------------------
# geometric-series helpers for Gaussian tails
# ---------------------------------------------------------------------------

def _geometric_power_tail(q: float, a: int, p: int) -> float:
    """sum_{n >= a} n^p q^n in closed form, p in {0, 1, 2}, 0 < q < 1."""
    qa = q**a
    one = 1.0 - q
    if p == 0:
        return qa / one
    if p == 1:
        return qa * (a - (a - 1) * q) / one**2
    if p == 2:
        return qa * (a * a - (2 * a * a - 2 * a - 1) * q + (a - 1) ** 2 * q * q) / one**3
    raise ValueError("p must be 0, 1, or 2")


def _gaussian_coeff_tail(m_cut: int, p: int) -> float:
    """Bound sum_{n > M} n^p e^{-pi n^2} via e^{-pi n^2} <= e^{-pi M n}."""
    q = math.exp(-np.pi * m_cut)
    return _geometric_power_tail(q, m_cut + 1, p)


@lru_cache(maxsize=None)
def _theta_half_upper() -> float:
    """Upper estimate of sum_{n in Z} e^{-pi n^2 / 2} (used for lattice tails)."""
    n = np.arange(1, 41, dtype=float)
    partial = float(np.exp(-np.pi * n * n / 2.0).sum())
    rem = _geometric_power_tail(math.exp(-np.pi * 40 / 2.0), 41, 0)
    return 1.0 + 2.0 * (partial + rem)


# ---------------------------------------------------------------------------
# potential families
# ---------------------------------------------------------------------------

class Potential:
    """Common interface; families override what they can provide."""

    name = "potential"

    #: certified radius S with khat(xi) = 0 for |xi| >= S, or None
    band_limit: float | None = None
    #: True when khat >= 0 is certified for the whole line
    khat_nonneg: bool = False

    def params(self) -> dict:
        return {}

    def label(self) -> str:
        ps = self.params()
        if not ps:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in ps.items())
        return f"{self.name}{{{inner}}}"

    # spectral side -------------------------------------------------------
    def k_hat(self, xi):
        raise UnsupportedOperationError(f"{self.name}: transform values unavailable")

    def k_hat_integers(self, m_cut: int) -> np.ndarray:
        """khat at 1..M as a float vector (the spectral kernel weights)."""
        return np.asarray(self.k_hat(np.arange(1, m_cut + 1, dtype=float)), dtype=float)

    def k_hat_rd(self, nu):
        raise UnsupportedOperationError(f"{self.name}: no r-dimensional transform")

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        """Certified upper bound for sum_{n > M} n^p |khat(n)|."""
        raise UnsupportedOperationError(f"{self.name}: no certified coefficient tail")

    def tail_sum_bound_rd(self, radius: float, p: int) -> float:
        raise UnsupportedOperationError(f"{self.name}: no r-dimensional tail bound")

    # spatial side --------------------------------------------------------
    has_spatial_envelope = False

    def k(self, rho):
        raise UnsupportedOperationError(f"{self.name}: spatial potential unavailable")

    def k_prime(self, rho):
        raise UnsupportedOperationError(f"{self.name}: spatial derivative unavailable")

    def force(self, rho):
        """Force law H(rho) = -k'(rho); H(0) = 0 because k is even."""
        return -np.asarray(self.k_prime(rho))

    def spatial_tail_bound(self, g_cut: int) -> float:
        """Bound on sum_{|gamma| > G} |k(d + gamma)| valid for every |d| <= 1/2."""
        raise UnsupportedOperationError(f"{self.name}: no spatial decay envelope")

    def spatial_force_tail_bound(self, g_cut: int) -> float:
        raise UnsupportedOperationError(f"{self.name}: no spatial decay envelope")


class GaussianPotential(Potential):
    """k(rho) = exp(-pi rho^2); self-dual, khat = k > 0 everywhere."""

    name = "gaussian"
    khat_nonneg = True
    has_spatial_envelope = True

    def k(self, rho):
        rho = np.asarray(rho, dtype=float)
        return np.exp(-np.pi * rho * rho)

    def k_prime(self, rho):
        rho = np.asarray(rho, dtype=float)
        return -TWO_PI * rho * np.exp(-np.pi * rho * rho)

    def k_hat(self, xi):
        return self.k(xi)

    def k_hat_rd(self, nu):
        nu = np.asarray(nu, dtype=float)
        return np.exp(-np.pi * (nu * nu).sum(axis=-1))

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        return _gaussian_coeff_tail(m_cut, p)

    def tail_sum_bound_rd(self, radius: float, p: int) -> float:
        # peel half the Gaussian: |nu|^p e^{-pi |nu|^2 / 2} <= R^p e^{-pi R^2/2}
        # beyond R, and the remaining half-Gaussian sums below theta^r; use
        # r = 3 as a universal cap for the dimensions this library targets.
        if p not in (0, 1, 2):
            raise ValueError("p must be 0, 1, or 2")
        theta = _theta_half_upper()
        return radius**p * math.exp(-np.pi * radius * radius / 2.0) * theta**3

    def spatial_tail_bound(self, g_cut: int) -> float:
        a = g_cut + 0.5
        q = math.exp(-TWO_PI * a)
        return 2.0 * math.exp(-np.pi * a * a) / (1.0 - q)

    def spatial_force_tail_bound(self, g_cut: int) -> float:
        a = g_cut + 0.5
        q = math.exp(-TWO_PI * a)
        return 2.0 * TWO_PI * math.exp(-np.pi * a * a) * (a / (1.0 - q) + q / (1.0 - q) ** 2)

    def spatial_tail_bound_rd(self, g_cut: int, r: int) -> float:
        """Bound on sum over |gamma|_inf > G of max_{d in [-1/2,1/2]^r}
        k(d + gamma), by shells: at most 2r(2s+1)^(r-1) translates at
        sup-norm s, each no closer than s - 1/2."""
        total = 0.0
        ratio_cap = 3.0 ** (r - 1) * math.exp(-TWO_PI)  # < 0.06 for r <= 3
        s = g_cut + 1
        while True:
            term = 2 * r * (2 * s + 1) ** (r - 1) * math.exp(-np.pi * (s - 0.5) ** 2)
            total += term
            if term < 1e-300 or s > g_cut + 400:
                total += term * ratio_cap / (1.0 - ratio_cap)
                return total
            s += 1


class PaleyWienerPotential(Potential):
    """k(rho) = phi_m(beta rho): positive, strictly decreasing, band limited.

    The transform (1/beta) phi_m_hat(xi/beta) is nonnegative with support
    |xi| <= beta m / (2 pi), so every torus mode past the support radius is
    exactly silent.  beta scales the support; with beta = 1 and m = 4 the
    support sits inside |xi| < 1 and the whole spectrum at integers is zero.
    """

    name = "paley_wiener"
    khat_nonneg = True
    has_spatial_envelope = True

    def __init__(self, m: int = 4, beta: float = 1.0):
        _check_m(m)
        if beta <= 0:
            raise ValueError("beta must be positive")
        self.m = int(m)
        self.beta = float(beta)
        self.band_limit = self.beta * self.m / TWO_PI

    def params(self) -> dict:
        return {"m": self.m, "beta": self.beta}

    def k(self, rho):
        rho = np.asarray(rho, dtype=float)
        return phi_m_array(self.beta * rho, self.m)

    def k_prime(self, rho):
        rho = np.asarray(rho, dtype=float)
        y = self.beta * rho
        with np.errstate(divide="ignore", invalid="ignore"):
            core = np.where(y == 0.0, 1.0, np.sin(y) / np.where(y == 0.0, 1.0, y))
        # d/drho phi_m(beta rho) = -beta sin^m(y) / y^{m-1},  odd in rho
        return -self.beta * core**self.m * y

    def k_hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        return phi_m_hat(xi / self.beta, self.m) / self.beta

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        if p not in (0, 1, 2):
            raise ValueError("p must be 0, 1, or 2")
        if m_cut >= self.band_limit:
            return 0.0
        # finitely many surviving integer modes; sum them exactly
        ns = np.arange(m_cut + 1, int(math.floor(self.band_limit)) + 1, dtype=float)
        if ns.size == 0:
            return 0.0
        return float((ns**p * np.abs(self.k_hat(ns))).sum())

    def spatial_tail_bound(self, g_cut: int) -> float:
        # phi_m(y) <= y^{-(m-2)}/(m-2); integral comparison over image shells
        m, b = self.m, self.beta
        return 2.0 * (g_cut - 0.5) ** (-(m - 3)) / ((m - 2) * (m - 3) * b ** (m - 2))

    def spatial_force_tail_bound(self, g_cut: int) -> float:
        m, b = self.m, self.beta
        return 2.0 * (g_cut - 0.5) ** (-(m - 2)) / ((m - 2) * b ** (m - 2))


class BumpPerturbedPotential(Potential):
    """Gaussian transform plus half-bumps planted at +-N0.

    khat(t) = exp(-pi t^2) + (psi(t - N0) + psi(t + N0)) / 2, so the integer
    mode N0 carries weight at least 1/2 while every other integer only sees
    the Gaussian.  On the spatial side k(rho) = exp(-pi rho^2) +
    psi_hat(rho) cos(2 pi N0 rho).
    """

    name = "bump_perturbed"
    khat_nonneg = True
    has_spatial_envelope = True

    def __init__(self, n0: int = 10):
        if n0 < 1:
            raise ValueError("n0 must be a positive integer")
        self.n0 = int(n0)
        self._gauss = GaussianPotential()

    def params(self) -> dict:
        return {"n0": self.n0}

    def k_hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (
            np.exp(-np.pi * xi * xi)
            + 0.5 * (bump_psi(xi - self.n0) + bump_psi(xi + self.n0))
        )

    def k(self, rho):
        rho = np.asarray(rho, dtype=float)
        scalar = rho.ndim == 0
        rho = np.atleast_1d(rho)
        psih = np.array([_bump_psi_hat(float(abs(v))) for v in rho])
        out = np.exp(-np.pi * rho * rho) + psih * np.cos(TWO_PI * self.n0 * rho)
        return float(out[0]) if scalar else out

    def k_prime(self, rho):
        rho = np.asarray(rho, dtype=float)
        scalar = rho.ndim == 0
        rho = np.atleast_1d(rho)
        sign = np.sign(rho)
        psih = np.array([_bump_psi_hat(float(abs(v))) for v in rho])
        psihp = np.array([_bump_psi_hat_prime(float(abs(v))) for v in rho]) * sign
        out = (
            -TWO_PI * rho * np.exp(-np.pi * rho * rho)
            + psihp * np.cos(TWO_PI * self.n0 * rho)
            - TWO_PI * self.n0 * psih * np.sin(TWO_PI * self.n0 * rho)
        )
        return float(out[0]) if scalar else out

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        bound = _gaussian_coeff_tail(m_cut, p)
        if self.n0 > m_cut:
            # the only integer the bumps touch is n = N0, with weight psi(0)/2
            bound += self.n0**p * 0.5
        return bound

    def spatial_tail_bound(self, g_cut: int) -> float:
        gauss = self._gauss.spatial_tail_bound(g_cut)
        return gauss + 2.0 * _PSI_HAT_DECAY / (g_cut - 0.5)

    def spatial_force_tail_bound(self, g_cut: int) -> float:
        gauss = self._gauss.spatial_force_tail_bound(g_cut)
        osc = _PSI_HAT_PRIME_DECAY + TWO_PI * self.n0 * _PSI_HAT_DECAY
        return gauss + 2.0 * osc / (g_cut - 0.5)


class SmoothedInverseSquarePotential(Potential):
    """khat(t) = g(t) with g a smooth positive even interpolant of 1/t^2.

    g(t) = 1 / (t^2 + s(t)) with s(t) = exp(1 - 1/(1 - t^2)) inside |t| < 1
    and s = 0 outside, so g(n) = 1/n^2 exactly at every nonzero integer and
    g(0) = 1.  The spatial k is recovered by splitting the inverse transform
    at |t| = 1: the outer piece has the closed form

        2 integral_1^inf cos(a t)/t^2 dt = 2 [cos a - a (pi/2 - Si(a))],

    a = 2 pi |y|, and the inner piece is a smooth compact quadrature.  k has
    a |y|-type kink at the origin (g only decays like t^-2), so k_prime(0)
    is reported as 0 by even symmetry.
    """

    name = "smoothed_inverse_square"
    khat_nonneg = True
    has_spatial_envelope = False

    @staticmethod
    def _g(t):
        t = np.asarray(t, dtype=float)
        s = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        u = 1.0 - t[inside] ** 2
        s[inside] = np.exp(1.0 - 1.0 / u)
        return 1.0 / (t * t + s)

    def k_hat(self, xi):
        return self._g(xi)

    def k(self, rho):
        rho = np.asarray(rho, dtype=float)
        scalar = rho.ndim == 0
        rho = np.atleast_1d(rho)
        out = np.empty_like(rho)
        for i, y in enumerate(np.abs(rho)):
            a = TWO_PI * y
            inner, _ = quad(
                lambda t: self._g(t) * math.cos(a * t),
                0.0,
                1.0,
                epsabs=1e-13,
                epsrel=1e-13,
                limit=max(100, int(y) * 4 + 50),
            )
            si, _ci = sici(a)
            out[i] = 2.0 * inner + 2.0 * (math.cos(a) - a * (np.pi / 2.0 - si))
        return float(out[0]) if scalar else out

    def k_prime(self, rho):
        rho = np.asarray(rho, dtype=float)
        scalar = rho.ndim == 0
        rho = np.atleast_1d(rho)
        out = np.empty_like(rho)
        for i, y in enumerate(rho):
            ya = abs(y)
            if ya == 0.0:
                out[i] = 0.0
                continue
            a = TWO_PI * ya
            inner, _ = quad(
                lambda t: t * self._g(t) * math.sin(a * t),
                0.0,
                1.0,
                epsabs=1e-13,
                epsrel=1e-13,
                limit=max(100, int(ya) * 4 + 50),
            )
            si, _ci = sici(a)
            out[i] = math.copysign(-2.0 * TWO_PI * inner - 2.0 * TWO_PI * (np.pi / 2.0 - si), y)
        return float(out[0]) if scalar else out

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        if p == 0:
            # integral comparison: sum_{n>M} n^-2 lies in (1/(M+1), 1/M)
            return 1.0 / m_cut
        raise UnsupportedOperationError(
            "smoothed_inverse_square: sum n^p khat(n) diverges for p >= 1"
        )


class TabulatedPotential(Potential):
    """Spectral-only potential given by a finite coefficient table.

    coeffs[i] is khat(i+1); the user supplies tail_constant bounding
    sum_{n > len(coeffs)} |khat(n)|.  Injects arbitrary mode sequences into
    the spectral machinery; no spatial side exists.
    """

    name = "tabulated"

    def __init__(self, coeffs, tail_constant: float):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("coeffs must be a nonempty 1-D sequence")
        if tail_constant < 0 or not np.isfinite(tail_constant):
            raise ValueError("tail_constant must be finite and nonnegative")
        self.tail_constant = float(tail_constant)
        self.khat_nonneg = bool(np.all(self.coeffs >= 0.0)) and tail_constant == 0.0

    def params(self) -> dict:
        return {"n_coeffs": self.coeffs.size, "tail": self.tail_constant}

    def k_hat(self, xi):
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
        n = np.rint(xi_arr).astype(int)
        if not np.allclose(xi_arr, n, atol=1e-12):
            raise UnsupportedOperationError("tabulated: khat known only at integers")
        na = np.abs(n)
        out = np.zeros_like(xi_arr)
        known = (na >= 1) & (na <= self.coeffs.size)
        out[known] = self.coeffs[na[known] - 1]
        return float(out[0]) if np.ndim(xi) == 0 else out

    def k_hat_integers(self, m_cut: int) -> np.ndarray:
        out = np.zeros(m_cut)
        take = min(m_cut, self.coeffs.size)
        out[:take] = self.coeffs[:take]
        return out

    def tail_sum_bound(self, m_cut: int, p: int) -> float:
        if p != 0:
            raise UnsupportedOperationError("tabulated: only the p=0 tail is certified")
        rest = self.coeffs[m_cut:] if m_cut < self.coeffs.size else np.empty(0)
        return float(np.abs(rest).sum()) + self.tail_constant


def make_potential(name: str, **params) -> Potential:
    """Factory used by the CLI and config parsing."""
    name = name.strip().lower()
    if name == "gaussian":
        _reject_unknown(params, ())
        return GaussianPotential()
    if name == "paley_wiener":
        _reject_unknown(params, ("m", "beta"))
        return PaleyWienerPotential(int(params.get("m", 4)), float(params.get("beta", 1.0)))
    if name == "bump_perturbed":
        _reject_unknown(params, ("n0",))
        return BumpPerturbedPotential(int(params.get("n0", 10)))
    if name == "smoothed_inverse_square":
        _reject_unknown(params, ())
        return SmoothedInverseSquarePotential()
    if name == "tabulated":
        _reject_unknown(params, ("coeffs", "tail"))
        return TabulatedPotential(params["coeffs"], float(params.get("tail", 0.0)))
    raise ValueError(f"unknown potential: {name!r}")


def _reject_unknown(params: dict, allowed) -> None:
    for key in params:
        if key not in allowed:
            raise ValueError(f"unknown potential parameter: {key!r}")
