#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback path.

Runs both implementations on the same inputs, times them after a warmup
(so numba compilation is excluded), and checks they agree to tight relative
tolerance.  The library picks the numba path automatically; set
TORUSENERGY_NO_NUMBA=1 to force the fallback everywhere.

Usage:
    python benchmarks/bench_kernels.py [--repeats 200]
"""

import argparse
import time

import numpy as np

from torusenergy import kernels
from torusenergy.spectral import lattice_modes


def timeit(fn, repeats):
    fn()  # warmup / compile
    t0 = time.perf_counter()
    for _ in range(repeats):
        out = fn()
    return (time.perf_counter() - t0) / repeats, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    print(f"{'kernel':<22} {'shape':<18} {'numpy':>12} {'numba':>12} {'speedup':>9}  agree")
    print("-" * 84)

    for n_pts, m_cut in [(8, 40), (16, 400), (64, 2000)]:
        x = rng.random(n_pts)
        khat = 1.0 / np.arange(1, m_cut + 1) ** 2
        t_np, v_np = timeit(lambda: kernels.energy_1d_numpy(x, khat), args.repeats)
        t_nb, v_nb = timeit(lambda: kernels._energy_1d_jit(x, khat), args.repeats)
        rel = abs(v_np - v_nb) / max(abs(v_np), 1e-300)
        print(
            f"{'energy_1d':<22} {f'N={n_pts} M={m_cut}':<18} {t_np*1e6:>10.1f}us "
            f"{t_nb*1e6:>10.1f}us {t_np/t_nb:>8.1f}x  rel={rel:.1e}"
        )

        t_np, g_np = timeit(lambda: kernels.gradient_1d_numpy(x, khat), args.repeats)
        t_nb, g_nb = timeit(lambda: kernels._gradient_1d_jit(x, khat), args.repeats)
        rel = np.max(np.abs(g_np - g_nb)) / max(np.max(np.abs(g_np)), 1e-300)
        print(
            f"{'gradient_1d':<22} {f'N={n_pts} M={m_cut}':<18} {t_np*1e6:>10.1f}us "
            f"{t_nb*1e6:>10.1f}us {t_np/t_nb:>8.1f}x  rel={rel:.1e}"
        )

    for n_pts, radius in [(4, 8.0), (16, 12.0)]:
        xs = rng.random((n_pts, 2))
        modes = lattice_modes(2, radius)
        khat = np.exp(-np.pi * (modes.astype(float) ** 2).sum(axis=1))
        t_np, v_np = timeit(lambda: kernels.energy_rd_numpy(xs, modes, khat), args.repeats)
        t_nb, v_nb = timeit(lambda: kernels._energy_rd_jit(xs, modes, khat), args.repeats)
        rel = abs(v_np - v_nb) / max(abs(v_np), 1e-300)
        print(
            f"{'energy_rd (r=2)':<22} {f'N={n_pts} R={radius}':<18} {t_np*1e6:>10.1f}us "
            f"{t_nb*1e6:>10.1f}us {t_np/t_nb:>8.1f}x  rel={rel:.1e}"
        )

        t_np, g_np = timeit(lambda: kernels.gradient_rd_numpy(xs, modes, khat), args.repeats)
        t_nb, g_nb = timeit(lambda: kernels._gradient_rd_jit(xs, modes, khat), args.repeats)
        rel = np.max(np.abs(g_np - g_nb)) / max(np.max(np.abs(g_np)), 1e-300)
        print(
            f"{'gradient_rd (r=2)':<22} {f'N={n_pts} R={radius}':<18} {t_np*1e6:>10.1f}us "
            f"{t_nb*1e6:>10.1f}us {t_np/t_nb:>8.1f}x  rel={rel:.1e}"
        )


if __name__ == "__main__":
    main()
