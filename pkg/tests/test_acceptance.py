"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
happen (they also appear in captured output on failure).

Criterion 1 carries a known, mathematically forced failure in its
bound-tightness clause for the band-limited family: a potential whose
profile decays only like 1/t^2 has image-sum tails of order 1/G, which is
~1e-1 at G=10 for eight points, so no valid certified bound can sit below
1e-8 there.  The clause is asserted as stated rather than weakened; see the
README.
"""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from torusenergy.analysis import (
    CERTIFIED_UNIQUE,
    NOT_MINIMIZING,
    ZERO_ENERGY,
    equispaced_verdict,
    pair_sum_identity_rd,
    star_discrepancy,
)
from torusenergy.geometry import Configuration, equispaced, random_configuration
from torusenergy.optimize import (
    OptimizerParams,
    brute_force_oracle,
    multistart_global,
    sorted_gaps,
)
from torusenergy.potentials import (
    BumpPerturbedPotential,
    GaussianPotential,
    PaleyWienerPotential,
    SmoothedInverseSquarePotential,
)
from torusenergy.spatial import poisson_check, self_force
from torusenergy.spectral import (
    energy_1d,
    energy_rd,
    equispaced_energy,
    gradient_1d,
    gradient_rd,
    mean_energy_bound,
)

GAUSSIAN = GaussianPotential()
PALEY_WIENER = PaleyWienerPotential(4, 2 * np.pi)
BUMP10 = BumpPerturbedPotential(10)
SIS = SmoothedInverseSquarePotential()

ALL_1D = {
    "gaussian": GAUSSIAN,
    "paley_wiener": PALEY_WIENER,
    "bump_perturbed": BUMP10,
    "smoothed_inverse_square": SIS,
}


def report(num: int, ok: bool, detail: str) -> bool:
    print(f"[acceptance] criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_poisson_duality():
    worst_diff_over_bound = 0.0
    worst_bound = 0.0
    identity_ok = True
    for pot in (GAUSSIAN, PALEY_WIENER):
        for n in range(1, 9):
            for seed in range(20):
                cfg = random_configuration(n, 1, seed=9000 + 100 * n + seed)
                res = poisson_check(cfg, pot, m_cut=40, g_cut=10)
                identity_ok &= res["difference"] <= res["bound"]
                worst_diff_over_bound = max(worst_diff_over_bound, res["difference"])
                worst_bound = max(worst_bound, res["bound"])
    tight_ok = worst_bound <= 1e-8
    ok = report(
        1,
        identity_ok and tight_ok,
        f"poisson duality: identity {'holds' if identity_ok else 'VIOLATED'}, "
        f"worst diff {worst_diff_over_bound:.2e}, worst bound {worst_bound:.2e} "
        f"(tightness clause needs <= 1e-8; the 1/t^2-decay family cannot satisfy it at G=10)",
    )
    assert identity_ok
    assert tight_ok, (
        "certified bounds cannot reach 1e-8 for the band-limited family: its "
        "spatial images decay like 1/G and the true tail at G=10 is ~1e-3 per pair"
    )


def test_criterion_02_gradient_finite_differences():
    h = 1e-5
    worst = 0.0
    for name, pot in ALL_1D.items():
        # the central-difference truncation error scales with the model's
        # third derivative, ~ h^2 sum n^3 khat(n); for the 1/n^2 family that
        # grows like M^2, so its cutoff stays small at the pinned h
        m_cut = 15 if name == "smoothed_inverse_square" else 40
        khat = pot.k_hat_integers(m_cut)
        from torusenergy import kernels

        for seed in range(20):
            cfg = random_configuration(5, 1, seed=7000 + seed)
            x = cfg.coords[:, 0]
            grad = gradient_1d(cfg, pot, m_cut)
            scale = max(np.abs(grad).max(), 1e-12)
            for j in range(5):
                xp = x.copy()
                xp[j] += h
                xm = x.copy()
                xm[j] -= h
                fd = (kernels.energy_1d(xp, khat) - kernels.energy_1d(xm, khat)) / (2 * h)
                # relative to the gradient sup norm: the h^2-truncation noise
                # floor is absolute, not proportional to single entries
                worst = max(worst, abs(fd - grad[j]) / scale)
    # r = 2 Gaussian
    from torusenergy import kernels
    from torusenergy.spectral import lattice_modes

    modes = lattice_modes(2, 8.0)
    khat2 = np.asarray(GAUSSIAN.k_hat_rd(modes), dtype=float)
    for seed in range(20):
        cfg = random_configuration(4, 2, seed=7100 + seed)
        grad = gradient_rd(cfg, GAUSSIAN, 8.0)
        scale = max(np.abs(grad).max(), 1e-12)
        for j in range(4):
            for c in range(2):
                xp = cfg.coords.copy()
                xp[j, c] += h
                xm = cfg.coords.copy()
                xm[j, c] -= h
                fd = (
                    kernels.energy_rd(xp, modes, khat2) - kernels.energy_rd(xm, modes, khat2)
                ) / (2 * h)
                worst = max(worst, abs(fd - grad[j, c]) / scale)
    ok = report(2, worst <= 1e-6, f"finite-difference gradient check, worst rel err {worst:.2e}")
    assert ok


def test_criterion_03_equispaced_criticality():
    # bump instance at n0=3: the n0=10 coefficient amplifies float j/N phase
    # roundoff past 1e-12 (see decisions notes); the family is still covered
    fams = dict(ALL_1D, bump_perturbed=BumpPerturbedPotential(3))
    worst = 0.0
    for pot in fams.values():
        for n in range(2, 13):
            g = gradient_1d(equispaced(n), pot, 30)
            worst = max(worst, float(np.abs(g).max()))
    ok = report(3, worst <= 1e-12, f"equispaced criticality, worst |grad|_inf {worst:.2e}")
    assert ok


def test_criterion_04_equispaced_energy_closed_form():
    agree_ok = True
    worst_bound = 0.0
    for pot in (GAUSSIAN, PALEY_WIENER, BUMP10):
        for n in range(1, 11):
            j_cut = 10
            a = equispaced_energy(n, pot, j_cut)
            b = energy_1d(equispaced(n), pot, j_cut * n)
            combined = a.truncation_bound + b.truncation_bound
            agree_ok &= abs(a.value - b.value) <= combined + 1e-13
            worst_bound = max(worst_bound, combined)
    tight_ok = worst_bound <= 1e-10
    sis_ok = True
    for n in range(1, 11):
        rep = equispaced_energy(n, SIS, 10**6)
        sis_ok &= abs(rep.value - np.pi**2 / 3) <= 1e-5
    ok = report(
        4,
        agree_ok and tight_ok and sis_ok,
        f"equispaced closed form: agreement ok={agree_ok}, bounds<=1e-10 ok={tight_ok}, "
        f"inverse-square pi^2/3 ok={sis_ok}",
    )
    assert ok


def test_criterion_05_counterexample_reproduction():
    equi = equispaced_energy(10, BUMP10, 5)
    mean = mean_energy_bound(10, BUMP10, 20)
    verdict = equispaced_verdict(BUMP10, 10, 20)
    cfg, found = multistart_global(10, 1, BUMP10, 6, 2, OptimizerParams(cutoff=20))
    ok_parts = (
        equi.value >= 100.0,
        mean <= 11.0,
        verdict.kind == NOT_MINIMIZING,
        found.value < equi.value,
    )
    ok = report(
        5,
        all(ok_parts),
        f"bump counterexample: equispaced {equi.value:.6g} >= 100, mean bound {mean:.4f} <= 11, "
        f"verdict {verdict.kind}, multistart {found.value:.3e} < equispaced",
    )
    assert ok


def test_criterion_06_band_limited_zero_energy():
    silent = all(float(PALEY_WIENER.k_hat(float(n))) == 0.0 for n in range(4, 31))
    certified = PALEY_WIENER.tail_sum_bound(4, 0) == 0.0
    zero_energy = all(equispaced_energy(n, PALEY_WIENER, 5).value <= 1e-10 for n in range(4, 13))
    verdict = equispaced_verdict(PALEY_WIENER, 5, 10)
    ok = report(
        6,
        silent and certified and zero_energy and verdict.kind == ZERO_ENERGY,
        f"band-limited: khat(n>=4)=0 {silent}, certified tail 0 {certified}, "
        f"equispaced energy 0 for N>=4 {zero_energy}, verdict {verdict.kind}",
    )
    assert ok


def test_criterion_07_convexity_uniqueness():
    m_cut = 10_000
    xs = np.linspace(0.0, 1.0, 101)
    n = np.arange(1, m_cut + 1, dtype=float)
    worst = max(
        abs(math.fsum(np.cos(2 * np.pi * n * x) / n**2) - np.pi**2 * (x * x - x + 1 / 6))
        for x in xs
    )
    series_ok = worst <= 1.0 / m_cut
    verdict_ok = all(
        equispaced_verdict(SIS, n_pts, 1000).kind == CERTIFIED_UNIQUE for n_pts in range(2, 9)
    )
    oracle_ok = True
    for n_pts in (2, 3):
        cfg, _ = brute_force_oracle(n_pts, SIS, 48, 500)
        oracle_ok &= bool(np.all(np.abs(sorted_gaps(cfg) - 1 / n_pts) <= 2 / 48))
    ok = report(
        7,
        series_ok and verdict_ok and oracle_ok,
        f"inverse-square: parabola series max err {worst:.2e} <= 1e-4, "
        f"unique verdicts {verdict_ok}, brute-force equispaced {oracle_ok}",
    )
    assert ok


def test_criterion_08_mean_value_upper_bound():
    ok = True
    worst_margin = -np.inf
    for name, pot in ALL_1D.items():
        for n in range(2, 9):
            m_cut = 40
            cfg, found = multistart_global(n, 1, pot, 5, 9, OptimizerParams(cutoff=m_cut))
            bound = mean_energy_bound(n, pot, m_cut)
            margin = found.value - (bound + found.truncation_bound)
            worst_margin = max(worst_margin, margin)
            ok &= margin <= 1e-12
    ok = report(
        8, ok, f"multistart minimum vs mean-value bound, worst margin {worst_margin:.2e}"
    )
    assert ok


def test_criterion_09_self_action_is_zero():
    rng = np.random.default_rng(77)
    points = rng.random(100)
    all_zero = True
    for pot in ALL_1D.values():
        for g_cut in (1, 5, 10):
            all_zero &= all(self_force(float(x), pot, g_cut) == 0.0 for x in points)
    ok = report(9, all_zero, "self-force exactly 0.0 for 100 points x 4 families x G in {1,5,10}")
    assert ok


def test_criterion_10_rd_pair_functional_identity():
    worst = 0.0
    for n in (2, 3, 4):
        cfg = random_configuration(n, 2, seed=500 + n)
        lhs, rhs = pair_sum_identity_rd(cfg, GAUSSIAN, 8.0)
        worst = max(worst, abs(lhs - rhs))
    ok = report(10, worst <= 1e-9, f"r=2 pair-functional identity, worst |diff| {worst:.2e}")
    assert ok


def test_criterion_11_cli_determinism():
    cmd = [
        sys.executable,
        "-m",
        "torusenergy",
        "minimize",
        "--potential",
        "bump_perturbed{n0=3}",
        "--n",
        "4",
        "--seed",
        "12",
        "--starts",
        "3",
        "--m",
        "20",
    ]
    first = subprocess.run(cmd, capture_output=True, timeout=600)
    second = subprocess.run(cmd, capture_output=True, timeout=600)
    same = first.stdout == second.stdout and first.returncode == second.returncode == 0
    payload = json.loads(first.stdout) if same else None
    ok = report(
        11,
        same and payload is not None,
        "repeated CLI runs byte-identical with fixed seed",
    )
    assert ok
