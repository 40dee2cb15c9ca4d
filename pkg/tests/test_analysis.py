import math

import numpy as np
import pytest

from torusenergy.analysis import (
    CERTIFIED_UNIQUE,
    INCONCLUSIVE,
    NOT_MINIMIZING,
    ZERO_ENERGY,
    build_f_functional,
    convexity_certificate,
    equidistribution_scan,
    equispaced_verdict,
    f_eval,
    f_functional_rd,
    f_prime,
    f_second,
    pair_sum_f,
    pair_sum_identity_rd,
    star_discrepancy,
)
from torusenergy.geometry import Configuration, equispaced, random_configuration
from torusenergy.optimize import OptimizerParams, brute_force_oracle, multistart_global, sorted_gaps
from torusenergy.potentials import (
    BumpPerturbedPotential,
    GaussianPotential,
    PaleyWienerPotential,
    SmoothedInverseSquarePotential,
)
from torusenergy.spectral import energy_1d, equispaced_energy, mean_energy_bound

# partial zeta sums, frozen from direct summation
H2_1000 = 1.6439345666815597  # sum_{n<=1000} n^-2
SUM_GAUSS = 0.043217405606654005


class TestFFunctional:
    def test_inverse_square_coefficients(self):
        sis = SmoothedInverseSquarePotential()
        f = build_f_functional(sis, 3, 1000)
        assert f.c_n == pytest.approx(2 * H2_1000, rel=1e-13)
        np.testing.assert_allclose(
            f.coefficients[:5], [1, 1 / 4, 1 / 9, 1 / 16, 1 / 25], rtol=1e-15
        )
        assert f.tail2 is None  # sum n^2 khat(n) diverges for this family

    def test_gaussian_normalization(self, gaussian):
        f = build_f_functional(gaussian, 2, 50)
        assert f.c_n == pytest.approx(4 * SUM_GAUSS, rel=1e-12)
        assert f.tail2 is not None and f.tail2 <= 1e-10

    def test_pair_sum_identity_gaussian(self, gaussian):
        cfg = random_configuration(4, 1, seed=5)
        m_cut = 60
        f = build_f_functional(gaussian, 4, m_cut)
        lhs = pair_sum_f(f, cfg)
        rep = energy_1d(cfg, gaussian, m_cut)
        n_pairs = 4 * 3 / 2
        budget = n_pairs * 4 * f.tail0 + rep.truncation_bound + 1e-9
        assert abs(lhs - rep.value) <= budget

    def test_pair_sum_identity_all_families(self, family):
        cfg = random_configuration(5, 1, seed=6)
        m_cut = 50
        f = build_f_functional(family, 5, m_cut)
        lhs = pair_sum_f(f, cfg)
        rep = energy_1d(cfg, family, m_cut)
        budget = 10 * 4 * f.tail0 + rep.truncation_bound + 1e-9
        assert abs(lhs - rep.value) <= budget

    def test_series_value_matches_parabola(self):
        # 4 sum khat(n) cos(2 pi n t) with khat = 1/n^2 tracks the parabola
        sis = SmoothedInverseSquarePotential()
        f = build_f_functional(sis, 2, 4000)
        for t in (0.0, 0.2, 0.5):
            series_only = f_eval(f, t) - f.c_n
            assert series_only / 4 == pytest.approx(
                np.pi**2 * (t * t - t + 1 / 6), abs=4 * f.tail0
            )
        assert f.coefficients.sum() == pytest.approx(np.pi**2 / 6, abs=1e-3)

    def test_domain_check(self, gaussian):
        f = build_f_functional(gaussian, 2, 20)
        with pytest.raises(ValueError):
            f_eval(f, 0.6)
        with pytest.raises(ValueError):
            f_second(f, -0.1)


class TestParabolicSeriesIdentity:
    @pytest.mark.parametrize("m_cut", [100, 10_000])
    def test_max_error_below_reciprocal_cutoff(self, m_cut):
        xs = np.linspace(0.0, 1.0, 101)
        n = np.arange(1, m_cut + 1, dtype=float)
        worst = 0.0
        for x in xs:
            partial = math.fsum(np.cos(2 * np.pi * n * x) / n**2)
            closed = np.pi**2 * (x * x - x + 1 / 6)
            worst = max(worst, abs(partial - closed))
        assert worst <= 1.0 / m_cut


class TestConvexityCertificate:
    def test_inverse_square_strict_via_closed_form(self):
        sis = SmoothedInverseSquarePotential()
        f = build_f_functional(sis, 4, 500)
        cert = convexity_certificate(f)
        assert cert.method == "closed_form"
        assert cert.convex_decreasing and cert.strict
        assert cert.min_f_second == pytest.approx(8 * np.pi**2, rel=1e-14)
        assert cert.max_f_prime == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_certificate_matches_grid_oracle(self, gaussian):
        f = build_f_functional(gaussian, 3, 30)
        cert = convexity_certificate(f, grid_points=256)
        ts = np.linspace(0.0, 0.5, 256)
        grid_second = [f_second(f, t) for t in ts]
        grid_prime = [f_prime(f, t) for t in ts]
        assert cert.min_f_second == pytest.approx(min(grid_second), rel=1e-12)
        assert cert.max_f_prime == pytest.approx(max(grid_prime), rel=1e-12)
        # the truncated Gaussian f is concave at t=0, so no convexity claim
        assert not cert.convex_decreasing

    def test_bump_certificate_well_formed(self):
        b = BumpPerturbedPotential(2)
        f = build_f_functional(b, 3, 20)
        cert = convexity_certificate(f)
        assert cert.method in ("series", "closed_form", "unavailable")
        assert isinstance(cert.convex_decreasing, bool)
        assert not cert.convex_decreasing

    def test_tabulated_without_tail_is_inconclusive(self):
        from torusenergy.potentials import TabulatedPotential

        t = TabulatedPotential([0.5, 0.25], tail_constant=0.01)
        f = build_f_functional(t, 3, 2)
        cert = convexity_certificate(f)
        assert cert.method == "unavailable"
        assert not cert.convex_decreasing and not cert.strict


class TestVerdicts:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_inverse_square_unique(self, n):
        sis = SmoothedInverseSquarePotential()
        verdict = equispaced_verdict(sis, n, 1000)
        assert verdict.kind == CERTIFIED_UNIQUE

    def test_bump_not_minimizing_with_valid_witness(self):
        b = BumpPerturbedPotential(10)
        verdict = equispaced_verdict(b, 10, 20)
        assert verdict.kind == NOT_MINIMIZING
        w = verdict.witness
        assert w["equispaced_energy"] - w["equispaced_bound"] > w["mean_energy_bound"]
        assert w["equispaced_energy"] >= 100.0
        assert w["mean_energy_bound"] <= 11.0

    def test_band_limited_zero_energy(self):
        pw = PaleyWienerPotential(4, 2 * np.pi)
        assert equispaced_verdict(pw, 5, 10).kind == ZERO_ENERGY
        # N=2 keeps live modes at 2 and 4 but the f is not convex and the
        # energy stays below the mean bound: honestly inconclusive
        assert equispaced_verdict(pw, 2, 10).kind == INCONCLUSIVE

    def test_fully_silent_band_limit(self):
        pw = PaleyWienerPotential(4, 1.0)
        for n in (2, 3, 7):
            assert equispaced_verdict(pw, n, 10).kind == ZERO_ENERGY

    def test_gaussian_inconclusive(self, gaussian):
        # concave-at-zero f, tiny equispaced energy: no route certifies
        assert equispaced_verdict(gaussian, 4, 30).kind == INCONCLUSIVE

    def test_verdict_sound_against_brute_force(self):
        sis = SmoothedInverseSquarePotential()
        for n in (2, 3):
            assert equispaced_verdict(sis, n, 500).kind == CERTIFIED_UNIQUE
            cfg, _ = brute_force_oracle(n, sis, 48, 500)
            np.testing.assert_allclose(sorted_gaps(cfg), 1 / n, atol=2 / 48)


class TestStarDiscrepancy:
    def test_equispaced_anchored(self):
        for n in (1, 4, 9):
            assert star_discrepancy(equispaced(n)) == pytest.approx(1 / n, rel=1e-12)

    def test_single_point_at_zero(self):
        assert star_discrepancy(Configuration(np.array([[0.0]]))) == 1.0

    def test_pair(self):
        cfg = Configuration(np.array([[0.0], [0.5]]))
        assert star_discrepancy(cfg) == 0.5

    def test_bounds(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            cfg = Configuration(rng.random((6, 1)))
            d = star_discrepancy(cfg)
            assert 1 / (2 * 6) <= d <= 1.0


class TestScan:
    def test_inverse_square_scan(self):
        sis = SmoothedInverseSquarePotential()
        rows = equidistribution_scan(
            sis, [2, 4, 8], OptimizerParams(cutoff=101), n_starts=6, seed=1, j_cut=2000
        )
        assert len(rows) == 3
        for row in rows:
            assert row["verdict"] == CERTIFIED_UNIQUE
            assert row["star_discrepancy"] <= 1 / row["N"] + 0.02
            assert row["N"] * row["star_discrepancy"] <= 1.1

    def test_gaussian_scan_mean_bound(self, gaussian):
        rows = equidistribution_scan(
            gaussian, [2, 3], OptimizerParams(cutoff=30), n_starts=6, seed=2
        )
        for row in rows:
            assert row["min_energy"] <= row["min_energy_bound_mean"] + 1e-12

    def test_discrepancy_of_certified_minimizers(self):
        sis = SmoothedInverseSquarePotential()
        for n in range(2, 9):
            cfg, _ = multistart_global(n, 1, sis, 8, 3, OptimizerParams(cutoff=101))
            assert n * star_discrepancy(cfg) <= 1.1


class TestRdFunctional:
    def test_identity_random_config(self, gaussian):
        cfg = random_configuration(3, 2, seed=9)
        lhs, rhs = pair_sum_identity_rd(cfg, gaussian, 8.0)
        assert abs(lhs - rhs) <= 1e-9

    def test_value_at_zero_positive(self, gaussian):
        f = f_functional_rd(gaussian, 2, 8.0)
        assert f([0.0, 0.0]) > 0.0
        assert f([0.0, 0.0]) == pytest.approx(2 * f.mode_sum, rel=1e-13)

    def test_evenness(self, gaussian):
        f = f_functional_rd(gaussian, 2, 6.0)
        rng = np.random.default_rng(10)
        for _ in range(10):
            x = rng.uniform(-0.5, 0.5, size=2)
            assert f(x) == pytest.approx(f(-x), rel=1e-12, abs=1e-12)
