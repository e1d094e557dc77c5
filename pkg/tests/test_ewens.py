import math

import numpy as np
import pytest

from cyclesites.coupling import GridSpec, build_coupled_field
from cyclesites.ewens import (
    brute_force_cycle_pmf,
    exact_cycle_pmf,
    sample_crp_cycles,
    sample_feller_cycles,
)
from cyclesites.rng import substream
from cyclesites.special_functions import harmonic_number
from cyclesites.stats import chi_square_critical, chi_square_two_sample


class TestCrpSampler:
    def test_single_element(self):
        for _ in range(5):
            assert sample_crp_cycles(1, 2.0, substream(1, 0)).k == 1

    def test_all_distinct_probability(self):
        # P(K = 3) = t1^3 / (t1)_3 = 1/6 at t1 = 1
        R = 10**5
        rng = substream(2, 0)
        hits = sum(sample_crp_cycles(3, 1.0, rng).k == 3 for _ in range(R))
        p = 1 / 6
        se = math.sqrt(p * (1 - p) / R)
        assert abs(hits / R - p) <= 4 * se

    def test_mean_cycle_count(self):
        # E K(50) = sum_{j=0}^{49} 1/(1+j) = H_50 at t1 = 1
        R = 10**5
        rng = substream(3, 0)
        ks = np.array([sample_crp_cycles(50, 1.0, rng).k for _ in range(R)])
        se = ks.std(ddof=1) / math.sqrt(R)
        assert abs(ks.mean() - harmonic_number(50, 1)) <= 4 * se


class TestFellerSampler:
    def test_two_elements(self):
        # single Bernoulli(1/2)
        R = 10**5
        rng = substream(4, 0)
        hits = sum(sample_feller_cycles(2, 1.0, rng).k == 2 for _ in range(R))
        se = math.sqrt(0.25 / R)
        assert abs(hits / R - 0.5) <= 4 * se

    def test_vanishing_rate(self):
        rng = substream(5, 0)
        ks = [sample_feller_cycles(30, 1e-9, rng).k for _ in range(2000)]
        assert np.mean(np.array(ks) == 1) > 0.999

    def test_domain(self):
        with pytest.raises(ValueError):
            sample_feller_cycles(1, 1.0, substream(5, 1))
        with pytest.raises(ValueError):
            sample_crp_cycles(3, 0.0, substream(5, 2))


class TestExactPmf:
    def test_point_mass(self):
        pmf = exact_cycle_pmf(1, 1.7)
        assert pmf.tolist() == [1.0]

    def test_three_elements_unit_rate(self):
        # signless first-kind Stirling counts over 3! permutations: 2, 3, 1
        pmf = exact_cycle_pmf(3, 1.0)
        assert pmf == pytest.approx([2 / 6, 3 / 6, 1 / 6], abs=1e-14)

    @pytest.mark.parametrize("t1", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_brute_force(self, n, t1):
        exact = exact_cycle_pmf(n, t1)
        brute = brute_force_cycle_pmf(n, t1)
        assert np.max(np.abs(exact - brute)) <= 1e-10

    def test_normalization_and_mean(self):
        for n, t1 in [(5, 0.5), (20, 1.0), (30, 3.0)]:
            pmf = exact_cycle_pmf(n, t1)
            assert abs(pmf.sum() - 1.0) <= 1e-12
            mean = float(pmf @ np.arange(1, n + 1))
            want = 1.0 + sum(t1 / (t1 + k - 1) for k in range(2, n + 1))
            assert abs(mean - want) <= 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            exact_cycle_pmf(31, 1.0)
        with pytest.raises(ValueError):
            brute_force_cycle_pmf(9, 1.0)


class TestSamplerAgreement:
    def test_three_way_chi_square(self):
        # restaurant route, Bernoulli route, and the coupled field's cycle
        # count must be three draws from one law
        n, t1, R = 50, 1.0, 10**5
        rng = substream(6, 0)
        hists = {
            "crp": np.zeros(n),
            "feller": np.zeros(n),
            "field": np.zeros(n),
        }
        for _ in range(R):
            hists["crp"][sample_crp_cycles(n, t1, rng).k - 1] += 1
        for _ in range(R):
            hists["feller"][sample_feller_cycles(n, t1, rng).k - 1] += 1
        grid = GridSpec.corners()
        for _ in range(R):
            fld = build_coupled_field(n, grid, rng)
            hists["field"][int(fld.K[1, 1]) - 1] += 1
        pairs = [("crp", "feller"), ("crp", "field"), ("feller", "field")]
        for a, b in pairs:
            res = chi_square_two_sample(hists[a], hists[b])
            assert res.statistic < chi_square_critical(res.dof, 0.001)
