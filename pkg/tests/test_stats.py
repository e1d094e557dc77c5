import math
from statistics import NormalDist

import numpy as np
import pytest

from cyclesites.rng import substream
from cyclesites.stats import (
    chi_square_critical,
    chi_square_gof,
    chi_square_two_sample,
    cross_covariance,
    cumulants_to_moments,
    ks_statistic,
    moments_to_cumulants,
    summarize,
)


class TestSummarize:
    def test_constant_sample(self):
        summ = summarize(np.full(100, 3.25), 4)
        assert summ.cumulants[0] == 3.25
        for j in range(1, 4):
            assert summ.cumulants[j] == pytest.approx(0.0, abs=1e-12)

    def test_two_point_sample(self):
        summ = summarize([0.0, 2.0], 2)
        assert summ.cumulants[0] == 1.0
        assert summ.cumulants[1] == 1.0  # plug-in central second moment

    def test_poisson_cumulants(self):
        R = 10**5
        rng = substream(1, 0)
        samples = rng.poisson(3.0, R).astype(float)
        summ = summarize(samples, 3, rng=substream(1, 1))
        for j in range(3):
            assert abs(summ.cumulants[j] - 3.0) <= 5 * summ.se[j]

    def test_gamma_cumulants(self):
        # kappa_j = alpha (j-1)! / beta**j
        alpha, beta = 2.5, 1.7
        R = 10**5
        rng = substream(2, 0)
        samples = rng.gamma(alpha, 1 / beta, R)
        summ = summarize(samples, 4, rng=substream(2, 1))
        for j in range(1, 5):
            want = alpha * math.factorial(j - 1) / beta**j
            assert abs(summ.cumulants[j - 1] - want) <= 5 * summ.se[j - 1]

    def test_recursion_inverts(self):
        rng = substream(3, 0)
        x = rng.standard_normal(500) * 1.3 + 0.4
        raw = [float(np.mean(x**r)) for r in range(1, 7)]
        back = cumulants_to_moments(moments_to_cumulants(raw))
        for a, b in zip(raw, back):
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_bootstrap_deterministic(self):
        x = substream(4, 0).standard_normal(2000)
        a = summarize(x, 4)
        b = summarize(x, 4)
        assert a.se == b.se

    def test_validation(self):
        with pytest.raises(ValueError):
            summarize([], 2)
        with pytest.raises(ValueError):
            summarize([1.0], 9)


class TestCrossCovariance:
    def test_self_covariance_is_variance(self):
        x = substream(5, 0).standard_normal(4000)
        est = cross_covariance(x, x)
        assert est.estimate == pytest.approx(float(np.var(x)), rel=1e-12)

    def test_independent_streams(self):
        R = 10**5
        a = substream(6, 0).standard_normal(R)
        b = substream(6, 1).standard_normal(R)
        est = cross_covariance(a, b)
        assert abs(est.estimate) <= 4 * est.se

    def test_bilinearity(self):
        b = substream(7, 0).standard_normal(3000)
        est = cross_covariance(2 * b, b)
        assert est.estimate == pytest.approx(2 * float(np.var(b)), rel=1e-14)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cross_covariance([1.0, 2.0], [1.0])


class TestKsStatistic:
    def test_single_point_at_zero(self):
        assert ks_statistic([0.0]) == pytest.approx(0.5, abs=1e-15)

    def test_exact_quantile_grid(self):
        m = 100
        nd = NormalDist()
        xs = [nd.inv_cdf((i - 0.5) / m) for i in range(1, m + 1)]
        assert ks_statistic(xs) <= 0.5 / m + 1e-12

    def test_total_separation(self):
        m = 100
        nd = NormalDist()
        xs = [nd.inv_cdf((i - 0.5) / m) + 10.0 for i in range(1, m + 1)]
        assert ks_statistic(xs) >= 0.999

    def test_validation(self):
        with pytest.raises(ValueError):
            ks_statistic([])
        with pytest.raises(ValueError):
            ks_statistic([0.0], cdf="uniform")


class TestChiSquare:
    def test_identical_histograms(self):
        h = np.array([40, 30, 20, 10])
        res = chi_square_two_sample(h, h)
        assert res.statistic == 0.0

    def test_same_law_calibration(self):
        rng = substream(8, 0)
        draws = rng.poisson(4.0, 2 * 10**4)
        a, b = draws[: 10**4], draws[10**4 :]
        bins = np.arange(0, 16)
        hist_a = np.array([(a == v).sum() for v in bins])
        hist_b = np.array([(b == v).sum() for v in bins])
        res = chi_square_two_sample(hist_a, hist_b)
        assert res.statistic < chi_square_critical(res.dof, 0.001)

    def test_disjoint_supports(self):
        a = np.array([50, 50, 0, 0])
        b = np.array([0, 0, 50, 50])
        res = chi_square_two_sample(a, b)
        assert res.statistic >= a.sum() + b.sum() - 1e-9

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            chi_square_two_sample([0, 0], [0, 0])

    def test_gof_exact_fit(self):
        probs = np.array([0.5, 0.3, 0.2])
        observed = 1000 * probs
        res = chi_square_gof(observed, probs)
        assert res.statistic == pytest.approx(0.0, abs=1e-12)

    def test_gof_pools_light_bins(self):
        probs = np.array([0.8, 0.1, 0.05, 0.03, 0.02])
        rng = substream(9, 0)
        observed = np.bincount(
            rng.choice(len(probs), size=50, p=probs), minlength=len(probs)
        )
        res = chi_square_gof(observed, probs)
        # 50 draws: several expected counts below 5 must have been merged
        assert res.dof < len(probs) - 1

    def test_critical_value_monotone(self):
        assert chi_square_critical(10, 0.001) > chi_square_critical(10, 0.01)
