import math

import numpy as np
import pytest

from cyclesites.coupling import GridSpec, NormalizedField, block_increment
from cyclesites.rng import substream
from cyclesites.sheet import sample_sheet, sheet_covariance
from cyclesites.stats import cross_covariance, summarize


class TestCovarianceFunction:
    def test_diagonal_corner(self):
        assert sheet_covariance((1.0, 1.0), (1.0, 1.0)) == 1.0

    def test_lower_boundary(self):
        assert sheet_covariance((0.0, 0.7), (1.0, 1.0)) == 0.0
        assert sheet_covariance((0.5, 0.0), (1.0, 1.0)) == 0.0

    def test_interior(self):
        assert sheet_covariance((0.5, 0.5), (1.0, 1.0)) == 0.25

    def test_domain(self):
        with pytest.raises(ValueError):
            sheet_covariance((1.5, 0.5), (1.0, 1.0))


class TestSheetSamples:
    def test_boundary_exact_zero(self):
        sample = sample_sheet(GridSpec.quarters(), substream(1, 0))
        assert np.all(sample.values[0, :] == 0.0)
        assert np.all(sample.values[:, 0] == 0.0)

    def test_corner_variance(self):
        R = 2 * 10**4
        rng = substream(2, 0)
        vals = np.array(
            [sample_sheet(GridSpec.quarters(), rng).values[4, 4] for _ in range(R)]
        )
        sq = (vals - vals.mean()) ** 2
        se = sq.std(ddof=1) / math.sqrt(R)
        assert abs(vals.var() - 1.0) <= 4 * se

    def test_cross_covariance(self):
        R = 2 * 10**4
        rng = substream(3, 0)
        a = np.empty(R)
        b = np.empty(R)
        for r in range(R):
            v = sample_sheet(GridSpec.quarters(), rng).values
            a[r] = v[2, 4]  # (0.5, 1.0)
            b[r] = v[4, 2]  # (1.0, 0.5)
        est = cross_covariance(a, b, rng=substream(3, 1))
        assert abs(est.estimate - 0.25) <= 4 * est.se

    def test_disjoint_block_increments_uncorrelated(self):
        R = 2 * 10**4
        rng = substream(4, 0)
        grid = GridSpec.quarters()
        x = np.empty(R)
        y = np.empty(R)
        for r in range(R):
            sample = sample_sheet(grid, rng)
            norm = NormalizedField(2, grid, sample.values)
            x[r] = block_increment(norm, ((0.0, 0.0), (0.5, 0.5)))
            y[r] = block_increment(norm, ((0.5, 0.5), (1.0, 1.0)))
        corr = float(np.corrcoef(x, y)[0, 1])
        assert abs(corr) <= 4 / math.sqrt(R)

    def test_gaussian_higher_cumulants(self):
        R = 2 * 10**4
        rng = substream(5, 0)
        vals = np.array(
            [sample_sheet(GridSpec.quarters(), rng).values[4, 4] for _ in range(R)]
        )
        summ = summarize(vals, 4, rng=substream(5, 1))
        assert abs(summ.cumulants[2]) <= 5 * summ.se[2]
        assert abs(summ.cumulants[3]) <= 5 * summ.se[3]
