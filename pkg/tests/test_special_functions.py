import math
from fractions import Fraction

import numpy as np
import pytest

from cyclesites.special_functions import (
    HarmonicSpec,
    StirlingCache,
    floor_power,
    harmonic,
    harmonic_number,
    polylog_neg,
    polylog_neg_array,
    polylog_neg_series,
    rising_factorial,
    stirling2,
    zeta_partial,
)


def block_count_census(d):
    """Independent oracle: count partitions of [d] by block count through an
    iterative sweep of restricted growth strings."""
    counts = [0] * (d + 1)
    a = [0] * d
    m = [0] * d
    if d == 1:
        return [0, 1]
    while True:
        counts[m[d - 1] + 1] += 1
        i = d - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return counts
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, d):
            a[j] = 0
            m[j] = m[i]


class TestStirling:
    def test_trivial_values(self):
        assert stirling2(3, 3) == 1
        assert stirling2(3, 1) == 1
        assert stirling2(0, 0) == 1
        assert stirling2(5, 0) == 0
        assert stirling2(4, 6) == 0

    def test_four_choose_two_blocks(self):
        # enumerated by the census oracle: partitions of {1,2,3,4} with 2 blocks
        assert stirling2(4, 2) == 7

    @pytest.mark.parametrize("d", range(1, 13))
    def test_matches_enumeration(self, d):
        census = block_count_census(d)
        for k in range(d + 1):
            assert stirling2(d, k) == census[k]

    def test_recurrence_holds_everywhere(self):
        cache = StirlingCache(20)
        for n in range(20):
            for k in range(1, n + 2):
                assert cache.get(n + 1, k) == cache.get(n, k - 1) + k * cache.get(n, k)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            stirling2(65, 1)
        with pytest.raises(ValueError):
            stirling2(-1, 0)
        with pytest.raises(ValueError):
            StirlingCache(-2)


class TestHarmonic:
    def test_single_terms(self):
        assert harmonic(HarmonicSpec(1, 1, 1)) == 1.0
        assert harmonic(HarmonicSpec(2, 2, 2)) == 0.25

    def test_three_term_sum(self):
        # 1 + 1/2 + 1/3 = 11/6, exact by rational arithmetic
        exact = Fraction(11, 6)
        assert harmonic(HarmonicSpec(1, 3, 1)) == pytest.approx(float(exact), rel=1e-15)

    def test_against_fractions(self):
        for m, n, b in [(1, 20, 1), (2, 17, 2), (5, 40, 3)]:
            exact = sum(Fraction(1, k**b) for k in range(m, n + 1))
            assert harmonic(HarmonicSpec(m, n, b)) == pytest.approx(
                float(exact), rel=1e-14
            )

    def test_product_bound(self):
        # H_{m,n}^{(b)} <= prod_i H_{m,n}^{(b_i)} whenever sum b_i <= b
        cases = [
            ((1, 50), 4, [2, 2]),
            ((2, 200), 3, [1, 1, 1]),
            ((3, 30), 5, [2, 3]),
            ((1, 10**4), 2, [1, 1]),
        ]
        for (m, n), b, parts in cases:
            assert sum(parts) <= b
            lhs = harmonic(HarmonicSpec(m, n, b))
            rhs = math.prod(harmonic(HarmonicSpec(m, n, bi)) for bi in parts)
            assert lhs <= rhs

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            HarmonicSpec(0, 3, 1)
        with pytest.raises(ValueError):
            HarmonicSpec(5, 3, 1)
        with pytest.raises(ValueError):
            HarmonicSpec(1, 3, 0)

    def test_empty_shortcut(self):
        assert harmonic_number(0, 1) == 0.0


class TestPolylog:
    def test_order_zero_geometric(self):
        # Li_0(u) = u/(1-u)
        assert polylog_neg(0, 0.5) == pytest.approx(1.0, rel=1e-15)
        assert polylog_neg_series(0, 0.25, 1e-12) == pytest.approx(1 / 3, abs=1e-12)

    def test_zero_argument(self):
        for m in range(6):
            assert polylog_neg(m, 0.0) == 0.0
            assert polylog_neg_series(m, 0.0, 1e-12) == 0.0

    def test_known_values(self):
        # brute-force partial sums of sum l**m u**l, frozen
        assert polylog_neg(2, 0.5) == pytest.approx(6.0, rel=1e-13)
        assert polylog_neg_series(1, 0.5, 1e-12) == pytest.approx(2.0, abs=1e-12)
        assert polylog_neg_series(3, 0.5, 1e-12) == pytest.approx(26.0, abs=1e-10)

    @pytest.mark.parametrize("m", range(9))
    @pytest.mark.parametrize("u", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_closed_form_vs_series(self, m, u):
        closed = polylog_neg(m, u)
        series = polylog_neg_series(m, u, 1e-12)
        assert abs(closed - series) <= 1e-9 * max(1.0, abs(series))

    def test_array_matches_scalar(self):
        u = np.array([0.0, 0.1, 0.5, 0.9])
        vec = polylog_neg_array(3, u)
        for ui, vi in zip(u, vec):
            assert vi == pytest.approx(polylog_neg(3, float(ui)), rel=1e-14)

    def test_derivative_recursion(self):
        # Li_{-(m+1)}(u) = u * d/du Li_{-m}(u), checked by central differences
        h = 1e-6
        for m in range(4):
            for u in (0.2, 0.5, 0.7):
                deriv = (polylog_neg(m, u + h) - polylog_neg(m, u - h)) / (2 * h)
                lhs = polylog_neg(m + 1, u)
                assert lhs == pytest.approx(u * deriv, rel=1e-4)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            polylog_neg(2, 1.0)
        with pytest.raises(ValueError):
            polylog_neg(2, -0.1)
        with pytest.raises(ValueError):
            polylog_neg(-1, 0.5)
        with pytest.raises(ValueError):
            polylog_neg_series(2, 0.999, -1.0)

    def test_series_iteration_cap(self):
        with pytest.raises(RuntimeError):
            polylog_neg_series(8, 0.99, 1e-12, max_terms=10)


class TestRisingFactorial:
    def test_values(self):
        assert rising_factorial(3.7, 0) == 1.0
        assert rising_factorial(1, 4) == 24.0
        assert rising_factorial(2, 3) == 24.0

    def test_negative_count(self):
        with pytest.raises(ValueError):
            rising_factorial(1.0, -1)


class TestZetaPartial:
    def test_known_values(self):
        assert zeta_partial(2, 1e-10) == pytest.approx(1.6449340668482264, abs=1e-10)
        assert zeta_partial(4, 1e-10) == pytest.approx(1.0823232337111382, abs=1e-10)

    def test_large_order_approaches_one(self):
        assert zeta_partial(40, 1e-12) == pytest.approx(1.0, abs=1e-11)

    def test_domain(self):
        with pytest.raises(ValueError):
            zeta_partial(1, 1e-8)
        with pytest.raises(ValueError):
            zeta_partial(3, 0.0)


class TestFloorPower:
    @pytest.mark.parametrize(
        "n,t,expected",
        [
            (4, 0.5, 2),
            (10**4, 0.25, 10),
            (10**4, 0.75, 1000),
            (10**6, 0.5, 1000),
            (10**6, 0.25, 31),
            (2, 0.5, 1),
            (5, 0.0, 1),
            (10**6, 1.0, 10**6),
            (1000, 1 / 3, 9),
        ],
    )
    def test_values(self, n, t, expected):
        assert floor_power(n, t) == expected

    def test_matches_high_precision_scan(self):
        import mpmath

        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(2, 10**6))
            t = float(rng.random())
            with mpmath.workdps(60):
                want = int(mpmath.floor(mpmath.power(n, mpmath.mpf(t))))
            assert floor_power(n, t) == want

    def test_domain(self):
        with pytest.raises(ValueError):
            floor_power(0, 0.5)
        with pytest.raises(ValueError):
            floor_power(10, 1.5)
