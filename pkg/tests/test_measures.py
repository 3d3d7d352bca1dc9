from itertools import permutations

import numpy as np
import pytest

from jumpfield import d_q, empirical_apply, ks_statistic, wasserstein1_1d, wasserstein_dq


def exhaustive_w1(a, b):
    """Brute-force minimum coupling cost over all assignments."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    return min(
        np.mean(np.abs(a - b[list(p)])) for p in permutations(range(len(b)))
    )


class TestWasserstein1:
    def test_two_point_instance(self):
        # exhaustive minimum over both couplings of {1,3} vs {2,4} is 1.0
        assert wasserstein1_1d([1, 3], [2, 4]) == pytest.approx(1.0)
        assert exhaustive_w1([1, 3], [2, 4]) == pytest.approx(1.0)

    def test_identical_samples(self):
        s = [0.3, -1.2, 5.0]
        assert wasserstein1_1d(s, s) == 0.0

    def test_shifted_point_masses(self):
        assert wasserstein1_1d([0, 0], [1, 1]) == pytest.approx(1.0)

    def test_matches_exhaustive_on_random_instances(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = rng.integers(2, 5)
            a = rng.normal(0, 3, n)
            b = rng.normal(1, 2, n)
            assert wasserstein1_1d(a, b) == pytest.approx(exhaustive_w1(a, b))

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            n = rng.integers(1, 8)
            a, b, c = rng.normal(0, 2, (3, n))
            ab = wasserstein1_1d(a, b)
            assert ab == pytest.approx(wasserstein1_1d(b, a))
            assert ab <= wasserstein1_1d(a, c) + wasserstein1_1d(c, b) + 1e-12

    def test_unequal_sizes_rejected(self):
        with pytest.raises(ValueError):
            wasserstein1_1d([1, 2], [1, 2, 3])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            wasserstein1_1d([], [])


class TestDq:
    def test_zero_distance(self):
        assert d_q(1.7, 1.7, 0.5) == 0.0

    def test_small_gap_linear_branch(self):
        # 0.25 < 0.25**0.5 = 0.5
        assert d_q(0.0, 0.25, 0.5) == pytest.approx(0.25)

    def test_large_gap_concave_branch(self):
        # 4**0.5 = 2 < 4
        assert d_q(0.0, 4.0, 0.5) == pytest.approx(2.0)

    def test_q_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            d_q(0.0, 1.0, 1.0)


class TestWassersteinDq:
    def test_identical_samples(self):
        s = [1.0, 2.0, 4.0]
        bound, exact = wasserstein_dq(s, s, 0.5)
        assert bound == 0.0
        assert exact == 0.0

    def test_monotone_pairing_optimal_here(self):
        # monotone pairing costs (d(0,1)+d(10,11))/2 = 1; crossing costs
        # (sqrt(11)+3)/2 > 1
        bound, exact = wasserstein_dq([0, 10], [1, 11], 0.5)
        assert bound == pytest.approx(1.0)
        assert exact == pytest.approx(1.0)

    def test_exact_never_exceeds_bound(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = rng.integers(2, 9)
            a = rng.normal(0, 5, n)
            b = rng.normal(0, 5, n)
            bound, exact = wasserstein_dq(a, b, 0.7)
            assert exact is not None
            assert exact <= bound + 1e-12

    def test_dominated_by_w1(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = rng.integers(1, 12)
            a = rng.normal(0, 5, n)
            b = rng.normal(2, 1, n)
            bound, _ = wasserstein_dq(a, b, 0.6)
            assert bound <= wasserstein1_1d(a, b) + 1e-12

    def test_exact_refused_for_large_samples(self):
        a = np.arange(11.0)
        bound, exact = wasserstein_dq(a, a + 1, 0.5)
        assert exact is None
        assert bound > 0.0


class TestKs:
    def test_identical_samples_zero_stat(self):
        s = np.array([0.1, 0.4, 0.9])
        stat, _ = ks_statistic(s, s)
        assert stat == 0.0

    def test_single_point_against_uniform_cdf(self):
        stat, _ = ks_statistic([0.5], lambda x: np.clip(x, 0.0, 1.0))
        assert stat == pytest.approx(0.5)

    def test_disjoint_supports(self):
        stat, p = ks_statistic([0.0, 1.0], [10.0, 11.0])
        assert stat == 1.0
        assert p < 0.5

    def test_stat_in_unit_interval_and_monotone_invariant(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a = rng.normal(0, 1, 50)
            b = rng.normal(0.5, 2, 50)
            stat, _ = ks_statistic(a, b)
            assert 0.0 <= stat <= 1.0
            stat2, _ = ks_statistic(np.exp(a), np.exp(b))
            assert stat2 == pytest.approx(stat)


class TestEmpiricalApply:
    def test_constant_function(self):
        assert empirical_apply([3.0, -1.0], lambda x: np.ones_like(x)) == 1.0

    def test_identity_mean(self):
        assert empirical_apply([1, 2, 3], lambda x: x) == pytest.approx(2.0)

    def test_rate_mean_within_bounds(self):
        from jumpfield import Rate

        rate = Rate(kind="tanh", c0=1.0, c1=1.0)
        sample = np.random.default_rng(5).normal(0, 3, 1000)
        val = empirical_apply(sample, rate)
        assert rate.f_lower <= val <= rate.f_upper
