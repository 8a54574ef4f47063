import numpy as np
import pytest

from fermicorr.sequences import UnfoldedSequence
from fermicorr.stats import (
    InsufficientDataError,
    estimate_pair_correlation,
    estimate_pair_correlation_pooled,
    curve_distance,
)


def _uniform_seq(rng, n, density=1.0):
    u = np.sort(rng.uniform(0.0, n / density, size=n))
    u = u[np.concatenate(([True], np.diff(u) > 0))]
    return UnfoldedSequence(u)


class TestEstimator:
    def test_integer_lattice_unit_bins(self):
        seq = UnfoldedSequence(np.arange(1.0, 101.0))
        est = estimate_pair_correlation(seq, w_max=3.0, bin_width=1.0)
        # each eligible left point sees exactly one neighbor per integer gap;
        # right-closed bins put gap k into bin k-1
        assert est.m_eff == 97
        np.testing.assert_allclose(est.values, [1.0, 1.0, 1.0])

    def test_poisson_sequence_flat(self):
        # fixed-seed statistical check: per-bin noise is ~4.5% at these
        # counts, so the 10% band is ~2.2 sigma and the seed is pinned
        seq = _uniform_seq(np.random.default_rng(34), 10_000)
        est = estimate_pair_correlation(seq, w_max=3.0, bin_width=0.05)
        sel = est.bin_centers >= 0.1
        assert np.all(est.values[sel] >= 0.9)
        assert np.all(est.values[sel] <= 1.1)

    def test_all_gaps_beyond_window(self):
        seq = UnfoldedSequence(10.0 * np.arange(1.0, 101.0))
        est = estimate_pair_correlation(seq, w_max=3.0, bin_width=0.5)
        assert est.pair_counts.sum() == 0
        np.testing.assert_allclose(est.values, 0.0)

    def test_window_correctness_vs_brute_force(self, rng):
        w = np.sort(rng.uniform(0.0, 120.0, size=240))
        w = w[np.concatenate(([True], np.diff(w) > 0))]
        seq = UnfoldedSequence(w)
        w_max = 2.0
        est = estimate_pair_correlation(seq, w_max=w_max, bin_width=0.25)
        cutoff = w[-1] - w_max
        brute = sum(1 for i in range(len(w)) for j in range(i + 1, len(w))
                    if w[j] - w[i] <= w_max and w[i] <= cutoff)
        assert int(est.pair_counts.sum()) == brute

    def test_binning_merge_is_exact(self, rng):
        seq = _uniform_seq(rng, 3000)
        fine = estimate_pair_correlation(seq, w_max=3.0, bin_width=0.05)
        coarse = estimate_pair_correlation(seq, w_max=3.0, bin_width=0.10)
        np.testing.assert_array_equal(fine.pair_counts.reshape(-1, 2).sum(axis=1),
                                      coarse.pair_counts)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            estimate_pair_correlation(UnfoldedSequence(np.arange(10.0)), 3.0, 0.5)

    def test_bad_binning(self, rng):
        seq = _uniform_seq(rng, 100)
        with pytest.raises(ValueError):
            estimate_pair_correlation(seq, w_max=3.0, bin_width=0.7)  # not a divisor
        with pytest.raises(ValueError):
            estimate_pair_correlation(seq, w_max=1.0, bin_width=2.0)

    def test_consistency_under_doubling(self):
        rng = np.random.default_rng(34)
        l2 = {}
        for n in (10_000, 20_000):
            est = estimate_pair_correlation(_uniform_seq(rng, n), w_max=3.0, bin_width=0.05)
            flat = np.ones_like(est.bin_centers)
            l2[n] = curve_distance(est, flat, w_low=0.1)["l2"]
        assert 1.2 <= l2[10_000] / l2[20_000] <= 1.8


class TestPooling:
    def test_pooled_counts_and_m_eff_add(self, rng):
        seqs = [_uniform_seq(rng, 500) for _ in range(4)]
        parts = [estimate_pair_correlation(s, 2.0, 0.25) for s in seqs]
        pooled = estimate_pair_correlation_pooled(seqs, 2.0, 0.25)
        np.testing.assert_array_equal(pooled.pair_counts,
                                      np.sum([p.pair_counts for p in parts], axis=0))
        assert pooled.m_eff == sum(p.m_eff for p in parts)
        assert pooled.n_points_used == sum(len(s) for s in seqs)

    def test_no_cross_sequence_pairs(self, rng):
        # two short far-apart blocks pooled: counts must equal the per-block sums
        a = UnfoldedSequence(np.arange(0.0, 60.0))
        b = UnfoldedSequence(np.arange(1000.0, 1060.0))
        pooled = estimate_pair_correlation_pooled([a, b], 3.0, 1.0)
        single = estimate_pair_correlation(a, 3.0, 1.0)
        np.testing.assert_array_equal(pooled.pair_counts, 2 * single.pair_counts)

    def test_per_sequence_minimum_enforced(self, rng):
        with pytest.raises(InsufficientDataError):
            estimate_pair_correlation_pooled(
                [_uniform_seq(rng, 100), UnfoldedSequence(np.arange(5.0))], 2.0, 0.25)


class TestCurveDistance:
    def test_identical_curves(self, rng):
        est = estimate_pair_correlation(_uniform_seq(rng, 200), 2.0, 0.25)
        d = curve_distance(est, est.values, w_low=0.25)
        assert d == {"l_inf": 0.0, "l2": 0.0}

    def test_unit_offset(self, rng):
        est = estimate_pair_correlation(UnfoldedSequence(10.0 * np.arange(100.0)), 2.0, 0.25)
        # estimate is identically 0 here; theory identically 1
        d = curve_distance(est, np.ones(8), w_low=0.125)
        assert d["l_inf"] == pytest.approx(1.0)
        assert d["l2"] == pytest.approx(1.0)

    def test_poisson_vs_flat(self):
        est = estimate_pair_correlation(_uniform_seq(np.random.default_rng(34), 10_000),
                                        3.0, 0.05)
        d = curve_distance(est, np.ones_like(est.bin_centers), w_low=0.1)
        assert d["l_inf"] <= 0.1

    def test_binning_mismatch(self, rng):
        est = estimate_pair_correlation(_uniform_seq(rng, 200), 2.0, 0.25)
        with pytest.raises(ValueError, match="mismatch"):
            curve_distance(est, np.ones(5), w_low=0.25)

    def test_w_low_below_first_center(self, rng):
        est = estimate_pair_correlation(_uniform_seq(rng, 200), 2.0, 0.25)
        with pytest.raises(ValueError, match="w_low"):
            curve_distance(est, np.ones(8), w_low=0.01)
