"""Statistics tests: point estimates, bootstrap, outlier classification."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootbench.errors import EmptyInput, InsufficientData
from bootbench.stats import (
    OutlierCounts,
    bootstrap,
    bootstrap_stats,
    classify_outliers,
    point_mean,
    point_stddev,
)

import oracles


# ---------------------------------------------------------------------------
# Point estimates


def test_point_mean_examples():
    assert point_mean([2.0]) == 2.0
    assert point_mean([1.0, 2.0, 3.0]) == 2.0
    with pytest.raises(EmptyInput):
        point_mean([])


def test_point_mean_matches_compensated_oracle():
    gen = random.Random(1234)
    xs = [gen.uniform(1e-6, 1e6) for _ in range(1000)]
    expected = oracles.mean_kahan(xs)
    assert abs(point_mean(xs) - expected) <= 1e-12 * abs(expected)


def test_point_stddev_examples():
    assert point_stddev([5.0, 5.0, 5.0]) == 0.0
    assert point_stddev([1.0, 3.0]) == pytest.approx(math.sqrt(2), rel=1e-12)
    with pytest.raises(InsufficientData):
        point_stddev([1.0])


def test_point_stddev_matches_two_pass_oracle():
    gen = random.Random(99)
    xs = [gen.gauss(50.0, 7.0) for _ in range(100)]
    expected = math.sqrt(oracles.variance_two_pass(xs))
    assert abs(point_stddev(xs) - expected) <= 1e-10 * expected


@given(st.lists(st.floats(min_value=-1e9, max_value=1e9), min_size=2, max_size=50),
       st.randoms())
def test_point_estimates_permutation_invariant(xs, rng):
    shuffled = list(xs)
    rng.shuffle(shuffled)
    assert point_mean(xs) == point_mean(shuffled)
    assert point_stddev(xs) == point_stddev(shuffled)


# ---------------------------------------------------------------------------
# Bootstrap


def test_constant_data_collapses_exactly():
    for resamples, confidence in ((1, 0.5), (100, 0.95), (10_000, 0.99)):
        mean = bootstrap([7.0] * 4, "mean", resamples, confidence, seed=3)
        std = bootstrap([7.0] * 4, "stddev", resamples, confidence, seed=3)
        assert (mean.point, mean.lower, mean.upper) == (7.0, 7.0, 7.0)
        assert (std.point, std.lower, std.upper) == (0.0, 0.0, 0.0)


def test_bootstrap_matches_independent_oracle_bitwise():
    xs = [1.0, 2.0, 3.0]
    for statistic in ("mean", "stddev"):
        est = bootstrap(xs, statistic, 20, 0.95, seed=42)
        point, lower, upper = oracles.bootstrap(xs, statistic, 20, 0.95, seed=42)
        assert est.point == point
        assert est.lower == lower
        assert est.upper == upper


def test_bootstrap_two_point_distribution():
    # all four equally likely resamples of [1, 2] have means {1.0, 1.5, 1.5, 2.0}
    xs = [1.0, 2.0]
    resamples = 20_000
    est = bootstrap(xs, "mean", resamples, 0.5, seed=7)
    assert est.point == 1.5
    from bootbench import rng
    counts = {1.0: 0, 1.5: 0, 2.0: 0}
    gen = rng.SplitMix64(7)
    for _ in range(resamples):
        mean = (xs[gen.next_index(2)] + xs[gen.next_index(2)]) / 2
        counts[mean] += 1
    for value, probability in ((1.0, 0.25), (1.5, 0.5), (2.0, 0.25)):
        assert abs(counts[value] / resamples - probability) < 0.02


def test_bootstrap_rejects_insufficient_data():
    with pytest.raises(InsufficientData):
        bootstrap([1.0], "mean", 10, 0.95, seed=0)
    with pytest.raises(ValueError):
        bootstrap([1.0, 2.0], "mean", 0, 0.95, seed=0)
    with pytest.raises(ValueError):
        bootstrap([1.0, 2.0], "median", 10, 0.95, seed=0)  # type: ignore[arg-type]


def test_bootstrap_deterministic_bit_for_bit():
    gen = random.Random(5)
    xs = [gen.uniform(10, 20) for _ in range(40)]
    a = bootstrap(xs, "mean", 5000, 0.9, seed=11)
    b = bootstrap(xs, "mean", 5000, 0.9, seed=11)
    assert a == b


def test_bootstrap_ordering_and_median_proximity():
    gen = random.Random(21)
    xs = [gen.uniform(0, 100) for _ in range(30)]
    n = len(xs)
    for statistic in ("mean", "stddev"):
        est = bootstrap(xs, statistic, 2000, 0.95, seed=2)
        assert est.lower <= est.upper
        # point sits within one interval width of the resampled median
        stream = oracles.splitmix_stream(2)
        stats = []
        for _ in range(2000):
            resample = [xs[next(stream) % n] for _ in range(n)]
            m = sum(resample) / n
            if statistic == "mean":
                stats.append(m)
            else:
                stats.append(math.sqrt(sum((v - m) ** 2 for v in resample) / (n - 1)))
        median = oracles.quantile(sorted(stats), 0.5)
        assert abs(est.point - median) <= est.width


def test_bootstrap_stats_bundle():
    xs = [1.0, 2.0, 3.0, 4.0]
    stats = bootstrap_stats(xs, resamples=100, confidence=0.95, seed=9)
    assert stats.sample_count == 4
    assert stats.resample_count == 100
    assert stats.rng_seed == 9
    assert stats.std_dev.point >= 0
    assert stats.std_dev.lower >= 0


def test_block_boundary_consistency():
    # resample counts straddling the vectorisation block size agree with the
    # scalar oracle on the shared prefix of the stream
    xs = [3.0, 1.0, 4.0]
    small = bootstrap(xs, "mean", 50, 0.8, seed=13)
    point, lower, upper = oracles.bootstrap(xs, "mean", 50, 0.8, seed=13)
    assert (small.point, small.lower, small.upper) == (point, lower, upper)


# ---------------------------------------------------------------------------
# Outliers


def test_outliers_single_high_severe():
    xs = [1.0, 1.0, 1.0, 1.0, 1.0, 100.0]
    counts = classify_outliers(xs)
    assert counts == OutlierCounts(0, 0, 0, 1)
    assert oracles.tukey_counts(xs) == (0, 0, 0, 1)


def test_outliers_tight_data():
    assert classify_outliers([1.0, 2.0, 3.0, 4.0]) == OutlierCounts()


def test_outliers_constant_data():
    assert classify_outliers([5.0] * 8) == OutlierCounts()


def test_outliers_insufficient():
    with pytest.raises(InsufficientData):
        classify_outliers([1.0, 2.0, 3.0])


@settings(max_examples=200)
@given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=4, max_size=60))
def test_outliers_match_oracle(xs):
    counts = classify_outliers(xs)
    assert (counts.low_severe, counts.low_mild, counts.high_mild,
            counts.high_severe) == oracles.tukey_counts(xs)


def test_quantile_matches_oracle_on_random_data():
    from bootbench.stats import _quantile_sorted
    gen = random.Random(77)
    values = np.sort(np.array([gen.uniform(-5, 5) for _ in range(101)]))
    for q in (0.0, 0.025, 0.25, 0.5, 0.75, 0.975, 1.0):
        assert _quantile_sorted(values, q) == oracles.quantile(values.tolist(), q)
