"""Bootstrap resampling over per-iteration times.

Point estimates are the plain sample mean and the Bessel-corrected sample
standard deviation. Interval bounds come from the percentile bootstrap: draw
``resamples`` datasets of size ``len(xs)`` with replacement, recompute the
statistic on each, and read the empirical quantiles at ``(1-c)/2`` and
``1-(1-c)/2``.

Everything here is deterministic given ``(xs, statistic, resamples,
confidence, seed)``; the resampling indices follow the stream contract in
:mod:`bootbench.rng`, and quantiles interpolate linearly between order
statistics: for quantile ``q`` over ``R`` sorted values, ``h = q*(R-1)``,
``result = s[floor(h)] + (h - floor(h)) * (s[floor(h)+1] - s[floor(h)])``.

Constant input is an exact identity (every resample equals the input), so it
short-circuits to zero-width intervals without consuming generator output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import rng
from .errors import EmptyInput, InsufficientData

Statistic = Literal["mean", "stddev"]

# Resample rows per vectorised block; any value gives bit-identical results
# because index generation is keyed on absolute stream position.
_BLOCK_ROWS = 8192


@dataclass(frozen=True)
class BootstrapEstimate:
    """Point value with percentile-bootstrap bounds at a confidence level."""

    point: float
    lower: float
    upper: float
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie in (0, 1)")
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class OutlierCounts:
    """Tukey-fence classification of a sample set."""

    low_severe: int = 0
    low_mild: int = 0
    high_mild: int = 0
    high_severe: int = 0

    @property
    def total(self) -> int:
        return self.low_severe + self.low_mild + self.high_mild + self.high_severe


@dataclass(frozen=True)
class BenchmarkStats:
    """Bootstrap summary of one benchmark's per-iteration times."""

    mean: BootstrapEstimate
    std_dev: BootstrapEstimate
    sample_count: int
    resample_count: int
    rng_seed: int

    def __post_init__(self) -> None:
        if self.sample_count < 2:
            raise ValueError("sample_count must be at least 2")
        if self.std_dev.point < 0 or self.std_dev.lower < 0:
            raise ValueError("standard deviation cannot be negative")


def point_mean(xs: Sequence[float]) -> float:
    """Arithmetic mean. Constant input returns the exact common value."""
    if len(xs) == 0:
        raise EmptyInput("mean of empty input")
    if min(xs) == max(xs):
        return float(xs[0])
    return math.fsum(xs) / len(xs)


def point_stddev(xs: Sequence[float]) -> float:
    """Sample standard deviation (n-1 denominator), two-pass."""
    if len(xs) < 2:
        raise InsufficientData("standard deviation needs at least 2 values")
    if min(xs) == max(xs):
        return 0.0
    m = math.fsum(xs) / len(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def _quantile_sorted(sorted_vals: np.ndarray, q: float) -> float:
    """Linear interpolation between order statistics of an ascending array."""
    h = q * (len(sorted_vals) - 1)
    lo = math.floor(h)
    if lo >= len(sorted_vals) - 1:
        return float(sorted_vals[-1])
    frac = h - lo
    a = float(sorted_vals[lo])
    b = float(sorted_vals[lo + 1])
    return a + frac * (b - a)


def bootstrap(
    xs: Sequence[float],
    statistic: Statistic,
    resamples: int,
    confidence: float,
    seed: int,
) -> BootstrapEstimate:
    """Percentile-bootstrap estimate of ``statistic`` over ``xs``.

    The r-th resample (r = 0..resamples-1) gathers ``xs[i]`` at the indices
    drawn from stream positions ``r*n .. r*n + n - 1``; see module docstring
    for the quantile rule applied to the resampled statistics.
    """
    n = len(xs)
    if n < 2:
        raise InsufficientData("bootstrap needs at least 2 values")
    if resamples < 1:
        raise ValueError("resamples must be at least 1")
    if statistic == "mean":
        point = point_mean(xs)
    elif statistic == "stddev":
        point = point_stddev(xs)
    else:
        raise ValueError(f"unknown statistic {statistic!r}")

    if min(xs) == max(xs):
        return BootstrapEstimate(point, point, point, confidence)

    data = np.asarray(xs, dtype=np.float64)
    stats = np.empty(resamples, dtype=np.float64)
    row = 0
    while row < resamples:
        rows = min(_BLOCK_ROWS, resamples - row)
        idx = rng.index_block(seed, row * n, rows * n, n).reshape(rows, n)
        gathered = data[idx]
        if statistic == "mean":
            stats[row : row + rows] = gathered.mean(axis=1)
        else:
            stats[row : row + rows] = gathered.std(axis=1, ddof=1)
        row += rows

    stats.sort()
    alpha = (1.0 - confidence) / 2.0
    return BootstrapEstimate(
        point=point,
        lower=_quantile_sorted(stats, alpha),
        upper=_quantile_sorted(stats, 1.0 - alpha),
        confidence=confidence,
    )


def bootstrap_stats(
    xs: Sequence[float],
    resamples: int,
    confidence: float,
    seed: int,
) -> BenchmarkStats:
    """Bundle mean and stddev bootstrap estimates for one benchmark."""
    return BenchmarkStats(
        mean=bootstrap(xs, "mean", resamples, confidence, seed),
        std_dev=bootstrap(xs, "stddev", resamples, confidence, seed),
        sample_count=len(xs),
        resample_count=resamples,
        rng_seed=seed,
    )


def classify_outliers(xs: Sequence[float]) -> OutlierCounts:
    """Count values outside the Tukey fences.

    Mild means strictly outside ``[Q1 - 1.5*IQR, Q3 + 1.5*IQR]`` but inside
    the severe fences at ``3*IQR``; the buckets are disjoint. Quartiles use
    the same linear interpolation as the bootstrap quantiles, so a constant
    sample has IQR zero, collapsed fences, and no outliers.
    """
    if len(xs) < 4:
        raise InsufficientData("outlier classification needs at least 4 values")
    ordered = np.sort(np.asarray(xs, dtype=np.float64))
    q1 = _quantile_sorted(ordered, 0.25)
    q3 = _quantile_sorted(ordered, 0.75)
    iqr = q3 - q1
    mild_lo, mild_hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    severe_lo, severe_hi = q1 - 3.0 * iqr, q3 + 3.0 * iqr
    low_severe = int(np.count_nonzero(ordered < severe_lo))
    high_severe = int(np.count_nonzero(ordered > severe_hi))
    low_mild = int(np.count_nonzero(ordered < mild_lo)) - low_severe
    high_mild = int(np.count_nonzero(ordered > mild_hi)) - high_severe
    return OutlierCounts(low_severe, low_mild, high_mild, high_severe)
