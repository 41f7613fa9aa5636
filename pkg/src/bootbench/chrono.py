"""Monotonic clock calibration.

The sampler needs two facts about whatever clock it is handed: the smallest
tick it can actually resolve, and what a single read costs. Both are measured
once and carried around as an immutable :class:`ClockModel`, so iteration
counts can later be chosen to keep every timed batch well above the tick size.

A time source is a plain callable returning integer nanoseconds. Production
code uses ``time.perf_counter_ns``; tests inject scripted sources.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable

from .errors import ClockUnusable

TimeSource = Callable[[], int]

DEFAULT_CALIBRATION_REPS = 1000

# A timer read costing 1000x its own resolution means the calibration data is
# garbage; refuse to build a model from it.
_COST_SANITY_FACTOR = 1000


@dataclass(frozen=True)
class ClockModel:
    """Measured properties of a monotonic time source, in nanoseconds."""

    resolution_ns: float
    timer_cost_ns: float
    calibration_reps: int

    def __post_init__(self) -> None:
        if self.resolution_ns <= 0:
            raise ValueError("resolution_ns must be positive")
        if self.timer_cost_ns < 0:
            raise ValueError("timer_cost_ns must be non-negative")
        if self.timer_cost_ns > self.resolution_ns * _COST_SANITY_FACTOR:
            raise ValueError("timer cost implausibly large relative to resolution")


def now() -> int:
    """Read the process-wide monotonic clock (integer nanoseconds)."""
    return time.perf_counter_ns()


def estimate_clock(
    source: TimeSource = now,
    calibration_reps: int = DEFAULT_CALIBRATION_REPS,
) -> ClockModel:
    """Measure the resolution and per-read cost of ``source``.

    Takes ``calibration_reps`` consecutive read pairs. The resolution is the
    median of the nonzero deltas (the median is used rather than the minimum,
    which is noise-sensitive on tickless systems). The per-read cost is the
    median of all deltas, zeros included, so a coarse clock whose reads mostly
    return the same tick reports a near-zero read cost.

    Raises :class:`ClockUnusable` when every observed delta is zero.
    """
    if calibration_reps < 100:
        raise ValueError("calibration_reps must be at least 100")
    reads = [source() for _ in range(calibration_reps + 1)]
    deltas = [b - a for a, b in zip(reads, reads[1:])]
    nonzero = [d for d in deltas if d > 0]
    if not nonzero:
        raise ClockUnusable(
            f"clock did not advance across {calibration_reps} consecutive reads"
        )
    return ClockModel(
        resolution_ns=float(statistics.median(nonzero)),
        timer_cost_ns=float(statistics.median(deltas)),
        calibration_reps=calibration_reps,
    )


@dataclass(frozen=True)
class Clock:
    """A time source paired with its measured model.

    Immutable and safe to share; reading is safe from any thread, but
    comparing timestamps across threads is not part of the contract.
    """

    source: TimeSource
    model: ClockModel

    def now(self) -> int:
        return self.source()


def calibrated_clock(calibration_reps: int = DEFAULT_CALIBRATION_REPS) -> Clock:
    """Calibrate the process monotonic clock and bundle it for the sampler."""
    return Clock(source=now, model=estimate_clock(now, calibration_reps))
