"""Turn a benchmarkable closure into resolvable timing samples.

The measurement pipeline for one benchmark is: warm the body up while
estimating its per-invocation cost, pick the smallest batch size ``k`` whose
total runtime clears a multiple of the clock resolution, then time
``plan.samples`` batches of exactly ``k`` invocations each. Per-iteration
times are exact rationals (total elapsed over ``k``), converted to floats
only at the statistics boundary.

Warmup observations are never part of the sample set. The batch size is
frozen after estimation and shared by all samples, so per-iteration times
are directly comparable for resampling.

The measurement loop is strictly single-threaded: one thread reads the clock
and invokes the body. The body itself may use internal parallelism. Distinct
benchmarks must not be measured concurrently in one process.
"""

from __future__ import annotations

import contextlib
import gc
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from .chrono import Clock, ClockModel
from .errors import MeasurementFailure

Body = Callable[[], Any]
Hook = Callable[[], None]

_MASK64 = (1 << 64) - 1
_FNV_PRIME = 0x100000001B3
_FNV_BASIS = 0xCBF29CE484222325


@dataclass(frozen=True)
class MeasurementPlan:
    """Statistical knobs for one benchmark run."""

    samples: int = 100
    resamples: int = 100_000
    confidence: float = 0.95
    warmup_time_ns: int = 100_000_000
    resolution_multiple: int = 100

    def __post_init__(self) -> None:
        if self.samples < 2:
            raise ValueError("samples must be at least 2")
        if self.resamples < 1:
            raise ValueError("resamples must be at least 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie in (0, 1)")
        if self.warmup_time_ns < 0:
            raise ValueError("warmup_time_ns must be non-negative")
        if self.resolution_multiple < 1:
            raise ValueError("resolution_multiple must be at least 1")


@dataclass(frozen=True)
class Sample:
    """One timed batch: total elapsed time and the iterations it covered."""

    total_elapsed_ns: int
    iterations: int

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.total_elapsed_ns < 0:
            raise ValueError("total_elapsed_ns must be non-negative")

    @property
    def per_iteration_ns(self) -> Fraction:
        """Exact per-iteration time; no premature rounding."""
        return Fraction(self.total_elapsed_ns, self.iterations)


@dataclass(frozen=True)
class SampleSet:
    """All samples for one benchmark, collected at a fixed batch size."""

    samples: tuple[Sample, ...]
    iterations_per_sample: int
    clock: ClockModel

    def __post_init__(self) -> None:
        if not self.samples:
            raise ValueError("sample set cannot be empty")
        if any(s.iterations != self.iterations_per_sample for s in self.samples):
            raise ValueError("all samples must share one iteration count")

    def per_iteration_values(self) -> list[float]:
        return [float(s.per_iteration_ns) for s in self.samples]


class BlackholeSink:
    """Consumes benchmark results so the measured work stays observable.

    Every result is folded into an escaping 64-bit digest, giving optimizers
    (tracing JITs, natively compiled kernels behind a foreign call) a live
    data dependency they cannot prove dead. A source-level discard would not;
    the digest write to a heap object that outlives the measurement is the
    opaque consumption point. ``None`` results are counted but not folded.
    """

    __slots__ = ("consumed", "digest")

    def __init__(self) -> None:
        self.consumed = 0
        self.digest = _FNV_BASIS

    def consume(self, value: Any) -> None:
        self.consumed += 1
        if value is None:
            return
        try:
            token = hash(value)
        except TypeError:
            token = id(value)
        self.digest = ((self.digest ^ (token & _MASK64)) * _FNV_PRIME) & _MASK64


_default_sink = BlackholeSink()


def sink_consume(value: Any) -> None:
    """Consume ``value`` through the process-wide sink."""
    _default_sink.consume(value)


@contextlib.contextmanager
def _gc_suppressed() -> Iterator[None]:
    """Collector pauses inside timed regions show up as multi-millisecond
    outliers, so sampling runs with automatic collection off (as timeit
    does); prior state is restored afterwards."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def warmup(body: Body, plan: MeasurementPlan, clock: Clock) -> Fraction:
    """Run ``body`` for at least the plan's warmup time (at least once).

    Returns the mean per-invocation duration observed, as an exact rational.
    A zero warmup time degenerates to a single invocation.
    """
    start = clock.now()
    invocations = 0
    while True:
        body()
        invocations += 1
        elapsed = clock.now() - start
        if elapsed >= plan.warmup_time_ns:
            break
    return Fraction(elapsed, invocations)


def estimate_iterations(
    per_invocation_estimate: Fraction | float | int,
    clock: ClockModel,
    plan: MeasurementPlan,
) -> int:
    """Smallest batch size whose total runtime clears the resolution floor.

    Returns the least ``k >= 1`` with ``k * max(estimate, 1ns)`` at or above
    ``plan.resolution_multiple`` times the clock resolution. Estimates below
    1 ns are clamped so ``k`` stays bounded.
    """
    estimate = Fraction(per_invocation_estimate)
    if estimate < 0:
        raise ValueError("per-invocation estimate must be non-negative")
    floor = Fraction(plan.resolution_multiple) * Fraction(clock.resolution_ns)
    k = math.ceil(floor / max(estimate, Fraction(1)))
    return max(1, k)


def collect_samples(
    body: Body,
    k: int,
    plan: MeasurementPlan,
    clock: Clock,
    sink: BlackholeSink,
) -> SampleSet:
    """Time ``plan.samples`` batches of ``k`` invocations each.

    Each batch sits between exactly two clock reads; every invocation's
    result goes to the sink. The first body failure propagates as a
    :class:`MeasurementFailure` annotated with the sample index.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    samples = []
    with _gc_suppressed():
        for sample_index in range(plan.samples):
            start = clock.now()
            try:
                for _ in range(k):
                    sink.consume(body())
            except Exception as exc:
                raise MeasurementFailure("body", sample_index, str(exc)) from exc
            stop = clock.now()
            samples.append(Sample(total_elapsed_ns=stop - start, iterations=k))
    return SampleSet(tuple(samples), k, clock.model)


def measure_advanced(
    setup: Optional[Hook],
    timed_body: Body,
    teardown: Optional[Hook],
    k: int,
    plan: MeasurementPlan,
    clock: Clock,
    sink: BlackholeSink,
) -> SampleSet:
    """Like :func:`collect_samples`, with per-sample setup and teardown
    excluded from the timed region.

    For each sample: setup runs, then two clock reads bracket exactly the
    ``k`` invocations of ``timed_body``, then teardown runs. Setup and
    teardown failures are reported with their own phase, distinct from
    timed-body failures.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    samples = []
    with _gc_suppressed():
        for sample_index in range(plan.samples):
            if setup is not None:
                try:
                    setup()
                except Exception as exc:
                    raise MeasurementFailure("setup", sample_index, str(exc)) from exc
            start = clock.now()
            try:
                for _ in range(k):
                    sink.consume(timed_body())
            except Exception as exc:
                raise MeasurementFailure("body", sample_index, str(exc)) from exc
            stop = clock.now()
            if teardown is not None:
                try:
                    teardown()
                except Exception as exc:
                    raise MeasurementFailure(
                        "teardown", sample_index, str(exc)) from exc
            samples.append(Sample(total_elapsed_ns=stop - start, iterations=k))
    return SampleSet(tuple(samples), k, clock.model)
