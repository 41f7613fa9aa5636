"""Benchmark registration and the end-to-end measurement pipeline.

A registered benchmark is a name plus a factory that builds its runnable
parts on demand (buffers and other working state are allocated only when the
benchmark actually runs, never at registration). The run pipeline per
benchmark is: warmup, iteration-count estimation, sample collection (simple
or setup-excluding path), bootstrap of mean and standard deviation, outlier
classification, then a single untimed verification invocation.

A verifier failure marks the record but never aborts the remaining
benchmarks; clock failures and body failures during measurement are fatal.
"""

from __future__ import annotations

import datetime as _dt
import fnmatch
import platform
import socket
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

from .chrono import Clock
from .errors import DuplicateName
from .kernels import KernelConfig
from .sampling import (
    BlackholeSink,
    MeasurementPlan,
    SampleSet,
    collect_samples,
    estimate_iterations,
    measure_advanced,
    warmup,
)
from .stats import (
    BenchmarkStats,
    OutlierCounts,
    bootstrap,
    bootstrap_stats,
    classify_outliers,
)

MODE_SIMPLE = "simple"
MODE_ADVANCED = "advanced"


@dataclass
class Runnable:
    """Instantiated closures for one benchmark run.

    ``verify`` receives the output of a final untimed ``body()`` call and
    raises (AssertionError or anything else) to signal a failure.
    """

    body: Callable[[], Any]
    setup: Optional[Callable[[], None]] = None
    teardown: Optional[Callable[[], None]] = None
    verify: Optional[Callable[[Any], None]] = None


@dataclass(frozen=True)
class BenchmarkDef:
    """A registered benchmark: identity, kernel config, and a factory."""

    name: str
    family: str
    config: Optional[KernelConfig]
    mode: str
    factory: Callable[[], Runnable]

    def __post_init__(self) -> None:
        if self.mode not in (MODE_SIMPLE, MODE_ADVANCED):
            raise ValueError(f"mode must be {MODE_SIMPLE!r} or {MODE_ADVANCED!r}")


def benchmark_name(family: str, config: KernelConfig) -> str:
    """Canonical benchmark name; comparisons join on this scheme."""
    return (
        f"{family}/{config.dtype}/n={config.n}"
        f"/teams={config.teams}/tpb={config.threads_per_team}"
    )


def simple_def(
    name: str,
    body: Callable[[], Any],
    *,
    family: str = "synthetic",
    config: Optional[KernelConfig] = None,
    verify: Optional[Callable[[Any], None]] = None,
) -> BenchmarkDef:
    """Wrap a bare closure as a registrable simple-mode benchmark."""
    runnable = Runnable(body=body, verify=verify)
    return BenchmarkDef(name, family, config, MODE_SIMPLE, lambda: runnable)


@dataclass(frozen=True)
class EnvMeta:
    """Environment metadata attached to every record; ``config_label`` is
    the free-form comparison axis (compiler tag, flag set, ...)."""

    hostname: str
    os: str
    cpu_model: str
    build_profile: str
    toolchain_version: str
    timestamp_utc: str
    config_label: str = "default"

    def __post_init__(self) -> None:
        if not self.config_label:
            raise ValueError("config_label must be nonempty")


def _cpu_model() -> str:
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine()


def capture_env(config_label: str = "default") -> EnvMeta:
    """Snapshot the current host environment."""
    return EnvMeta(
        hostname=socket.gethostname(),
        os=platform.platform(),
        cpu_model=_cpu_model(),
        build_profile=f"{platform.python_implementation()}-{platform.python_version()}",
        toolchain_version=platform.python_compiler(),
        timestamp_utc=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        config_label=config_label,
    )


@dataclass(frozen=True)
class Verification:
    status: str  # "pass" | "fail" | "skipped"
    message: str = ""


@dataclass(frozen=True)
class BenchmarkRecord:
    """One benchmark's measured statistics plus everything needed to
    reproduce or compare the run."""

    name: str
    config: Optional[KernelConfig]
    stats: BenchmarkStats
    outliers: OutlierCounts
    env: EnvMeta
    verification: Optional[Verification]
    plan_used: MeasurementPlan


class Registry:
    """Ordered, name-unique collection of benchmark definitions."""

    def __init__(self) -> None:
        self._defs: dict[str, BenchmarkDef] = {}

    def register(self, bdef: BenchmarkDef) -> None:
        if bdef.name in self._defs:
            raise DuplicateName(bdef.name)
        self._defs[bdef.name] = bdef

    def defs(self) -> list[BenchmarkDef]:
        return list(self._defs.values())

    def names(self) -> list[str]:
        return list(self._defs.keys())

    def select(self, patterns: Sequence[str]) -> list[BenchmarkDef]:
        """Definitions whose names match any glob, in registration order.

        An empty pattern list selects everything; zero matches is a valid
        empty result.
        """
        if not patterns:
            return self.defs()
        return [
            bdef
            for bdef in self._defs.values()
            if any(fnmatch.fnmatchcase(bdef.name, p) for p in patterns)
        ]


def _collect(runnable: Runnable, plan: MeasurementPlan, clock: Clock,
             sink: BlackholeSink) -> SampleSet:
    advanced = runnable.setup is not None or runnable.teardown is not None
    if advanced:
        if runnable.setup is not None:
            runnable.setup()
        estimate = warmup(runnable.body, plan, clock)
        if runnable.teardown is not None:
            runnable.teardown()
    else:
        estimate = warmup(runnable.body, plan, clock)
    k = estimate_iterations(estimate, clock.model, plan)
    if advanced:
        return measure_advanced(
            runnable.setup, runnable.body, runnable.teardown, k, plan, clock, sink
        )
    return collect_samples(runnable.body, k, plan, clock, sink)


def _verify(runnable: Runnable) -> Optional[Verification]:
    """One untimed invocation checked by the verifier, outside any clock
    reads. Any exception in this phase marks the record failed."""
    if runnable.verify is None:
        return None
    try:
        if runnable.setup is not None:
            runnable.setup()
        try:
            output = runnable.body()
            runnable.verify(output)
        finally:
            if runnable.teardown is not None:
                runnable.teardown()
    except Exception as exc:
        return Verification("fail", f"{type(exc).__name__}: {exc}")
    return Verification("pass")


def run(
    defs: Iterable[BenchmarkDef],
    plan: MeasurementPlan,
    clock: Clock,
    *,
    seed: int = 0,
    env: Optional[EnvMeta] = None,
    sink: Optional[BlackholeSink] = None,
) -> list[BenchmarkRecord]:
    """Measure every definition in order and emit one record each."""
    env = env or capture_env()
    sink = sink or BlackholeSink()
    records: list[BenchmarkRecord] = []
    for bdef in defs:
        runnable = bdef.factory()
        sample_set = _collect(runnable, plan, clock, sink)
        values = sample_set.per_iteration_values()
        stats = bootstrap_stats(values, plan.resamples, plan.confidence, seed)
        outliers = classify_outliers(values) if len(values) >= 4 else OutlierCounts()
        records.append(
            BenchmarkRecord(
                name=bdef.name,
                config=bdef.config,
                stats=stats,
                outliers=outliers,
                env=env,
                verification=_verify(runnable),
                plan_used=plan,
            )
        )
    return records


@dataclass(frozen=True)
class NaiveComparison:
    """Framework mean vs a raw wall-clock loop around the same body."""

    name: str
    framework_mean_ns: float
    naive_mean_ns: float
    percent_deviation: float


def validate_against_naive(
    bdef: BenchmarkDef,
    plan: MeasurementPlan,
    clock: Clock,
    reps: int = 100,
    *,
    seed: int = 0,
) -> NaiveComparison:
    """Cross-check the pipeline against two raw clock reads around a loop.

    The naive mean is ``reps`` back-to-back invocations timed as one block
    (setup runs once, outside the reads). Both measured phases run adjacent
    to each other on the same warmed state, with all statistics computed
    afterwards, so clock-frequency drift between the phases stays minimal.
    Deviation is ``100 * |framework - naive| / naive``.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    sink = BlackholeSink()
    runnable = bdef.factory()
    sample_set = _collect(runnable, plan, clock, sink)

    if runnable.setup is not None:
        runnable.setup()
    start = clock.now()
    for _ in range(reps):
        runnable.body()
    stop = clock.now()
    if runnable.teardown is not None:
        runnable.teardown()
    naive_mean = (stop - start) / reps

    values = sample_set.per_iteration_values()
    framework_mean = bootstrap(
        values, "mean", plan.resamples, plan.confidence, seed
    ).point
    deviation = 100.0 * abs(framework_mean - naive_mean) / naive_mean
    return NaiveComparison(bdef.name, framework_mean, naive_mean, deviation)
