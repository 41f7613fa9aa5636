"""Shared fixtures: scripted clocks, counting bodies, fixture documents."""

from __future__ import annotations

import itertools

import pytest

from bootbench.chrono import Clock, ClockModel
from bootbench.registry import BenchmarkRecord, EnvMeta, Verification
from bootbench.report import make_document
from bootbench.sampling import MeasurementPlan
from bootbench.stats import BenchmarkStats, BootstrapEstimate, OutlierCounts


class ScriptedClock:
    """Manually advanced time source.

    Each read advances by ``read_cost_ns`` (or the next scripted delta);
    benchmark bodies advance it explicitly through :meth:`advance`.
    """

    def __init__(self, read_cost_ns: int = 0, deltas=None):
        self._t = 0
        self._read_cost = read_cost_ns
        self._deltas = iter(deltas) if deltas is not None else None
        self.reads = 0

    def now(self) -> int:
        self.reads += 1
        self._t += next(self._deltas) if self._deltas is not None else self._read_cost
        return self._t

    def advance(self, ns: int) -> None:
        self._t += ns


def scripted_clock(resolution_ns: float = 100.0, timer_cost_ns: float = 0.0,
                   read_cost_ns: int = 0, deltas=None) -> tuple[ScriptedClock, Clock]:
    """A scripted source bundled with a hand-built model."""
    source = ScriptedClock(read_cost_ns=read_cost_ns, deltas=deltas)
    model = ClockModel(resolution_ns=resolution_ns, timer_cost_ns=timer_cost_ns,
                       calibration_reps=100)
    return source, Clock(source=source.now, model=model)


class CountingBody:
    """Body that advances a scripted clock and counts its invocations."""

    def __init__(self, source: ScriptedClock, cost_ns=1000):
        self._source = source
        self._costs = itertools.cycle(cost_ns if isinstance(cost_ns, (list, tuple))
                                      else [cost_ns])
        self.calls = 0

    def __call__(self):
        self._source.advance(next(self._costs))
        self.calls += 1
        return self.calls


FIXED_ENV = EnvMeta(
    hostname="testhost",
    os="TestOS 1.0",
    cpu_model="Test CPU",
    build_profile="CPython-3.10",
    toolchain_version="testcc 1.0",
    timestamp_utc="2024-01-01T00:00:00+00:00",
    config_label="default",
)


def estimate(point: float, lower: float, upper: float,
             confidence: float = 0.95) -> BootstrapEstimate:
    return BootstrapEstimate(point, lower, upper, confidence)


def fixture_record(name: str, mean_ns: float, std_ns: float, env: EnvMeta,
                   spread: float = 0.02, verification: str | None = "pass",
                   config=None) -> BenchmarkRecord:
    half = mean_ns * spread
    std_half = std_ns * spread
    return BenchmarkRecord(
        name=name,
        config=config,
        stats=BenchmarkStats(
            mean=estimate(mean_ns, mean_ns - half, mean_ns + half),
            std_dev=estimate(std_ns, max(0.0, std_ns - std_half), std_ns + std_half),
            sample_count=100,
            resample_count=1000,
            rng_seed=0,
        ),
        outliers=OutlierCounts(),
        env=env,
        verification=Verification(verification) if verification else None,
        plan_used=MeasurementPlan(),
    )


def fixture_document(label: str, rows: list[tuple[str, float, float]]):
    """Document with one record per (name, mean_ns, std_ns) row."""
    env = EnvMeta(
        hostname=FIXED_ENV.hostname,
        os=FIXED_ENV.os,
        cpu_model=FIXED_ENV.cpu_model,
        build_profile=FIXED_ENV.build_profile,
        toolchain_version=FIXED_ENV.toolchain_version,
        timestamp_utc=FIXED_ENV.timestamp_utc,
        config_label=label,
    )
    records = [fixture_record(name, mean, std, env) for name, mean, std in rows]
    return make_document(env, MeasurementPlan(), records)


@pytest.fixture
def fixed_env() -> EnvMeta:
    return FIXED_ENV
