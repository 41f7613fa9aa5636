"""bootbench: a statistical microbenchmark harness.

Measurement pipeline: clock calibration, warmup, resolution-aware dynamic
iteration counts, batched sampling with an optimizer-opaque result sink,
percentile-bootstrap confidence intervals, and tabular/JSON/CSV reporting
with cross-configuration comparison.
"""

import os as _os

# The kernel worker pool owns the parallelism (the teams decomposition);
# BLAS threads underneath would oversubscribe the cores and destabilize
# timings. Must run before numpy loads; export the variable to override.
_os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")

from .chrono import Clock, ClockModel, calibrated_clock, estimate_clock, now
from .errors import (
    BootbenchError,
    ClockUnusable,
    DimensionMismatch,
    DuplicateName,
    EmptyInput,
    InsufficientData,
    LengthMismatch,
    MeasurementFailure,
    NoCommonBenchmarks,
    UsageError,
)
from .kernels import DeviceBuffer, KernelConfig, teams_for
from .registry import (
    BenchmarkDef,
    BenchmarkRecord,
    EnvMeta,
    Registry,
    Runnable,
    Verification,
    benchmark_name,
    capture_env,
    run,
    simple_def,
    validate_against_naive,
)
from .report import (
    ComparisonCell,
    ComparisonMatrix,
    RunDocument,
    compare,
    emit_plot_series,
    make_document,
    parse_json,
    render_csv,
    render_json,
    render_tabular,
)
from .sampling import (
    BlackholeSink,
    MeasurementPlan,
    Sample,
    SampleSet,
    collect_samples,
    estimate_iterations,
    measure_advanced,
    sink_consume,
    warmup,
)
from .stats import (
    BenchmarkStats,
    BootstrapEstimate,
    OutlierCounts,
    bootstrap,
    bootstrap_stats,
    classify_outliers,
    point_mean,
    point_stddev,
)
from .suite import build_registry

__version__ = "0.1.0"

__all__ = [
    "BenchmarkDef",
    "BenchmarkRecord",
    "BenchmarkStats",
    "BlackholeSink",
    "BootbenchError",
    "BootstrapEstimate",
    "Clock",
    "ClockModel",
    "ClockUnusable",
    "ComparisonCell",
    "ComparisonMatrix",
    "DeviceBuffer",
    "DimensionMismatch",
    "DuplicateName",
    "EmptyInput",
    "EnvMeta",
    "InsufficientData",
    "KernelConfig",
    "LengthMismatch",
    "MeasurementFailure",
    "MeasurementPlan",
    "NoCommonBenchmarks",
    "OutlierCounts",
    "Registry",
    "RunDocument",
    "Runnable",
    "Sample",
    "SampleSet",
    "UsageError",
    "Verification",
    "benchmark_name",
    "bootstrap",
    "bootstrap_stats",
    "build_registry",
    "calibrated_clock",
    "capture_env",
    "classify_outliers",
    "collect_samples",
    "compare",
    "emit_plot_series",
    "estimate_clock",
    "estimate_iterations",
    "make_document",
    "measure_advanced",
    "now",
    "parse_json",
    "point_mean",
    "point_stddev",
    "render_csv",
    "render_json",
    "render_tabular",
    "run",
    "simple_def",
    "sink_consume",
    "teams_for",
    "validate_against_naive",
    "warmup",
]
