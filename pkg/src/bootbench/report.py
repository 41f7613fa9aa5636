"""Reporters and the cross-run comparison engine.

All renderers are pure functions of a :class:`RunDocument` and produce
byte-deterministic output. Three formats exist:

* tabular: fixed-width text, one row per record, durations auto-scaled to
  the largest unit keeping the row's mean at or above 1.0;
* json (schema_version "1"): lossless, round-trips to an equal document;
* csv: one row per record with the tabular columns plus the config fields.

Comparison joins records across documents by benchmark name, producing a
matrix of speedups (baseline mean over candidate mean) with a CI-overlap
flag; unmatched names surface as explicit gaps. Plot emission flattens one
or more documents into a delimited series format (see
:func:`emit_plot_series` for the exact layout).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .kernels import KernelConfig
from .errors import NoCommonBenchmarks
from .registry import BenchmarkRecord, EnvMeta, Verification
from .sampling import MeasurementPlan
from .stats import BenchmarkStats, BootstrapEstimate, OutlierCounts

SCHEMA_VERSION = "1"

PLOT_AXES = ("dtype", "threads_per_team", "n", "config_label")


@dataclass(frozen=True)
class RunDocument:
    """Serialized output of one benchmark run."""

    schema_version: str
    env: EnvMeta
    plan: MeasurementPlan
    records: tuple[BenchmarkRecord, ...]


def make_document(env: EnvMeta, plan: MeasurementPlan,
                  records: Sequence[BenchmarkRecord]) -> RunDocument:
    return RunDocument(SCHEMA_VERSION, env, plan, tuple(records))


# ---------------------------------------------------------------------------
# Tabular

_UNITS = (("s", 1e9), ("ms", 1e6), ("us", 1e3), ("ns", 1.0))

TABULAR_COLUMNS = (
    "name", "mean", "mean_lo", "mean_hi",
    "stddev", "stddev_lo", "stddev_hi", "verify",
)


def _unit_for(mean_ns: float) -> tuple[str, float]:
    for suffix, factor in _UNITS:
        if mean_ns / factor >= 1.0:
            return suffix, factor
    return "ns", 1.0


def _fmt_duration(value_ns: float, suffix: str, factor: float) -> str:
    return f"{value_ns / factor:.2f} {suffix}"


def _verify_cell(verification: Optional[Verification]) -> str:
    return verification.status if verification is not None else "-"


def render_tabular(doc: RunDocument) -> str:
    """Fixed-width table with one row per record.

    All six duration columns of a row share the unit picked from that row's
    mean; values print with two decimals (so a 44.27 us mean with a 0.95 us
    deviation renders exactly those strings).
    """
    rows = []
    for record in doc.records:
        suffix, factor = _unit_for(record.stats.mean.point)
        mean, std = record.stats.mean, record.stats.std_dev
        rows.append((
            record.name,
            _fmt_duration(mean.point, suffix, factor),
            _fmt_duration(mean.lower, suffix, factor),
            _fmt_duration(mean.upper, suffix, factor),
            _fmt_duration(std.point, suffix, factor),
            _fmt_duration(std.lower, suffix, factor),
            _fmt_duration(std.upper, suffix, factor),
            _verify_cell(record.verification),
        ))
    widths = [len(h) for h in TABULAR_COLUMNS]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: Sequence[str]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return " | ".join([first, *rest])

    out = [line(TABULAR_COLUMNS), "-+-".join("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON

def _estimate_to_dict(e: BootstrapEstimate) -> dict:
    return {"point": e.point, "lower": e.lower, "upper": e.upper,
            "confidence": e.confidence}


def _estimate_from_dict(d: dict) -> BootstrapEstimate:
    return BootstrapEstimate(d["point"], d["lower"], d["upper"], d["confidence"])


def _plan_to_dict(p: MeasurementPlan) -> dict:
    return {
        "samples": p.samples,
        "resamples": p.resamples,
        "confidence": p.confidence,
        "warmup_time_ns": p.warmup_time_ns,
        "resolution_multiple": p.resolution_multiple,
    }


def _plan_from_dict(d: dict) -> MeasurementPlan:
    return MeasurementPlan(**d)


def _env_to_dict(e: EnvMeta) -> dict:
    return {
        "hostname": e.hostname,
        "os": e.os,
        "cpu_model": e.cpu_model,
        "build_profile": e.build_profile,
        "toolchain_version": e.toolchain_version,
        "timestamp_utc": e.timestamp_utc,
        "config_label": e.config_label,
    }


def _env_from_dict(d: dict) -> EnvMeta:
    return EnvMeta(**d)


def _config_to_dict(c: Optional[KernelConfig]) -> Optional[dict]:
    if c is None:
        return None
    return {"dtype": c.dtype, "n": c.n, "teams": c.teams,
            "threads_per_team": c.threads_per_team, "seed": c.seed}


def _config_from_dict(d: Optional[dict]) -> Optional[KernelConfig]:
    return None if d is None else KernelConfig(**d)


def _record_to_dict(r: BenchmarkRecord) -> dict:
    verification = None
    if r.verification is not None:
        verification = {"status": r.verification.status,
                        "message": r.verification.message}
    return {
        "name": r.name,
        "config": _config_to_dict(r.config),
        "stats": {
            "mean": _estimate_to_dict(r.stats.mean),
            "std_dev": _estimate_to_dict(r.stats.std_dev),
            "sample_count": r.stats.sample_count,
            "resample_count": r.stats.resample_count,
            "rng_seed": r.stats.rng_seed,
        },
        "outliers": {
            "low_severe": r.outliers.low_severe,
            "low_mild": r.outliers.low_mild,
            "high_mild": r.outliers.high_mild,
            "high_severe": r.outliers.high_severe,
        },
        "verification": verification,
        "plan_used": _plan_to_dict(r.plan_used),
    }


def _record_from_dict(d: dict, env: EnvMeta) -> BenchmarkRecord:
    stats_d = d["stats"]
    verification = None
    if d["verification"] is not None:
        verification = Verification(**d["verification"])
    return BenchmarkRecord(
        name=d["name"],
        config=_config_from_dict(d["config"]),
        stats=BenchmarkStats(
            mean=_estimate_from_dict(stats_d["mean"]),
            std_dev=_estimate_from_dict(stats_d["std_dev"]),
            sample_count=stats_d["sample_count"],
            resample_count=stats_d["resample_count"],
            rng_seed=stats_d["rng_seed"],
        ),
        outliers=OutlierCounts(**d["outliers"]),
        env=env,
        verification=verification,
        plan_used=_plan_from_dict(d["plan_used"]),
    )


def render_json(doc: RunDocument) -> str:
    """Lossless JSON rendering; floats keep full precision."""
    payload = {
        "schema_version": doc.schema_version,
        "env": _env_to_dict(doc.env),
        "plan": _plan_to_dict(doc.plan),
        "records": [_record_to_dict(r) for r in doc.records],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_json(text: str) -> RunDocument:
    payload = json.loads(text)
    env = _env_from_dict(payload["env"])
    return RunDocument(
        schema_version=payload["schema_version"],
        env=env,
        plan=_plan_from_dict(payload["plan"]),
        records=tuple(_record_from_dict(r, env) for r in payload["records"]),
    )


# ---------------------------------------------------------------------------
# CSV

CSV_COLUMNS = (
    "name", "mean_ns", "mean_lo_ns", "mean_hi_ns",
    "stddev_ns", "stddev_lo_ns", "stddev_hi_ns", "verify",
    "dtype", "n", "teams", "threads_per_team", "seed",
)


def render_csv(doc: RunDocument) -> str:
    """One row per record; durations in raw nanoseconds at full precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in doc.records:
        cfg = r.config
        writer.writerow([
            r.name,
            repr(r.stats.mean.point), repr(r.stats.mean.lower), repr(r.stats.mean.upper),
            repr(r.stats.std_dev.point), repr(r.stats.std_dev.lower), repr(r.stats.std_dev.upper),
            _verify_cell(r.verification),
            cfg.dtype if cfg else "",
            cfg.n if cfg else "",
            cfg.teams if cfg else "",
            cfg.threads_per_team if cfg else "",
            cfg.seed if cfg else "",
        ])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Comparison

@dataclass(frozen=True)
class ComparisonCell:
    """One benchmark under one candidate configuration vs the baseline."""

    baseline_mean: float
    candidate_mean: float
    speedup: float
    ci_overlap: bool


@dataclass(frozen=True)
class ComparisonMatrix:
    """Benchmarks down the rows, candidate config labels across the columns.

    ``gaps`` lists every (benchmark, label) pair missing on one side of a
    join; nothing is dropped silently.
    """

    baseline_label: str
    candidate_labels: tuple[str, ...]
    benchmark_names: tuple[str, ...]
    cells: dict[tuple[str, str], ComparisonCell]
    gaps: tuple[tuple[str, str], ...]


def _intervals_overlap(a: BootstrapEstimate, b: BootstrapEstimate) -> bool:
    return a.lower <= b.upper and b.lower <= a.upper


def compare(baseline: RunDocument, candidates: Sequence[RunDocument]) -> ComparisonMatrix:
    """Join candidate documents against the baseline by benchmark name."""
    if not candidates:
        raise ValueError("need at least one candidate document")
    labels = [c.env.config_label for c in candidates]
    if len(set(labels)) != len(labels):
        raise ValueError("candidate documents must have distinct config labels")

    base_by_name = {r.name: r for r in baseline.records}
    names: list[str] = [r.name for r in baseline.records]
    cells: dict[tuple[str, str], ComparisonCell] = {}
    gaps: list[tuple[str, str]] = []
    matched_any = False

    for cand in candidates:
        label = cand.env.config_label
        cand_by_name = {r.name: r for r in cand.records}
        for name in base_by_name:
            if name not in cand_by_name:
                gaps.append((name, label))
                continue
            matched_any = True
            base_mean = base_by_name[name].stats.mean
            cand_mean = cand_by_name[name].stats.mean
            if cand_mean.point > 0:
                speedup = base_mean.point / cand_mean.point
            else:
                speedup = float("inf")
            cells[(name, label)] = ComparisonCell(
                baseline_mean=base_mean.point,
                candidate_mean=cand_mean.point,
                speedup=speedup,
                ci_overlap=_intervals_overlap(base_mean, cand_mean),
            )
        for record in cand.records:
            if record.name not in base_by_name:
                gaps.append((record.name, label))
                if record.name not in names:
                    names.append(record.name)

    if not matched_any:
        raise NoCommonBenchmarks(
            f"no benchmark names shared between {baseline.env.config_label!r} "
            f"and any candidate"
        )
    return ComparisonMatrix(
        baseline_label=baseline.env.config_label,
        candidate_labels=tuple(labels),
        benchmark_names=tuple(names),
        cells=cells,
        gaps=tuple(gaps),
    )


def render_comparison(matrix: ComparisonMatrix) -> str:
    """Text matrix: per-candidate mean, speedup vs baseline, CI-overlap mark."""
    header = ["benchmark", f"{matrix.baseline_label} (base)"]
    header += list(matrix.candidate_labels)
    rows = []
    for name in matrix.benchmark_names:
        base_cell = "-"
        row = [name]
        for label in matrix.candidate_labels:
            cell = matrix.cells.get((name, label))
            if cell is None:
                row.append("(missing)")
                continue
            base_cell = _fmt_duration(cell.baseline_mean, *_unit_for(cell.baseline_mean))
            overlap = "~" if cell.ci_overlap else " "
            suffix, factor = _unit_for(cell.candidate_mean)
            row.append(
                f"{cell.candidate_mean / factor:.2f} {suffix} (x{cell.speedup:.4f}{overlap})"
            )
        row.insert(1, base_cell)
        rows.append(row)

    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in rows:
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)))
    if matrix.gaps:
        lines.append("")
        lines.append("gaps (no counterpart in the join):")
        for name, label in matrix.gaps:
            lines.append(f"  {name} @ {label}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Plot series

@dataclass(frozen=True)
class PlotPoint:
    """One bar of a grouped series: x position, mean, CI half-width."""

    series: str
    group: str
    x: str
    mean_ns: float
    yerr_ns: float


def _group_key(record: BenchmarkRecord, axis: str) -> tuple[str, str]:
    """(group, x) for one record under the chosen sweep axis."""
    cfg = record.config
    if axis == "config_label":
        return record.name, record.env.config_label
    if cfg is None:
        raise ValueError(f"record {record.name!r} has no config; cannot sweep {axis!r}")
    family = record.name.split("/", 1)[0]
    if axis == "dtype":
        return f"{family}/n={cfg.n}/tpb={cfg.threads_per_team}", cfg.dtype
    if axis == "threads_per_team":
        # teams co-varies with tpb, so both are folded out of the group key
        return f"{family}/{cfg.dtype}/n={cfg.n}", str(cfg.threads_per_team)
    if axis == "n":
        return f"{family}/{cfg.dtype}/tpb={cfg.threads_per_team}", str(cfg.n)
    raise ValueError(f"axis must be one of {PLOT_AXES}")


def collect_plot_series(docs: Sequence[RunDocument], axis: str) -> list[PlotPoint]:
    """Flatten documents into plot points; one series per config label."""
    points = []
    for doc in docs:
        for record in doc.records:
            group, x = _group_key(record, axis)
            mean = record.stats.mean
            points.append(PlotPoint(
                series=doc.env.config_label,
                group=group,
                x=x,
                mean_ns=mean.point,
                yerr_ns=(mean.upper - mean.lower) / 2.0,
            ))
    return points


def emit_plot_series(docs: Sequence[RunDocument], axis: str) -> str:
    """Tab-separated plot data.

    Two comment lines (format tag and axis) then one line per point with
    columns ``series<TAB>group<TAB>x<TAB>mean_ns<TAB>yerr_ns``. Point order
    follows document order then record order; floats keep full precision.
    """
    lines = ["# bootbench-plot-series v1", f"# axis={axis}"]
    for p in collect_plot_series(docs, axis):
        lines.append(f"{p.series}\t{p.group}\t{p.x}\t{p.mean_ns!r}\t{p.yerr_ns!r}")
    return "\n".join(lines) + "\n"
