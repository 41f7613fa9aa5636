"""Reporter and comparison tests."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootbench.errors import NoCommonBenchmarks
from bootbench.kernels import KernelConfig
from bootbench.registry import BenchmarkRecord, EnvMeta, Verification
from bootbench.report import (
    RunDocument,
    collect_plot_series,
    compare,
    emit_plot_series,
    make_document,
    parse_json,
    render_comparison,
    render_csv,
    render_json,
    render_tabular,
)
from bootbench.sampling import MeasurementPlan
from bootbench.stats import BenchmarkStats, BootstrapEstimate, OutlierCounts

from conftest import FIXED_ENV, fixture_document, fixture_record

GOLDEN = Path(__file__).parent / "golden" / "tabular_fixture.txt"


def reference_doc() -> RunDocument:
    return fixture_document("clang15", [
        ("atomic_capture/f64/n=65536/teams=256/tpb=256", 44270.0, 950.0),
        ("zaxpy/f64/n=65536/teams=256/tpb=256", 1234.5, 56.7),
        ("gemm/f32/n=256/teams=1/tpb=256", 2.5e9, 1.2e7),
    ])


# ---------------------------------------------------------------------------
# Tabular


def test_tabular_formats_microsecond_cell():
    text = render_tabular(reference_doc())
    assert "44.27 us" in text
    assert "0.95 us" in text
    assert "2.50 s" in text  # auto-scaling picks the largest unit >= 1.0


def test_tabular_has_exact_columns():
    header = render_tabular(reference_doc()).splitlines()[0]
    cols = [c.strip() for c in header.split("|")]
    assert cols == ["name", "mean", "mean_lo", "mean_hi",
                    "stddev", "stddev_lo", "stddev_hi", "verify"]


def test_tabular_empty_document():
    doc = make_document(FIXED_ENV, MeasurementPlan(), [])
    lines = render_tabular(doc).splitlines()
    assert len(lines) == 2  # header + separator, zero rows


def test_tabular_renders_identically_twice():
    doc = reference_doc()
    assert render_tabular(doc).encode() == render_tabular(doc).encode()


def test_tabular_matches_golden_file():
    expected = GOLDEN.read_bytes()
    assert render_tabular(reference_doc()).encode() == expected


# ---------------------------------------------------------------------------
# JSON and CSV


def test_json_round_trip_identity():
    doc = reference_doc()
    assert parse_json(render_json(doc)) == doc


def test_json_round_trip_with_config_and_failure():
    cfg = KernelConfig("i32", 4096, teams=16, threads_per_team=256, seed=3)
    record = BenchmarkRecord(
        name="atomic_update/i32/n=4096/teams=16/tpb=256",
        config=cfg,
        stats=BenchmarkStats(
            mean=BootstrapEstimate(1.5, 1.25, 1.75, 0.9),
            std_dev=BootstrapEstimate(0.25, 0.0, 0.5, 0.9),
            sample_count=10,
            resample_count=100,
            rng_seed=7,
        ),
        outliers=OutlierCounts(1, 0, 2, 0),
        env=FIXED_ENV,
        verification=Verification("fail", "mismatch"),
        plan_used=MeasurementPlan(samples=10, resamples=100),
    )
    doc = make_document(FIXED_ENV, MeasurementPlan(), [record])
    assert parse_json(render_json(doc)) == doc


def test_csv_shape_and_precision():
    doc = reference_doc()
    rows = list(csv.reader(io.StringIO(render_csv(doc))))
    assert len(rows) == len(doc.records) + 1
    header = rows[0]
    mean_idx = header.index("mean_ns")
    for row, record in zip(rows[1:], doc.records):
        assert float(row[mean_idx]) == record.stats.mean.point  # bit-equal reparse


# ---------------------------------------------------------------------------
# Comparison


def test_compare_identical_documents():
    doc = reference_doc()
    candidate = fixture_document("clang16", [
        (r.name, r.stats.mean.point, r.stats.std_dev.point) for r in doc.records
    ])
    matrix = compare(doc, [candidate])
    for name in matrix.benchmark_names:
        cell = matrix.cells[(name, "clang16")]
        assert cell.speedup == 1.0
        assert cell.ci_overlap
    assert matrix.gaps == ()


def test_compare_speedup_arithmetic():
    baseline = fixture_document("rocm543", [("atomic_capture/f64", 47270.0, 1020.0)])
    candidate = fixture_document("rocm600", [("atomic_capture/f64", 34290.0, 270.0)])
    matrix = compare(baseline, [candidate])
    cell = matrix.cells[("atomic_capture/f64", "rocm600")]
    assert math.isclose(cell.speedup, 47.27 / 34.29, rel_tol=1e-12)


def test_compare_is_label_symmetric():
    a = fixture_document("one", [("k/a", 100.0, 1.0), ("k/b", 5000.0, 20.0)])
    b = fixture_document("two", [("k/a", 250.0, 2.0), ("k/b", 4000.0, 30.0)])
    forward = compare(a, [b])
    backward = compare(b, [a])
    for name in forward.benchmark_names:
        product = (forward.cells[(name, "two")].speedup
                   * backward.cells[(name, "one")].speedup)
        assert abs(product - 1.0) <= 1e-12


def test_compare_disjoint_sets_raise():
    a = fixture_document("one", [("k/a", 100.0, 1.0)])
    b = fixture_document("two", [("k/b", 100.0, 1.0)])
    with pytest.raises(NoCommonBenchmarks):
        compare(a, [b])


def test_compare_reports_gaps_both_ways():
    a = fixture_document("one", [("k/a", 100.0, 1.0), ("k/shared", 10.0, 1.0)])
    b = fixture_document("two", [("k/b", 100.0, 1.0), ("k/shared", 20.0, 1.0)])
    matrix = compare(a, [b])
    assert ("k/a", "two") in matrix.gaps
    assert ("k/b", "two") in matrix.gaps
    assert "k/b" in matrix.benchmark_names
    text = render_comparison(matrix)
    assert "gaps" in text and "k/a" in text


def test_compare_rejects_duplicate_labels():
    a = fixture_document("one", [("k/a", 100.0, 1.0)])
    b = fixture_document("two", [("k/a", 100.0, 1.0)])
    c = fixture_document("two", [("k/a", 100.0, 1.0)])
    with pytest.raises(ValueError):
        compare(a, [b, c])


# ---------------------------------------------------------------------------
# Plot series


def kernel_sweep_doc(label: str) -> RunDocument:
    env = EnvMeta(hostname="h", os="o", cpu_model="c", build_profile="b",
                  toolchain_version="t", timestamp_utc="2024-01-01T00:00:00+00:00",
                  config_label=label)
    records = []
    for family in ("zaxpy", "atomic_update"):
        for tpb in (128, 256, 512, 1024):
            cfg = KernelConfig("f64", 4096, teams=-(-4096 // tpb),
                               threads_per_team=tpb)
            name = f"{family}/f64/n=4096/teams={cfg.teams}/tpb={tpb}"
            records.append(fixture_record(name, 1000.0 * tpb, 10.0, env, config=cfg))
    return make_document(env, MeasurementPlan(), records)


def test_plot_series_four_points_per_family():
    doc = kernel_sweep_doc("clang15")
    points = collect_plot_series([doc], "threads_per_team")
    by_group = {}
    for p in points:
        by_group.setdefault(p.group, []).append(p)
    assert set(by_group) == {"zaxpy/f64/n=4096", "atomic_update/f64/n=4096"}
    for pts in by_group.values():
        assert sorted(p.x for p in pts) == ["1024", "128", "256", "512"]


def test_plot_series_yerr_is_ci_half_width():
    doc = kernel_sweep_doc("clang15")
    for point, record in zip(collect_plot_series([doc], "threads_per_team"),
                             doc.records):
        mean = record.stats.mean
        assert point.yerr_ns == (mean.upper - mean.lower) / 2


def test_plot_series_two_labels_two_series():
    docs = [kernel_sweep_doc("clang15"), kernel_sweep_doc("clang16")]
    text = emit_plot_series(docs, "threads_per_team")
    series = {line.split("\t")[0] for line in text.splitlines()
              if line and not line.startswith("#")}
    assert series == {"clang15", "clang16"}
    assert text.startswith("# bootbench-plot-series v1\n# axis=threads_per_team\n")


def test_plot_series_axis_needs_config():
    doc = reference_doc()  # records without configs
    with pytest.raises(ValueError):
        emit_plot_series([doc], "threads_per_team")
    # config_label axis works without configs
    text = emit_plot_series([doc], "config_label")
    assert "clang15" in text


# ---------------------------------------------------------------------------
# Figures (smoke)


def test_figures_render_files(tmp_path):
    from bootbench import figures
    doc = kernel_sweep_doc("clang15")
    written = figures.render_run_figures(doc, tmp_path / "run")
    assert written and all(p.stat().st_size > 0 for p in written)
    series = figures.render_series_figures([doc], "threads_per_team", tmp_path / "s")
    assert series and all(p.suffix == ".png" for p in series)
    other = kernel_sweep_doc("clang16")
    matrix = compare(doc, [other])
    cmp_figs = figures.render_comparison_figures(matrix, tmp_path / "cmp")
    assert cmp_figs and all(p.stat().st_size > 0 for p in cmp_figs)


# ---------------------------------------------------------------------------
# Property-based round trip

finite = st.floats(allow_nan=False, allow_infinity=False,
                   min_value=-1e15, max_value=1e15)
nonneg = st.floats(allow_nan=False, allow_infinity=False,
                   min_value=0, max_value=1e15)
names = st.text(st.characters(min_codepoint=33, max_codepoint=126),
                min_size=1, max_size=24)


@st.composite
def estimates(draw, lower_bound=None):
    base = nonneg if lower_bound == 0 else finite
    a, b = sorted(draw(st.tuples(base, base)))
    point = draw(base)
    return BootstrapEstimate(point, a, b, draw(st.floats(min_value=0.5,
                                                         max_value=0.99)))


@st.composite
def documents(draw):
    env = EnvMeta(hostname=draw(names), os=draw(names), cpu_model=draw(names),
                  build_profile=draw(names), toolchain_version=draw(names),
                  timestamp_utc=draw(names), config_label=draw(names))
    plan = MeasurementPlan(samples=draw(st.integers(2, 1000)),
                           resamples=draw(st.integers(1, 10**6)),
                           confidence=draw(st.floats(min_value=0.5, max_value=0.99)),
                           warmup_time_ns=draw(st.integers(0, 10**9)))
    records = []
    for _ in range(draw(st.integers(0, 4))):
        maybe_cfg = draw(st.none() | st.builds(
            KernelConfig,
            dtype=st.sampled_from(["f64", "f32", "i32"]),
            n=st.integers(0, 20).map(lambda e: 2**e),
            teams=st.integers(1, 4096),
            threads_per_team=st.sampled_from([128, 256, 512, 1024]),
            seed=st.integers(0, 2**31),
        ))
        verification = draw(st.none() | st.builds(
            Verification, status=st.sampled_from(["pass", "fail", "skipped"]),
            message=names))
        records.append(BenchmarkRecord(
            name=draw(names),
            config=maybe_cfg,
            stats=BenchmarkStats(
                mean=draw(estimates()),
                std_dev=draw(estimates(lower_bound=0)),
                sample_count=draw(st.integers(2, 10**6)),
                resample_count=draw(st.integers(1, 10**6)),
                rng_seed=draw(st.integers(-2**63, 2**63 - 1)),
            ),
            outliers=OutlierCounts(*draw(st.tuples(*[st.integers(0, 50)] * 4))),
            env=env,
            verification=verification,
            plan_used=plan,
        ))
    return make_document(env, plan, records)


@settings(max_examples=100, deadline=None)
@given(documents())
def test_json_round_trip_property(doc):
    assert parse_json(render_json(doc)) == doc
