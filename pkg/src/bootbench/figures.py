"""Matplotlib figure rendering for run documents and comparisons.

Figures are written as PNG files next to the delimited reports; the text
reporters in :mod:`bootbench.report` stay image-free. Rendering uses the
object-oriented matplotlib API only, so no backend or GUI state is touched.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

from .report import ComparisonMatrix, PlotPoint, RunDocument, collect_plot_series

_BAR_WIDTH = 0.8


def _safe_stem(name: str) -> str:
    return "".join(ch if (ch.isalnum() or ch in "-_.") else "_" for ch in name)


def _grouped_bars(ax, categories: list[str], series: dict[str, tuple[list[float], list[float]]]) -> None:
    count = max(1, len(series))
    width = _BAR_WIDTH / count
    for i, (label, (means, errs)) in enumerate(series.items()):
        offsets = [j + (i - (count - 1) / 2) * width for j in range(len(categories))]
        ax.bar(offsets, means, width=width, yerr=errs, capsize=3, label=label)
    ax.set_xticks(range(len(categories)))
    ax.set_xticklabels(categories, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("mean time (ns)")
    ax.legend(fontsize=8)


def render_series_figures(docs: Sequence[RunDocument], axis: str, outdir: Path) -> list[Path]:
    """One grouped-bar PNG per plot group (x = axis value, bars = series)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    points = collect_plot_series(docs, axis)
    groups: dict[str, list[PlotPoint]] = {}
    for p in points:
        groups.setdefault(p.group, []).append(p)

    written = []
    for group, pts in groups.items():
        xs = sorted({p.x for p in pts}, key=lambda v: (len(v), v))
        series: dict[str, tuple[list[float], list[float]]] = {}
        for label in dict.fromkeys(p.series for p in pts):
            by_x = {p.x: p for p in pts if p.series == label}
            means = [by_x[x].mean_ns if x in by_x else 0.0 for x in xs]
            errs = [by_x[x].yerr_ns if x in by_x else 0.0 for x in xs]
            series[label] = (means, errs)
        fig = Figure(figsize=(6, 4))
        ax = fig.subplots()
        _grouped_bars(ax, xs, series)
        ax.set_title(f"{group} ({axis} sweep)", fontsize=10)
        ax.set_xlabel(axis)
        fig.tight_layout()
        path = outdir / f"{_safe_stem(group)}.png"
        fig.savefig(path, dpi=150)
        written.append(path)
    return written


def render_run_figures(doc: RunDocument, outdir: Path) -> list[Path]:
    """Per-family bar chart of every record's mean with CI error bars."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    families: dict[str, list] = {}
    for record in doc.records:
        families.setdefault(record.name.split("/", 1)[0], []).append(record)

    written = []
    for family, records in families.items():
        labels = [r.name.split("/", 1)[1] if "/" in r.name else r.name for r in records]
        means = [r.stats.mean.point for r in records]
        errs = [(r.stats.mean.upper - r.stats.mean.lower) / 2.0 for r in records]
        fig = Figure(figsize=(max(6, 0.6 * len(records)), 4))
        ax = fig.subplots()
        ax.bar(range(len(records)), means, yerr=errs, capsize=3)
        ax.set_xticks(range(len(records)))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel("mean time (ns)")
        ax.set_title(f"{family} ({doc.env.config_label})", fontsize=10)
        fig.tight_layout()
        path = outdir / f"{_safe_stem(family)}.png"
        fig.savefig(path, dpi=150)
        written.append(path)
    return written


def render_comparison_figures(matrix: ComparisonMatrix, outdir: Path) -> list[Path]:
    """Per-family grouped bars: baseline plus each candidate label."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    families: dict[str, list[str]] = {}
    for name in matrix.benchmark_names:
        families.setdefault(name.split("/", 1)[0], []).append(name)

    written = []
    for family, names in families.items():
        series: dict[str, tuple[list[float], list[float]]] = {}
        base_means = []
        for name in names:
            cell = next(
                (matrix.cells.get((name, lbl)) for lbl in matrix.candidate_labels
                 if (name, lbl) in matrix.cells),
                None,
            )
            base_means.append(cell.baseline_mean if cell else 0.0)
        series[matrix.baseline_label] = (base_means, [0.0] * len(names))
        for label in matrix.candidate_labels:
            means = []
            for name in names:
                cell = matrix.cells.get((name, label))
                means.append(cell.candidate_mean if cell else 0.0)
            series[label] = (means, [0.0] * len(names))
        short = [n.split("/", 1)[1] if "/" in n else n for n in names]
        fig = Figure(figsize=(max(6, 0.8 * len(names)), 4))
        ax = fig.subplots()
        _grouped_bars(ax, short, series)
        ax.set_title(f"{family}: {matrix.baseline_label} vs candidates", fontsize=10)
        fig.tight_layout()
        path = outdir / f"compare_{_safe_stem(family)}.png"
        fig.savefig(path, dpi=150)
        written.append(path)
    return written
