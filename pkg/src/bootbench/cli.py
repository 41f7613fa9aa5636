"""Command-line entry point.

Subcommands: ``run`` (measure and report), ``validate`` (cross-check the
pipeline against raw wall-clock loops), ``compare`` (join two or more run
documents into a speedup matrix), ``list`` (registered benchmark names) and
``plot`` (delimited plot series plus optional figures). ``run`` is implied
when the first argument is a flag.

Every plan option has a default; ``--seed`` falls back to the
``BOOTBENCH_SEED`` environment variable, then 0. Exit codes: 0 success,
1 I/O or clock failure, 2 verification or deviation failures, 64 usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import figures, report
from .chrono import Clock, calibrated_clock
from .errors import BootbenchError, UsageError
from .registry import EnvMeta, Registry, capture_env, run, validate_against_naive
from .report import PLOT_AXES, RunDocument, make_document
from .sampling import MeasurementPlan
from .suite import build_registry

SEED_ENV_VAR = "BOOTBENCH_SEED"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CHECK_FAILED = 2
EXIT_USAGE = 64

_COMMANDS = ("run", "validate", "compare", "list", "plot")
REPORTERS = ("tabular", "json", "csv")


@dataclass
class CliConfig:
    """Parsed command line; defaults applied for absent flags."""

    command: str = "run"
    samples: int = 100
    resamples: int = 100_000
    confidence: float = 0.95
    warmup_time_ms: float = 100.0
    input_file: Optional[str] = None
    reporter: str = "tabular"
    out: Optional[str] = None
    seed: Optional[int] = None
    config_label: str = "default"
    list_only: bool = False
    max_deviation_pct: float = 1.0
    validation_reps: int = 100
    documents: list[str] = field(default_factory=list)
    axis: str = "threads_per_team"
    figures_dir: Optional[str] = None
    plugins: list[str] = field(default_factory=list)

    def plan(self) -> MeasurementPlan:
        return MeasurementPlan(
            samples=self.samples,
            resamples=self.resamples,
            confidence=self.confidence,
            warmup_time_ns=int(self.warmup_time_ms * 1e6),
        )

    def resolve_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        env_value = os.environ.get(SEED_ENV_VAR)
        if env_value is not None:
            try:
                return int(env_value)
            except ValueError as exc:
                raise UsageError(f"{SEED_ENV_VAR} must be an integer") from exc
        return 0


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so parsing stays total."""

    def error(self, message: str):  # noqa: A003 - argparse API
        raise UsageError(message)


def _add_plan_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--benchmark-samples", type=int, default=100, metavar="N")
    parser.add_argument("--benchmark-resamples", type=int, default=100_000, metavar="N")
    parser.add_argument("--benchmark-confidence-interval", type=float, default=0.95,
                        metavar="F")
    parser.add_argument("--benchmark-warmup-time", type=float, default=100.0,
                        metavar="MS")
    parser.add_argument("--seed", type=int, default=None, metavar="N")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--reporter", "-r", choices=REPORTERS, default="tabular")
    parser.add_argument("--out", default=None, metavar="PATH")
    parser.add_argument("--figures", default=None, metavar="DIR",
                        help="also render figures into this directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="bootbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="measure selected benchmarks and report")
    _add_plan_flags(p_run)
    _add_output_flags(p_run)
    p_run.add_argument("--input-file", default=None, metavar="PATH",
                       help="newline-separated name globs; '#' lines ignored")
    p_run.add_argument("--config-label", default="default", metavar="S")
    p_run.add_argument("--list", action="store_true", dest="list_only",
                       help="list matching benchmark names instead of running")
    p_run.add_argument("--plugin", action="append", default=[], metavar="LIB",
                       help="measure kernels from this shared library instead "
                            "of the built-in suite (repeatable)")

    p_val = sub.add_parser("validate", help="framework mean vs naive wall-clock mean")
    _add_plan_flags(p_val)
    p_val.add_argument("--input-file", default=None, metavar="PATH")
    p_val.add_argument("--config-label", default="default", metavar="S")
    p_val.add_argument("--out", default=None, metavar="PATH")
    p_val.add_argument("--max-deviation-pct", type=float, default=1.0, metavar="F")
    p_val.add_argument("--validation-reps", type=int, default=100, metavar="N")

    p_cmp = sub.add_parser("compare", help="speedup matrix from >= 2 run documents")
    p_cmp.add_argument("documents", nargs="*", metavar="DOC.json")
    p_cmp.add_argument("--out", default=None, metavar="PATH")
    p_cmp.add_argument("--figures", default=None, metavar="DIR")

    sub.add_parser("list", help="print registered benchmark names")

    p_plot = sub.add_parser("plot", help="emit plot series data from run documents")
    p_plot.add_argument("documents", nargs="*", metavar="DOC.json")
    p_plot.add_argument("--axis", choices=PLOT_AXES, default="threads_per_team")
    p_plot.add_argument("--out", default=None, metavar="PATH")
    p_plot.add_argument("--figures", default=None, metavar="DIR")

    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Parse ``argv`` into a :class:`CliConfig` or raise :class:`UsageError`."""
    argv = list(argv)
    if not argv or argv[0].startswith("-"):
        argv.insert(0, "run")  # bare flags imply the run subcommand
    if argv[0] not in _COMMANDS:
        raise UsageError(f"unknown subcommand {argv[0]!r} (choose from {_COMMANDS})")
    ns = build_parser().parse_args(argv)

    config = CliConfig(command=ns.command)
    if ns.command in ("run", "validate"):
        config.samples = ns.benchmark_samples
        config.resamples = ns.benchmark_resamples
        config.confidence = ns.benchmark_confidence_interval
        config.warmup_time_ms = ns.benchmark_warmup_time
        config.seed = ns.seed
        config.input_file = ns.input_file
        config.config_label = ns.config_label
        config.out = ns.out
    if ns.command == "run":
        config.reporter = ns.reporter
        config.list_only = ns.list_only
        config.figures_dir = ns.figures
        config.plugins = list(ns.plugin)
    if ns.command == "validate":
        config.max_deviation_pct = ns.max_deviation_pct
        config.validation_reps = ns.validation_reps
    if ns.command in ("compare", "plot"):
        config.documents = list(ns.documents)
        config.out = ns.out
        config.figures_dir = ns.figures
    if ns.command == "plot":
        config.axis = ns.axis

    try:
        config.plan()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return config


def _read_patterns(path: str) -> list[str]:
    lines = Path(path).read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


def _write_output(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_documents(paths: Sequence[str]) -> list[RunDocument]:
    return [report.parse_json(Path(p).read_text()) for p in paths]


_RENDERERS = {
    "tabular": report.render_tabular,
    "json": report.render_json,
    "csv": report.render_csv,
}


def _cmd_run(config: CliConfig, registry: Registry, clock: Optional[Clock],
             env: Optional[EnvMeta], stdout: TextIO, stderr: TextIO) -> int:
    patterns = _read_patterns(config.input_file) if config.input_file else []
    if config.plugins:
        # a plugin run measures only the plugin's kernels; label the run and
        # compare the resulting document against other builds
        from .plugin import load_plugin
        registry = Registry()
        for lib in config.plugins:
            for bdef in load_plugin(lib):
                registry.register(bdef)
    defs = registry.select(patterns)
    if config.list_only:
        for bdef in defs:
            stdout.write(bdef.name + "\n")
        return EXIT_OK
    if patterns and not defs:
        stderr.write("warning: no benchmarks match the requested patterns\n")
    clock = clock or calibrated_clock()
    env = env or capture_env(config.config_label)
    records = run(defs, config.plan(), clock, seed=config.resolve_seed(), env=env)
    doc = make_document(env, config.plan(), records)
    _write_output(_RENDERERS[config.reporter](doc), config.out, stdout)
    if config.figures_dir:
        figures.render_run_figures(doc, Path(config.figures_dir))
    failed = any(r.verification is not None and r.verification.status == "fail"
                 for r in records)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_validate(config: CliConfig, registry: Registry, clock: Optional[Clock],
                  stdout: TextIO, stderr: TextIO) -> int:
    patterns = _read_patterns(config.input_file) if config.input_file else ["gemm/*"]
    defs = registry.select(patterns)
    if not defs:
        stderr.write("warning: no benchmarks match the requested patterns\n")
        return EXIT_OK
    clock = clock or calibrated_clock()
    rows = [("kernel", "framework_mean", "naive_mean", "deviation")]
    worst = 0.0
    for bdef in defs:
        result = validate_against_naive(bdef, config.plan(), clock,
                                        config.validation_reps,
                                        seed=config.resolve_seed())
        worst = max(worst, result.percent_deviation)
        rows.append((
            result.name,
            f"{result.framework_mean_ns / 1e3:.2f} us",
            f"{result.naive_mean_ns / 1e3:.2f} us",
            f"{result.percent_deviation:.3f} %",
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for i, row in enumerate(rows):
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)))
        if i == 0:
            lines.append("-+-".join("-" * w for w in widths))
    _write_output("\n".join(lines) + "\n", config.out, stdout)
    if worst >= config.max_deviation_pct:
        stderr.write(f"validation failed: worst deviation {worst:.3f}% "
                     f">= {config.max_deviation_pct}%\n")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_compare(config: CliConfig, stdout: TextIO) -> int:
    if len(config.documents) < 2:
        raise UsageError("compare needs a baseline and at least one candidate document")
    docs = _load_documents(config.documents)
    matrix = report.compare(docs[0], docs[1:])
    _write_output(report.render_comparison(matrix), config.out, stdout)
    if config.figures_dir:
        figures.render_comparison_figures(matrix, Path(config.figures_dir))
    return EXIT_OK


def _cmd_plot(config: CliConfig, stdout: TextIO) -> int:
    if not config.documents:
        raise UsageError("plot needs at least one run document")
    docs = _load_documents(config.documents)
    _write_output(report.emit_plot_series(docs, config.axis), config.out, stdout)
    if config.figures_dir:
        figures.render_series_figures(docs, config.axis, Path(config.figures_dir))
    return EXIT_OK


def main(
    argv: Optional[Sequence[str]] = None,
    *,
    clock: Optional[Clock] = None,
    registry: Optional[Registry] = None,
    env: Optional[EnvMeta] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Run the CLI; keyword arguments exist so tests can inject scripted
    clocks, fixed environments, and synthetic registries."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_args(argv)
        registry = registry or build_registry()
        if config.command == "run":
            return _cmd_run(config, registry, clock, env, stdout, stderr)
        if config.command == "validate":
            return _cmd_validate(config, registry, clock, stdout, stderr)
        if config.command == "compare":
            return _cmd_compare(config, stdout)
        if config.command == "plot":
            return _cmd_plot(config, stdout)
        for name in registry.names():
            stdout.write(name + "\n")
        return EXIT_OK
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAILURE
    except BootbenchError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILURE


def entry() -> None:
    sys.exit(main())
