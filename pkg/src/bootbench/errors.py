"""Exception types shared across the package."""

from __future__ import annotations


class BootbenchError(Exception):
    """Base class for every error raised by this package."""


class ClockUnusable(BootbenchError):
    """The monotonic clock never advanced during calibration."""


class EmptyInput(BootbenchError):
    """A statistic was requested over an empty collection."""


class InsufficientData(BootbenchError):
    """Fewer data points than the statistic needs."""


class DuplicateName(BootbenchError):
    """A benchmark name was registered twice."""


class LengthMismatch(BootbenchError):
    """Kernel buffers do not have compatible lengths."""


class DimensionMismatch(BootbenchError):
    """Matrix operands do not have compatible shapes."""


class NoCommonBenchmarks(BootbenchError):
    """Compared run documents share no benchmark names."""


class UsageError(BootbenchError):
    """Bad command line; maps to exit code 64."""


class MeasurementFailure(BootbenchError):
    """A benchmark body (or its setup/teardown) raised during sampling.

    ``phase`` is one of ``"setup"``, ``"body"``, ``"teardown"``;
    ``sample_index`` is the zero-based sample being collected.
    """

    def __init__(self, phase: str, sample_index: int, message: str = ""):
        self.phase = phase
        self.sample_index = sample_index
        detail = f": {message}" if message else ""
        super().__init__(f"{phase} failed in sample {sample_index}{detail}")
