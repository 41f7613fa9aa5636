"""CPU kernel suite: array init, zaxpy, atomic capture/update, GEMM.

Each kernel is parameterized by datatype, element count, and a
teams/threads-per-team decomposition. On this CPU backend the decomposition
maps to a pool of ``min(teams, hardware parallelism)`` OS workers, each
claiming contiguous ``threads_per_team``-sized chunks in a grid-stride
pattern. The parameter axes stay meaningful for sweeps without pretending to
model accelerator occupancy.

A kernel invocation blocks until every worker finishes; the caller's timed
region therefore covers launch, execution, and completion. Buffers are
allocated by the caller outside any timed region. Kernels sharing buffers
must not be invoked concurrently.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, LengthMismatch

DTYPES: dict[str, type] = {"f64": np.float64, "f32": np.float32, "i32": np.int32}
TPB_CHOICES = (128, 256, 512, 1024)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class KernelConfig:
    """Parameter axes of one kernel benchmark.

    ``n`` is the element count (matrix side for GEMM-shaped kernels). When
    sweeping ``threads_per_team``, pick ``teams`` with :func:`teams_for` so
    ``teams * threads_per_team`` still covers ``n``.
    """

    dtype: str
    n: int
    teams: int
    threads_per_team: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dtype not in DTYPES:
            raise ValueError(f"unknown dtype {self.dtype!r}")
        if not _is_power_of_two(self.n):
            raise ValueError("n must be a power of two")
        if self.teams < 1:
            raise ValueError("teams must be at least 1")
        if self.threads_per_team not in TPB_CHOICES:
            raise ValueError(f"threads_per_team must be one of {TPB_CHOICES}")


def teams_for(n: int, threads_per_team: int) -> int:
    """Team count covering ``n`` elements at the given chunk width."""
    return max(1, -(-n // threads_per_team))


@dataclass
class DeviceBuffer:
    """Preallocated contiguous numeric storage for one kernel operand."""

    dtype: str
    data: np.ndarray = field(repr=False)

    @classmethod
    def alloc(cls, dtype: str, length: int) -> "DeviceBuffer":
        return cls(dtype=dtype, data=np.zeros(length, dtype=DTYPES[dtype]))

    @classmethod
    def alloc_matrix(cls, dtype: str, side: int) -> "DeviceBuffer":
        return cls(dtype=dtype, data=np.zeros((side, side), dtype=DTYPES[dtype]))

    @property
    def length(self) -> int:
        return int(self.data.size)


def init_random(buf: DeviceBuffer, seed: int) -> None:
    """Fill ``buf`` with uniform values: [-1, 1] for floats, [-100, 100]
    (inclusive) integers for i32. Deterministic per (seed, dtype, shape)."""
    gen = np.random.default_rng(seed)
    if buf.dtype == "i32":
        buf.data[...] = gen.integers(-100, 100, size=buf.data.shape,
                                     dtype=np.int32, endpoint=True)
    else:
        buf.data[...] = gen.uniform(-1.0, 1.0, size=buf.data.shape)


# ---------------------------------------------------------------------------
# Worker pool

_pool_lock = threading.Lock()
_pool: ThreadPoolExecutor | None = None


def _hardware_parallelism() -> int:
    return os.cpu_count() or 1


def _shared_pool() -> ThreadPoolExecutor:
    global _pool
    with _pool_lock:
        if _pool is None:
            _pool = ThreadPoolExecutor(
                max_workers=max(2, _hardware_parallelism()),
                thread_name_prefix="bootbench-kernel",
            )
        return _pool


def _for_each_chunk(total: int, cfg: KernelConfig, work: Callable[[int, int], None]) -> None:
    """Apply ``work(start, stop)`` over ``threads_per_team``-sized chunks.

    Worker ``w`` of ``W`` takes chunks ``w, w+W, w+2W, ...`` (grid-stride).
    Falls back to the calling thread when one worker suffices.
    """
    chunk = cfg.threads_per_team
    nchunks = -(-total // chunk)
    workers = min(cfg.teams, nchunks, _hardware_parallelism())
    if workers <= 1:
        for c in range(nchunks):
            work(c * chunk, min(total, (c + 1) * chunk))
        return

    def drive(w: int) -> None:
        for c in range(w, nchunks, workers):
            work(c * chunk, min(total, (c + 1) * chunk))

    pool = _shared_pool()
    futures = [pool.submit(drive, w) for w in range(workers)]
    for f in futures:
        f.result()


def _probe(data: np.ndarray):
    """O(1) sink token derived from a kernel's output buffer."""
    flat = data.reshape(-1)
    return flat[0].item() + flat[-1].item()


# ---------------------------------------------------------------------------
# Kernels


def array_init(buf: DeviceBuffer, cfg: KernelConfig):
    """Zero every element of ``buf`` across the worker decomposition."""
    if buf.length != cfg.n:
        raise LengthMismatch(f"buffer length {buf.length} != n {cfg.n}")

    def work(start: int, stop: int) -> None:
        buf.data[start:stop] = 0

    _for_each_chunk(cfg.n, cfg, work)
    return _probe(buf.data)


def zaxpy(z: DeviceBuffer, x: DeviceBuffer, y: DeviceBuffer, a, cfg: KernelConfig):
    """Elementwise ``z = a*x + y`` (multiply then add, in the buffer dtype)."""
    if not (z.length == x.length == y.length == cfg.n):
        raise LengthMismatch("zaxpy buffers must all have length n")
    factor = z.data.dtype.type(a)

    def work(start: int, stop: int) -> None:
        np.multiply(x.data[start:stop], factor, out=z.data[start:stop])
        np.add(z.data[start:stop], y.data[start:stop], out=z.data[start:stop])

    _for_each_chunk(cfg.n, cfg, work)
    return _probe(z.data)


def atomic_capture(src: DeviceBuffer, out: DeviceBuffer, cfg: KernelConfig) -> int:
    """Compact the strictly positive elements of ``src`` into ``out``.

    Workers claim output slots with an atomic fetch-and-add on a shared
    cursor (one claim per chunk's positive block), then write their block
    without holding the lock. Returns the positive count ``c``; the order of
    ``out[0:c]`` is unspecified and ``out[c:]`` is never touched. Zero does
    not count as positive.
    """
    if out.length < src.length:
        raise LengthMismatch("output must be at least as long as the source")
    if src.length != cfg.n:
        raise LengthMismatch(f"source length {src.length} != n {cfg.n}")
    cursor = 0
    lock = threading.Lock()

    def work(start: int, stop: int) -> None:
        nonlocal cursor
        chunk = src.data[start:stop]
        positive = chunk[chunk > 0]
        m = positive.size
        if m == 0:
            return
        with lock:
            base = cursor
            cursor += m
        out.data[base : base + m] = positive

    _for_each_chunk(cfg.n, cfg, work)
    return cursor


def atomic_update(src: DeviceBuffer, cfg: KernelConfig):
    """Sum all elements into one shared accumulator via atomic adds.

    Each worker folds its chunk and atomically adds the partial into the
    accumulator. Integer results are exact; float results depend on the
    nondeterministic accumulation order and carry the usual rounding.
    """
    if src.length != cfg.n:
        raise LengthMismatch(f"source length {src.length} != n {cfg.n}")
    integer = src.dtype == "i32"
    total = 0 if integer else 0.0
    lock = threading.Lock()

    def work(start: int, stop: int) -> None:
        nonlocal total
        chunk = src.data[start:stop]
        if integer:
            partial = int(chunk.sum(dtype=np.int64))
        else:
            partial = float(chunk.sum())
        with lock:
            total += partial

    _for_each_chunk(cfg.n, cfg, work)
    return total


def gemm(a: DeviceBuffer, b: DeviceBuffer, c: DeviceBuffer, alpha, beta,
         cfg: KernelConfig, scratch: DeviceBuffer | None = None):
    """Blocked parallel ``C = alpha*A@B + beta*C`` over square matrices.

    Row blocks of ``threads_per_team`` rows are distributed across the worker
    pool; ``C`` is updated in place. Passing a preallocated ``scratch``
    matrix keeps the invocation allocation-free (timed paths should; one is
    allocated here otherwise).
    """
    side = cfg.n
    for name, buf in (("A", a), ("B", b), ("C", c)):
        if buf.data.shape != (side, side):
            raise DimensionMismatch(f"{name} must be {side}x{side}")
    if scratch is None:
        scratch = DeviceBuffer(c.dtype, np.empty_like(c.data))
    elif scratch.data.shape != (side, side) or scratch.data.dtype != c.data.dtype:
        raise DimensionMismatch(f"scratch must be {side}x{side} {c.dtype}")
    alpha_t = c.data.dtype.type(alpha)
    beta_t = c.data.dtype.type(beta)

    def work(start: int, stop: int) -> None:
        prod = scratch.data[start:stop]
        np.matmul(a.data[start:stop], b.data, out=prod)
        np.multiply(prod, alpha_t, out=prod)
        out = c.data[start:stop]
        np.multiply(out, beta_t, out=out)
        np.add(out, prod, out=out)

    _for_each_chunk(side, cfg, work)
    return _probe(c.data)


def gemm_flops(side: int) -> int:
    """Flop count for one ``alpha*A@B + beta*C`` evaluation at size ``side``:
    2*side^3 multiply-adds plus 3*side^2 for the scalings and final add."""
    if side < 1:
        raise ValueError("side must be at least 1")
    return 2 * side**3 + 3 * side * side
