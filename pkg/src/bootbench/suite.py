"""Built-in kernel benchmark definitions.

Registration is cheap: buffers and random data are created by each
definition's factory only when the benchmark actually runs. Every kernel
definition carries a verifier that recomputes the expected result once, on
an untimed invocation, against a straightforward single-shot reference.

Scalars are fixed per family: zaxpy uses a = 2, GEMM uses alpha = 1 and
beta = 0.5 on random operands.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .kernels import DeviceBuffer, KernelConfig, teams_for
from .registry import BenchmarkDef, Registry, Runnable, benchmark_name

DEFAULT_SIZES = (2**12, 2**16)
DEFAULT_DTYPES = ("f64", "f32", "i32")
DEFAULT_TPB = (128, 256, 512, 1024)
DEFAULT_GEMM_SIDES = (256,)

ZAXPY_FACTOR = 2
GEMM_ALPHA = 1.0
GEMM_BETA = 0.5

_FLOAT_EPS = {"f64": np.finfo(np.float64).eps, "f32": np.finfo(np.float32).eps}


def _array_init_def(cfg: KernelConfig) -> BenchmarkDef:
    def factory() -> Runnable:
        buf = DeviceBuffer.alloc(cfg.dtype, cfg.n)

        def verify(_result) -> None:
            assert not buf.data.any(), "buffer contains nonzero elements"

        return Runnable(body=lambda: kernels.array_init(buf, cfg), verify=verify)

    return BenchmarkDef(benchmark_name("array_init", cfg), "array_init", cfg,
                        "simple", factory)


def _zaxpy_def(cfg: KernelConfig) -> BenchmarkDef:
    def factory() -> Runnable:
        x = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        y = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        z = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        kernels.init_random(x, cfg.seed)
        kernels.init_random(y, cfg.seed + 1)
        factor = x.data.dtype.type(ZAXPY_FACTOR)

        def verify(_result) -> None:
            expected = factor * x.data + y.data
            assert np.array_equal(z.data, expected), "z != a*x + y"

        return Runnable(
            body=lambda: kernels.zaxpy(z, x, y, ZAXPY_FACTOR, cfg),
            verify=verify,
        )

    return BenchmarkDef(benchmark_name("zaxpy", cfg), "zaxpy", cfg, "simple", factory)


def _atomic_capture_def(cfg: KernelConfig) -> BenchmarkDef:
    def factory() -> Runnable:
        src = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        out = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        kernels.init_random(src, cfg.seed)
        expected = np.sort(src.data[src.data > 0])

        def verify(count) -> None:
            assert count == expected.size, "positive count mismatch"
            assert np.array_equal(np.sort(out.data[:count]), expected), \
                "captured multiset mismatch"

        return Runnable(
            body=lambda: kernels.atomic_capture(src, out, cfg),
            verify=verify,
        )

    return BenchmarkDef(benchmark_name("atomic_capture", cfg), "atomic_capture",
                        cfg, "simple", factory)


def _atomic_update_def(cfg: KernelConfig) -> BenchmarkDef:
    def factory() -> Runnable:
        src = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        kernels.init_random(src, cfg.seed)

        def verify(total) -> None:
            if cfg.dtype == "i32":
                assert total == int(src.data.sum(dtype=np.int64)), "integer sum mismatch"
            else:
                reference = float(src.data.sum(dtype=np.float64))
                bound = cfg.n * _FLOAT_EPS[cfg.dtype] * float(np.abs(src.data).sum(dtype=np.float64))
                assert abs(total - reference) <= bound, \
                    f"float sum off by {abs(total - reference)} (bound {bound})"

        return Runnable(
            body=lambda: kernels.atomic_update(src, cfg),
            verify=verify,
        )

    return BenchmarkDef(benchmark_name("atomic_update", cfg), "atomic_update",
                        cfg, "simple", factory)


def _gemm_def(cfg: KernelConfig) -> BenchmarkDef:
    """GEMM updates C in place, so each sample re-seeds C from a kept copy."""

    def factory() -> Runnable:
        a = DeviceBuffer.alloc_matrix(cfg.dtype, cfg.n)
        b = DeviceBuffer.alloc_matrix(cfg.dtype, cfg.n)
        c = DeviceBuffer.alloc_matrix(cfg.dtype, cfg.n)
        scratch = DeviceBuffer.alloc_matrix(cfg.dtype, cfg.n)
        kernels.init_random(a, cfg.seed)
        kernels.init_random(b, cfg.seed + 1)
        c0 = np.empty_like(c.data)
        gen = np.random.default_rng(cfg.seed + 2)
        c0[...] = gen.uniform(-1.0, 1.0, size=c0.shape)

        def setup() -> None:
            c.data[...] = c0

        def verify(_result) -> None:
            # naive-summation reference on a separate path from the kernel's @
            expected = GEMM_ALPHA * np.einsum("ik,kj->ij", a.data, b.data, optimize=False)
            expected = expected + c.data.dtype.type(GEMM_BETA) * c0
            rtol = 1e-12 if cfg.dtype == "f64" else 1e-4
            assert np.allclose(c.data, expected, rtol=rtol, atol=rtol), \
                "gemm result outside tolerance"

        return Runnable(
            body=lambda: kernels.gemm(a, b, c, GEMM_ALPHA, GEMM_BETA, cfg,
                                      scratch=scratch),
            setup=setup,
            verify=verify,
        )

    return BenchmarkDef(benchmark_name("gemm", cfg), "gemm", cfg, "advanced", factory)


def build_registry(
    sizes: Sequence[int] = DEFAULT_SIZES,
    dtypes: Sequence[str] = DEFAULT_DTYPES,
    tpb_values: Sequence[int] = DEFAULT_TPB,
    gemm_sides: Sequence[int] = DEFAULT_GEMM_SIDES,
    seed: int = 0,
) -> Registry:
    """The default suite: 1-D kernels swept over size, dtype and
    threads-per-team (teams adjusted to cover n), plus float GEMM."""
    registry = Registry()
    makers = (_array_init_def, _zaxpy_def, _atomic_capture_def, _atomic_update_def)
    for make in makers:
        for n in sizes:
            for dtype in dtypes:
                for tpb in tpb_values:
                    cfg = KernelConfig(dtype=dtype, n=n, teams=teams_for(n, tpb),
                                       threads_per_team=tpb, seed=seed)
                    registry.register(make(cfg))
    for side in gemm_sides:
        for dtype in ("f64", "f32"):
            cfg = KernelConfig(dtype=dtype, n=side, teams=teams_for(side, 256),
                               threads_per_team=256, seed=seed)
            registry.register(_gemm_def(cfg))
    return registry
