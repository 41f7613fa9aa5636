"""Host side of the shared-library kernel plugin interface.

A plugin exports three C symbols (``bb_abi_version``, ``bb_kernel_count``,
``bb_kernel_get``) and receives a fixed-layout config block; the byte-level
contract lives in ``plugin/ABI.md`` in the source tree. Timing happens
entirely host-side around ``entry()``, so kernels compiled by different
toolchains run under the identical statistical pipeline and join in one
comparison matrix. The host allocates and owns every buffer; plugins never
free host memory and the host never frees plugin strings.
"""

from __future__ import annotations

import ctypes
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BootbenchError
from .kernels import DeviceBuffer, KernelConfig, init_random, teams_for
from .registry import BenchmarkDef, Runnable, benchmark_name

SUPPORTED_ABI = 1
DTYPE_CODES = {0: "f64", 1: "f32", 2: "i32"}

# Fixed by the zaxpy family contract in ABI.md.
ZAXPY_FACTOR = 2


class LoadFailure(BootbenchError):
    """Plugin library missing, unloadable, or structurally invalid."""


class AbiMismatch(BootbenchError):
    """Plugin compiled against an ABI version this host does not speak."""


class PluginKernelError(BootbenchError):
    """A plugin entry point returned a nonzero status."""


class UnknownKernelFamily(UserWarning):
    """Plugin kernel has no host oracle; it is timed but not verified."""


class PluginConfigBlock(ctypes.Structure):
    """Mirror of ``bb_config``: 24 bytes, field order n, teams,
    threads_per_team, seed."""

    _fields_ = [
        ("n", ctypes.c_uint64),
        ("teams", ctypes.c_uint32),
        ("threads_per_team", ctypes.c_uint32),
        ("seed", ctypes.c_uint64),
    ]


ENTRY_TYPE = ctypes.CFUNCTYPE(
    ctypes.c_int,
    ctypes.POINTER(PluginConfigBlock),
    ctypes.c_void_p,
    ctypes.c_void_p,
)


class PluginKernelDescriptor(ctypes.Structure):
    """Mirror of ``bb_kernel_descriptor``."""

    _fields_ = [
        ("name", ctypes.c_char_p),
        ("dtype_code", ctypes.c_uint32),
        ("entry", ENTRY_TYPE),
    ]


def _bind(path: Path) -> ctypes.CDLL:
    try:
        lib = ctypes.CDLL(str(path))
    except OSError as exc:
        raise LoadFailure(f"cannot load plugin {path}: {exc}") from exc
    try:
        lib.bb_abi_version.restype = ctypes.c_uint32
        lib.bb_abi_version.argtypes = []
        lib.bb_kernel_count.restype = ctypes.c_uint32
        lib.bb_kernel_count.argtypes = []
        lib.bb_kernel_get.restype = PluginKernelDescriptor
        lib.bb_kernel_get.argtypes = [ctypes.c_uint32]
    except AttributeError as exc:
        raise LoadFailure(f"plugin {path} is missing an ABI symbol: {exc}") from exc
    return lib


def _zaxpy_def(lib: ctypes.CDLL, descriptor: PluginKernelDescriptor,
               family: str, cfg: KernelConfig) -> BenchmarkDef:
    entry = descriptor.entry

    def factory() -> Runnable:
        # x occupies the first n elements, y the second n (ABI.md); one
        # seeded stream fills the whole input buffer.
        joined = DeviceBuffer.alloc(cfg.dtype, 2 * cfg.n)
        out = DeviceBuffer.alloc(cfg.dtype, cfg.n)
        init_random(joined, cfg.seed)
        block = PluginConfigBlock(cfg.n, cfg.teams, cfg.threads_per_team, cfg.seed)
        in_ptr = joined.data.ctypes.data_as(ctypes.c_void_p)
        out_ptr = out.data.ctypes.data_as(ctypes.c_void_p)
        # keep the library (and through it the descriptor) alive
        refs = (lib, descriptor, joined, out)

        def body():
            status = entry(ctypes.byref(block), in_ptr, out_ptr)
            if status != 0:
                raise PluginKernelError(
                    f"{family} entry returned status {status}")
            data = refs[3].data
            return data[0].item() + data[-1].item()

        verify = None
        if family == "zaxpy":
            factor = joined.data.dtype.type(ZAXPY_FACTOR)
            x, y = joined.data[:cfg.n], joined.data[cfg.n:]

            def verify(_result) -> None:
                expected = factor * x + y
                assert np.array_equal(out.data, expected), \
                    "plugin zaxpy output differs from host oracle"

        return Runnable(body=body, verify=verify)

    return BenchmarkDef(benchmark_name(family, cfg), family, cfg, "simple",
                        factory)


def load_plugin(
    path: str | Path,
    *,
    sizes: Sequence[int] = (2**16,),
    threads_per_team: int = 256,
    seed: int = 0,
) -> list[BenchmarkDef]:
    """Wrap every kernel of a plugin as benchmark definitions.

    Each kernel yields one definition per requested size, named with the
    canonical scheme so records join against host-native kernels of the
    same family in a comparison matrix.
    """
    path = Path(path)
    lib = _bind(path)
    version = int(lib.bb_abi_version())
    if version != SUPPORTED_ABI:
        raise AbiMismatch(
            f"plugin {path} reports ABI version {version}; "
            f"this host supports version {SUPPORTED_ABI}"
        )
    count = int(lib.bb_kernel_count())
    defs: list[BenchmarkDef] = []
    for index in range(count):
        descriptor = lib.bb_kernel_get(index)
        if not descriptor.name or not descriptor.entry:
            raise LoadFailure(f"plugin {path} returned a null descriptor "
                              f"at index {index}")
        family = descriptor.name.decode()
        dtype = DTYPE_CODES.get(int(descriptor.dtype_code))
        if dtype is None:
            raise LoadFailure(
                f"plugin {path} kernel {family!r} has unknown dtype code "
                f"{descriptor.dtype_code}"
            )
        if family != "zaxpy":
            warnings.warn(
                f"plugin kernel {family!r} has no host oracle; verification "
                f"will be skipped",
                UnknownKernelFamily,
                stacklevel=2,
            )
        for n in sizes:
            cfg = KernelConfig(dtype=dtype, n=n,
                               teams=teams_for(n, threads_per_team),
                               threads_per_team=threads_per_team, seed=seed)
            defs.append(_zaxpy_def(lib, descriptor, family, cfg))
    return defs
