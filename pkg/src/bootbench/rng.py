"""Seedable, portable pseudo-random stream used by the bootstrap resampler.

Confidence bounds must be reproducible from ``(data, seed)`` alone, on any
platform, by an independent implementation in any language. The stream
contract, in full:

* Generator: SplitMix64. With 64-bit wrapping arithmetic, the k-th raw output
  (k = 1, 2, ...) is ``mix(seed + k * 0x9E3779B97F4A7C15)`` where::

      mix(z): z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
              z ^= z >> 27;  z *= 0x94D049BB133111EB
              return z ^ (z >> 31)

* Bounded draw: an index into ``n`` items is ``output % n``. Nothing is ever
  discarded or redrawn.

Because the k-th output depends only on ``(seed, k)``, any block of the
stream can be produced out of order (or in parallel) without changing a
single draw; :func:`output_block` exploits this for vectorised generation
that is bit-identical to the scalar :class:`SplitMix64`.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Scalar reference generator implementing the stream contract."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_index(self, n: int) -> int:
        """Draw an index in ``[0, n)`` per the bounded-draw rule."""
        return self.next_u64() % n


def output_block(seed: int, start: int, count: int) -> np.ndarray:
    """Raw outputs at stream positions ``start .. start+count-1`` (0-based).

    Position ``t`` holds the (t+1)-th output of ``SplitMix64(seed)``; the
    result is a uint64 array bit-identical to ``count`` scalar draws.
    """
    ks = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK64) + ks * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def index_block(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """Vectorised indices in ``[0, n)`` for stream positions ``start`` on."""
    return (output_block(seed, start, count) % np.uint64(n)).astype(np.intp)
