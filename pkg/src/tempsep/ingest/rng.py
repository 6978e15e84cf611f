"""Portable seeded sampling for instance generation.

Bits come from numpy's PCG64 seeded through ``SeedSequence(seed,
spawn_key=(crc32(stream),))``; both algorithms are specified independently of
platform.  Bounded integers use rejection on the raw 64-bit output and distinct
samples use a partial Fisher-Yates shuffle, so the mapping from bits to values
is fixed here rather than inherited from a library version.
"""

from __future__ import annotations

import zlib

import numpy as np

_TWO64 = 1 << 64


class PortableRng:
    def __init__(self, seed: int, stream: str = ""):
        seq = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(stream.encode()),))
        self._bits = np.random.PCG64(seq)

    def _raw(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n < 1:
            raise ValueError("n must be >= 1")
        limit = _TWO64 - _TWO64 % n
        while True:
            x = self._raw()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def sample(self, lo: int, hi: int, k: int) -> list[int]:
        """``k`` distinct integers from ``[lo, hi]``, sorted."""
        pool = list(range(lo, hi + 1))
        if k > len(pool):
            raise ValueError(f"cannot draw {k} distinct values from {len(pool)}")
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])
