"""Portable seeded random stream (splitmix64).

Every randomized routine in the package draws from this stream in a fixed,
documented order, so a seed reproduces outputs bit-for-bit on any platform.
"""

from __future__ import annotations

from typing import MutableSequence, TypeVar

import numpy as np

T = TypeVar("T")

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SeededRng:
    """splitmix64 generator.

    ``uniform()`` uses the top 53 bits of the next word, and
    ``below(n)`` is ``floor(uniform() * n)``.
    """

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed & _MASK
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return int(self.uniform() * n)

    def below_many(self, bounds) -> np.ndarray:
        """Same values as ``[self.below(b) for b in bounds]``, computed in bulk.

        splitmix64 output ``t`` depends only on ``seed + t * golden``, so a
        block of words can be mixed at once with wrapping uint64 arithmetic.
        """
        bounds = np.asarray(bounds, dtype=np.int64)
        if bounds.size and bounds.min() <= 0:
            raise ValueError("below() needs a positive bound")
        count = bounds.size
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(_GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z ^= z >> np.uint64(31)
        self._state = (self._state + count * _GOLDEN) & _MASK
        u = (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
        return (u * bounds.astype(np.float64)).astype(np.int64)

    def shuffle(self, items: MutableSequence[T]) -> None:
        """In-place Fisher-Yates, walking positions from the front."""
        size = len(items)
        if size < 2:
            return
        offsets = self.below_many(np.arange(size, 1, -1)).tolist()
        for t, off in enumerate(offsets):
            j = t + off
            items[t], items[j] = items[j], items[t]

    def sample(self, n: int, r: int) -> list[int]:
        """Uniform ``r``-subset of ``range(n)``, sorted ascending.

        Draws exactly ``r`` values (a partial front-to-back Fisher-Yates).
        """
        if not 0 <= r <= n:
            raise ValueError(f"cannot sample {r} of {n}")
        pool = list(range(n))
        for t in range(r):
            j = t + self.below(n - t)
            pool[t], pool[j] = pool[j], pool[t]
        return sorted(pool[:r])

    def permutation(self, n: int) -> list[int]:
        items = list(range(n))
        self.shuffle(items)
        return items
