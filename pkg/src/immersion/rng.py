"""Portable seeded randomness.

Every random draw in the package comes from SplitMix64.  Its state update is

    state <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output z ^ (z >> 31)

so the i-th output (i starting at 1) is a pure function of ``seed + i * gamma``.
That makes bulk generation vectorizable while staying bit-identical to the
sequential stream on every platform.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK
        return _mix(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        # rejection sampling keeps the draw unbiased
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def bulk_u64(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as a uint64 array (advances the state)."""
        idx = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + idx * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GAMMA) & MASK
        return z

    def bulk_random(self, count: int) -> np.ndarray:
        return (self.bulk_u64(count) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
