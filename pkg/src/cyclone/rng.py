"""Deterministic, implementation-portable randomness.

Game logs must replay bit-identically on any platform or future runtime,
so shuffling is pinned to a fixed, documented algorithm rather than the
host language's default generator:

* stream: SplitMix64 (Steele et al.), 64-bit state, output i of seed s is
  ``mix64(s + (i + 1) * GOLDEN)``;
* bounded draws: rejection sampling on the top of the 64-bit range;
* shuffle: Fisher-Yates from the top index down.

Per-game seeds in a batch are the successive outputs of a SplitMix64
stream seeded with the batch seed, so workers can derive game ``i``'s
seed by random access without sharing state.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Tiny fixed-algorithm PRNG; only used where portability matters."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (MASK64 + 1) - (MASK64 + 1) % n
        while True:
            v = self.next_u64()
            if v < threshold:
                return v % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(base: int, index: int) -> int:
    """Output ``index`` of the SplitMix64 stream seeded with ``base``."""
    return mix64((base + (index + 1) * GOLDEN) & MASK64)
