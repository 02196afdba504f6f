"""Pinned 64-bit generator for reproducible campaigns.

The generator is SplitMix64 (Steele-Lea-Flood): state advances by the
odd constant 0x9E3779B97F4A7C15 and the output is the standard
two-round xor-multiply finalizer.  This choice is part of the library's
reproducibility contract and is never changed silently.

Campaign trials are partitioned into fixed chunks of ``CHUNK_TRIALS``;
chunk i draws from an independent stream whose initial state is
``mix64(seed + i * 0x9E3779B97F4A7C15)``.  Results therefore do not
depend on how chunks are scheduled across workers.

Bounded draws use plain modulo reduction of a 64-bit output; the bias
is below m / 2^64, irrelevant at desk-scale trial counts.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

CHUNK_TRIALS = 4096


def mix64(z: int) -> int:
    """SplitMix64 output permutation of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """The SplitMix64 sequence from a 64-bit seed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, m: int) -> int:
        """Uniform-ish draw in [0, m) by modulo reduction."""
        return self.next64() % m


def chunk_stream(seed: int, index: int) -> SplitMix64:
    """The pinned independent stream for chunk `index` of a campaign."""
    return SplitMix64(mix64((seed + index * GAMMA) & MASK64))
