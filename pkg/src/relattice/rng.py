"""Deterministic 64-bit generator shared by every checking path.

The compiled kernels, the pure-Python kernels, and the object-level
evaluator must consume identical random streams so that a (seed, trials)
pair names the same experiment everywhere.  splitmix64 is trivial to
reproduce in C, so it is used instead of the stdlib Mersenne twister.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK64
        return z ^ (z >> 31)

    def bits(self, n: int) -> int:
        """An integer with n random bits; draws ceil(n / 64) words, low word first."""
        if n <= 0:
            return 0
        value = 0
        shift = 0
        while shift < n:
            value |= self.next_u64() << shift
            shift += 64
        return value & ((1 << n) - 1)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n
