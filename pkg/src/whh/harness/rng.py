"""SplitMix64: a tiny seedable generator that is easy to reproduce in any language.

State update and output mix, all arithmetic modulo 2**64::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Floats take the top 53 bits: ``(z >> 11) * 2**-53`` in [0, 1). Normals use
Box-Muller on two consecutive uniforms (cosine branch only).
"""
from __future__ import annotations

import math

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo=0.0, hi=1.0, size=None):
        if size is None:
            return lo + (hi - lo) * self.random()
        return lo + (hi - lo) * np.array([self.random() for _ in range(int(np.prod(size)))]).reshape(size)

    def normal(self, size=None):
        def one():
            u1 = 1.0 - self.random()  # (0, 1]
            u2 = self.random()
            return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

        if size is None:
            return one()
        return np.array([one() for _ in range(int(np.prod(size)))]).reshape(size)

    def log_uniform(self, lo, hi, size=None):
        return np.exp(self.uniform(math.log(lo), math.log(hi), size))

    def choice(self, seq):
        return seq[min(int(self.random() * len(seq)), len(seq) - 1)]

    def spawn(self, index: int) -> "SplitMix64":
        """Independent stream for trial ``index`` (seed mixed with the index)."""
        child = SplitMix64(self.state ^ ((index * GOLDEN) & MASK))
        child.next_u64()
        return child
