"""Seeded pseudo-random numbers with portable integer semantics.

SplitMix64 (Steele, Lea, Flood 2014) is implemented directly on 64-bit
integer arithmetic so that a given seed produces the same stream on every
platform and Python build. All stochastic procedures in this package
(k-means++ initialization and anything derived from it) draw from this
generator, which is what makes seeded results bit-reproducible.
"""

from __future__ import annotations

from typing import Sequence

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator; one instance per seeded procedure."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        bound = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < bound:
                return u % n

    def choice_weighted(self, weights: Sequence[float]) -> int:
        """Index drawn with probability proportional to the given weights.

        Weights must be non-negative with a positive sum.
        """
        total = 0.0
        for w in weights:
            if w < 0:
                raise ValueError("weights must be non-negative")
            total += w
        if total <= 0:
            raise ValueError("weights must have a positive sum")
        target = self.random() * total
        acc = 0.0
        last_positive = 0
        for i, w in enumerate(weights):
            if w > 0:
                last_positive = i
            acc += w
            if target < acc:
                return i
        # float round-off can leave target == acc; fall back deterministically
        return last_positive
