"""Seeded deterministic random number generation.

The simulator uses splitmix64 throughout: it is tiny, fast, has a documented
reference algorithm, and produces bit-identical streams for a given seed on
any platform. Run reports carry the algorithm identifier so a replay can
verify it is drawing from the same generator.
"""

from __future__ import annotations

ALGORITHM = "splitmix64"

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 stream seeded with a 64-bit unsigned integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        if seed < 0 or seed > _MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self._state = seed

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) built from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * 2.0**-53
