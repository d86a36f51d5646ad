"""Portable 64-bit xorshift* generator.

Every stochastic routine in the package draws from this generator so that a
(seed, inputs) pair reproduces bit-identical output on any platform.  Seeds
are scrambled through splitmix64 before use, which also keeps the xorshift
state away from zero.
"""

import math

import numpy as np

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x):
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(seed, i):
    """Derive an independent child seed for stream ``i`` of ``seed``."""
    return splitmix64((seed & MASK64) ^ splitmix64(i & MASK64))


class XorShiftStar:
    """xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D)."""

    def __init__(self, seed=0):
        state = splitmix64(int(seed) & MASK64)
        self._state = state or _GOLDEN
        self._spare = None

    def next_u64(self):
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * MULTIPLIER) & MASK64

    def random(self):
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.random()

    def below(self, n):
        """Uniform integer in [0, n) by multiply-shift."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def normal(self):
        """Standard normal deviate (Box-Muller, both outputs used)."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = 1.0 - self.random()  # (0, 1], keeps log finite
        u2 = self.random()
        rad = math.sqrt(-2.0 * math.log(u1))
        self._spare = rad * math.sin(2.0 * math.pi * u2)
        return rad * math.cos(2.0 * math.pi * u2)

    def normals(self, n):
        return np.array([self.normal() for _ in range(n)], dtype=float)

    def uniforms(self, n):
        return np.array([self.random() for _ in range(n)], dtype=float)

    def triplet(self, n):
        """Three distinct indices in [0, n), drawn without replacement."""
        i = self.below(n)
        j = self.below(n - 1)
        if j >= i:
            j += 1
        k = self.below(n - 2)
        lo, hi = (i, j) if i < j else (j, i)
        if k >= lo:
            k += 1
        if k >= hi:
            k += 1
        return i, j, k
