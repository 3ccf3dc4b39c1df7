"""Bit-reproducible 64-bit xorshift* generator.

State update (Marsaglia xorshift, shifts 12/25/27) followed by multiplication
by 0x2545F4914F6CDD1D modulo 2**64. The user seed is passed through one
splitmix64 step so that seed 0 is valid. Doubles take the top 53 bits.
"""

import numpy as np

MASK = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class XorShiftStar:
    def __init__(self, seed: int):
        state = _splitmix64(int(seed) & MASK)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK

    def uniform(self) -> float:
        """Double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform_sym(self) -> float:
        """Double in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] (inclusive); modulo bias is negligible for small ranges."""
        return lo + self.next_u64() % (hi - lo + 1)

    def complex_array(self, shape) -> np.ndarray:
        """Entries with real and imaginary parts uniform in [-1, 1), row-major draw order."""
        size = int(np.prod(shape))
        out = np.empty(size, dtype=np.complex128)
        for k in range(size):
            re = self.uniform_sym()
            im = self.uniform_sym()
            out[k] = complex(re, im)
        return out.reshape(shape)

    def unimodular(self, size) -> np.ndarray:
        angles = np.array([2.0 * np.pi * self.uniform() for _ in range(size)])
        return np.exp(1j * angles)
