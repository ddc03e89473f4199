"""Seeded, platform-independent random streams.

Draws come from the Philox-4x64 counter-based generator (10 rounds, the
Salmon et al. multiplier/Weyl constants shipped with numpy). Its output is
a pure function of ``(key, counter)``, so a seed fixes the stream bit for
bit on every platform. Normal variates are produced with the Box-Muller
transform from pairs of uniforms rather than numpy's ziggurat, keeping the
mapping from uniforms to normals explicit and stable across numpy releases.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


class Rng:
    """A single-owner random stream.

    Parameters
    ----------
    seed : int
        Any integer; reduced modulo 2**64 to form the Philox key.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._bitgen = np.random.Philox(key=self.seed)
        self._gen = np.random.Generator(self._bitgen)

    def __repr__(self):
        return f"Rng(seed={self.seed})"

    def random(self, size=None) -> np.ndarray | float:
        """Uniform doubles on [0, 1) with 53 random bits each."""
        return self._gen.random(size)

    def uniform(self, low: float, high: float, size=None):
        u = self.random(size)
        return low + (high - low) * u

    def normal(self, size=None, std: float = 1.0, mean: float = 0.0):
        """Gaussian draws via Box-Muller, consuming two uniforms per pair."""
        count = 1 if size is None else int(np.prod(size))
        pairs = (count + 1) // 2
        u = self.random(2 * pairs)
        # 1 - u lies in (0, 1], so the log is finite
        radius = np.sqrt(-2.0 * np.log1p(-u[:pairs]))
        angle = 2.0 * np.pi * u[pairs:]
        z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]
        z = mean + std * z
        if size is None:
            return float(z[0])
        return z.reshape(size)

    def integers(self, high: int, size=None):
        """Integers uniform on ``[0, high)``."""
        return self._gen.integers(0, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def spawn(self, stream: int) -> "Rng":
        """Derive an independent child stream labelled by ``stream``.

        The child seed mixes parent seed and label with the SplitMix64
        finalizer, so children of different labels do not overlap.
        """
        z = (self.seed + 0x9E3779B97F4A7C15 * (int(stream) + 1)) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return Rng(z ^ (z >> 31))
