"""Seeded sample generation for verification sweeps and reports.

The generator is a 64-bit linear congruential generator with Knuth's MMIX
multiplier, so that a (command, seed) pair produces the same sample stream on
any platform and any implementation that documents the same constants.
"""

from __future__ import annotations

import numpy as np

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


class Lcg:
    """Deterministic 64-bit linear congruential generator.

    state <- (a * state + c) mod 2^64, doubles from the top 53 bits.
    """

    def __init__(self, seed: int):
        self.state = (int(seed) ^ 0x5DEECE66D) & _MASK64

    def next_u64(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) & _MASK64
        return self.state

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = self.next_u64() >> 11  # 53 significant bits
        return lo + (hi - lo) * (u / float(1 << 53))

    def point_in_cube(self, dim: int, radius: float) -> np.ndarray:
        return np.array([self.uniform(-radius, radius) for _ in range(dim)])

    def point_in_ball(self, dim: int, radius: float) -> np.ndarray:
        # Rejection from the bounding cube keeps the stream reproducible.
        while True:
            p = self.point_in_cube(dim, radius)
            if np.dot(p, p) <= radius * radius:
                return p

    def unit_vector(self, dim: int) -> np.ndarray:
        while True:
            p = self.point_in_ball(dim, 1.0)
            n = np.linalg.norm(p)
            if n > 1e-3:
                return p / n

    def points_in_ball(self, n: int, dim: int, radius: float) -> np.ndarray:
        return np.array([self.point_in_ball(dim, radius) for _ in range(n)])

    def log_radial_points(self, n: int, dim: int, r_min: float, r_max: float) -> np.ndarray:
        """Points with log-uniform radius in [r_min, r_max], uniform direction.

        Dense near the origin, so bounded sets of any scale are hit even when
        r_max is large.
        """
        out = np.empty((n, dim))
        for i in range(n):
            r = r_min * (r_max / r_min) ** self.uniform()
            out[i] = r * self.unit_vector(dim)
        return out
