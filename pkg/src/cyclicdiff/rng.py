"""SplitMix64, the seeding generator used for every random initial cloud.

The stream is fully specified so runs reproduce across languages:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

(all arithmetic mod 2**64).  A uniform double in [0, 1) is
``(z >> 11) * 2**-53``; uniform[-1, 1) is ``2 u - 1``.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def uniform_cloud(n: int, d: int, seed: int) -> np.ndarray:
    """(n, d) array of uniform[-1, 1) values, filled point by point."""
    gen = SplitMix64(seed)
    values = [2.0 * gen.uniform() - 1.0 for _ in range(n * d)]
    return np.array(values, dtype=np.float64).reshape(n, d)


def batch_seeds(seed: int, count: int) -> list:
    """Per-run seeds for a batch, drawn from one SplitMix64 stream."""
    gen = SplitMix64(seed)
    return [gen.next_u64() for _ in range(count)]
