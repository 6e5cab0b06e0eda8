"""Splittable deterministic random numbers (splitmix64).

Both simulator backends implement this generator with identical update
order, so trajectories are bit-identical across the compiled and the pure
Python kernel. ``split`` derives independent child seeds for fan-out runs.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def split(seed: int, index: int) -> int:
    """Child seed for stream ``index`` of ``seed``."""
    return mix((seed + GOLDEN * (index + 1)) & MASK64)


class SplitMix64:
    """Reference generator; the simulator kernels inline the same steps."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix(self.state)

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * INV_2_53
