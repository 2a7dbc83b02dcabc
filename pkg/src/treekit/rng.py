"""Deterministic pseudo-randomness used for splits and training shuffles.

Everything that needs randomness in this package draws from the splitmix64
sequence so that results are reproducible bit-for-bit across runs, platforms
and reimplementations in other languages.
"""

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """The splitmix64 generator: a 64-bit counter passed through a mixer.

    Reference sequence from seed 0 starts 0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4, 0x06C45D188009454F (frozen in the test suite).
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def randbelow(self, n: int) -> int:
        """Uniform-ish integer in [0, n). Plain modulo reduction; the bias is
        negligible for the small n used here and keeps the sequence portable."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def choice(self, items):
        return items[self.randbelow(len(items))]


def shuffled(items, rng: SplitMix64) -> list:
    """Fisher-Yates shuffle (copy) driven by the given generator."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.randbelow(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
