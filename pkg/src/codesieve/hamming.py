"""Fixed-length binary words and uniform samplers over spheres and regions.

A :class:`Word` stores its coordinates in a Python int, coordinate 0 being the
most significant bit, so ``Word.from_str("1100")`` has coordinates 0 and 1 set
and its hex form is ``"c"``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 1024


@dataclass(frozen=True)
class Word:
    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension {self.n} outside [0, {MAX_DIM}]")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits do not fit in the word length")

    @classmethod
    def from_str(cls, s: str) -> "Word":
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_support(cls, n: int, support) -> "Word":
        bits = 0
        for i in support:
            bits |= 1 << (n - 1 - i)
        return cls(bits, n)

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> "Word":
        return cls((1 << n) - 1, n)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b") if self.n else ""

    def __len__(self) -> int:
        return self.n

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        """Set coordinates in ascending index order."""
        return [i for i in range(self.n) if (self.bits >> (self.n - 1 - i)) & 1]

    def __xor__(self, other: "Word") -> "Word":
        return add(self, other)

    def __and__(self, other: "Word") -> "Word":
        return meet(self, other)

    def to_hex(self) -> str:
        return f"n={self.n}:{self.bits:x}"

    @classmethod
    def from_hex(cls, s: str) -> "Word":
        head, _, body = s.partition(":")
        if not head.startswith("n="):
            raise ValueError(f"malformed word {s!r}")
        return cls(int(body, 16), int(head[2:]))


def weight(x: Word) -> int:
    return x.bits.bit_count()


def _same_length(x: Word, y: Word) -> None:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} != {y.n}")


def add(x: Word, y: Word) -> Word:
    _same_length(x, y)
    return Word(x.bits ^ y.bits, x.n)


def meet(x: Word, y: Word) -> Word:
    _same_length(x, y)
    return Word(x.bits & y.bits, x.n)


def project(x: Word, c: Word) -> Word:
    """Coordinates of x on supp(c), in ascending index order, as a |c|-length word."""
    _same_length(x, c)
    bits = 0
    for i in c.support():
        bits = (bits << 1) | ((x.bits >> (x.n - 1 - i)) & 1)
    return Word(bits, c.weight)


@dataclass(frozen=True)
class Seed:
    """A 64-bit seed plus a stream index; each (seed, stream) is an independent generator."""

    seed: int
    stream: int = 0

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def spawn(self, i: int) -> "Seed":
        # mix the child index into the stream so siblings never collide
        return Seed(self.seed, self.stream * 1_000_003 + i + 1)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, Seed):
        return rng.rng()
    if isinstance(rng, np.random.Generator):
        return rng
    return Seed(int(rng)).rng()


def sample_sphere(n: int, w: int, rng) -> Word:
    """Uniform word of weight w in dimension n."""
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} outside [0, {n}]")
    g = _as_rng(rng)
    return Word.from_support(n, g.choice(n, size=w, replace=False).tolist())


def sample_sphere_many(n: int, w: int, count: int, rng) -> list[Word]:
    g = _as_rng(rng)
    return [sample_sphere(n, w, g) for _ in range(count)]


def sample_region(n: int, c: Word, w: int, alpha: int, rng) -> Word:
    """Uniform word x of weight w with |x & c| = alpha."""
    if c.n != n:
        raise ValueError("center length differs from n")
    inside = c.support()
    outside = [i for i in range(n) if (c.bits >> (n - 1 - i)) & 1 == 0]
    if not (0 <= alpha <= min(w, len(inside)) and w - alpha <= len(outside)):
        raise ValueError(f"empty region: n={n}, |c|={len(inside)}, w={w}, alpha={alpha}")
    g = _as_rng(rng)
    picked = [inside[i] for i in g.choice(len(inside), size=alpha, replace=False)]
    picked += [outside[i] for i in g.choice(len(outside), size=w - alpha, replace=False)]
    return Word.from_support(n, picked)
