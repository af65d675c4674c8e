"""Random binary linear codes, code towers and puncturing.

Matrix rows are ints in the same bit order as :class:`~codesieve.hamming.Word`
(coordinate 0 is the most significant of ``n`` bits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .hamming import Seed, Word, _as_rng, sample_sphere


def _pivot_bit(n: int, col: int) -> int:
    return 1 << (n - 1 - col)


def rref(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over GF(2); returns (nonzero rows, pivot columns)."""
    work = list(rows)
    pivots = []
    r = 0
    for col in range(n):
        bit = _pivot_bit(n, col)
        piv = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def gf2_rank(rows: list[int], n: int) -> int:
    return len(rref(rows, n)[0])


def parity_from_generator(gen: list[int], n: int) -> list[int]:
    """Rows spanning the dual of the row space of ``gen``."""
    basis, pivots = rref(gen, n)
    pivot_set = set(pivots)
    parity = []
    for f in range(n):
        if f in pivot_set:
            continue
        fb = _pivot_bit(n, f)
        h = fb
        for row, p in zip(basis, pivots):
            if row & fb:
                h |= _pivot_bit(n, p)
        parity.append(h)
    return parity


@dataclass(frozen=True)
class LinearCode:
    n: int
    k: int
    generator: tuple[int, ...]
    parity: tuple[int, ...]

    def contains(self, x: Word) -> bool:
        return contains(self, x)

    def codewords(self):
        """All 2^k codewords as ints (small k only)."""
        if self.k > 24:
            raise ValueError("refusing to enumerate more than 2^24 codewords")
        words = [0]
        for g in self.generator:
            words += [c ^ g for c in words]
        return words

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "k": self.k,
                "generator": [f"{r:x}" for r in self.generator],
                "parity": [f"{r:x}" for r in self.parity],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        d = json.loads(text)
        return cls(
            d["n"],
            d["k"],
            tuple(int(r, 16) for r in d["generator"]),
            tuple(int(r, 16) for r in d["parity"]),
        )


def sample_random_code(n: int, k: int, rng) -> LinearCode:
    """Uniform k x n generator, resampled until full rank."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    g = _as_rng(rng)
    while True:
        mat = g.integers(0, 2, size=(k, n), dtype=np.uint8)
        rows = [int("".join(map(str, r)), 2) for r in mat]
        if gf2_rank(rows, n) == k:
            return LinearCode(n, k, tuple(rows), tuple(parity_from_generator(rows, n)))


def _parity_ok(h: int, x: int) -> bool:
    return (h & x).bit_count() % 2 == 0


def contains(code: LinearCode, x: Word) -> bool:
    if x.n != code.n:
        raise ValueError(f"length mismatch: {x.n} != {code.n}")
    return all(_parity_ok(h, x.bits) for h in code.parity)


@dataclass(frozen=True)
class CodeTower:
    """Nested codes C_0 = F_2^n, ..., C_{n-k} = base; C_i imposes the first i checks."""

    base: LinearCode
    checks: tuple[int, ...]

    @property
    def levels(self) -> int:
        return len(self.checks)

    def contains_prefix(self, i: int, x: Word) -> bool:
        return contains_prefix(self, i, x)


def build_tower(code: LinearCode, rng) -> CodeTower:
    g = _as_rng(rng)
    order = g.permutation(len(code.parity))
    return CodeTower(code, tuple(code.parity[i] for i in order))


def contains_prefix(tower: CodeTower, i: int, x: Word) -> bool:
    if not 0 <= i <= tower.levels:
        raise ValueError(f"level {i} outside [0, {tower.levels}]")
    return all(_parity_ok(h, x.bits) for h in tower.checks[:i])


def _restrict(row: int, n: int, cols: list[int]) -> int:
    out = 0
    for c in cols:
        out = (out << 1) | ((row >> (n - 1 - c)) & 1)
    return out


def puncture(code: LinearCode, mask: Word) -> LinearCode:
    """Restrict every codeword to supp(mask).

    The result's ``k`` is its actual dimension; information-set decoding
    callers resample the mask when it differs from ``code.k``.
    """
    if mask.n != code.n:
        raise ValueError("mask length differs from code length")
    cols = mask.support()
    n2 = len(cols)
    rows = [_restrict(r, code.n, cols) for r in code.generator]
    basis, _ = rref(rows, n2)
    if len(basis) == len(rows):
        basis = rows
    return LinearCode(n2, len(basis), tuple(basis), tuple(parity_from_generator(basis, n2)))


def random_mask(n: int, n_prime: int, rng: Seed | np.random.Generator) -> Word:
    return sample_sphere(n, n_prime, rng)
