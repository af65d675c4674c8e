"""Locality-sensitive filtering with random product codes.

Centers live in a random product code (RPC): the n coordinates are cut into
t consecutive blocks and each block carries its own small codebook of
weight-v/t words.  Valid centers for a word are found block by block, by
splitting the target overlap alpha over the blocks and joining the per-block
hits, so the work tracks the output size rather than the code size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

from .combinatorics import binomial
from .hamming import Seed, Word, _as_rng


@dataclass(frozen=True)
class RandomProductCode:
    n: int
    v: int
    t: int
    blocks: tuple[tuple[int, ...], ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def block_len(self) -> int:
        return self.n // self.t

    @property
    def size(self) -> int:
        return math.prod(len(b) for b in self.blocks)

    def block_ids(self, cid: int) -> tuple[int, ...]:
        ids = []
        for b in reversed(self.blocks):
            cid, r = divmod(cid, len(b))
            ids.append(r)
        return tuple(reversed(ids))

    def center(self, cid: int) -> Word:
        L = self.block_len
        bits = 0
        for cw, i in zip(self.blocks, self.block_ids(cid)):
            bits = (bits << L) | cw[i]
        return Word(bits, self.n)

    def centers(self):
        for cid in range(self.size):
            yield self.center(cid)

    def block_hits(self, j: int, xb: int) -> dict[int, list[int]]:
        """Block-j codeword indices grouped by their overlap with the block slice xb."""
        key = (j, xb)
        hits = self._index.get(key)
        if hits is None:
            hits = {}
            for i, cw in enumerate(self.blocks[j]):
                hits.setdefault((cw & xb).bit_count(), []).append(i)
            self._index[key] = hits
        return hits


def default_t(n: int, v: int) -> int:
    """round(sqrt(n)), lowered to the nearest common divisor of n and v."""
    t = max(1, round(math.sqrt(n)))
    while t > 1 and (n % t or v % t):
        t -= 1
    return t


def _sample_block(L: int, wt: int, size: int, g) -> tuple[int, ...]:
    total = binomial(L, wt)
    if size > total:
        raise ValueError(f"block codebook of size {size} exceeds C({L},{wt})={total}")
    if total <= 4 * size or total <= 1 << 16:
        pool = []
        for pos in combinations(range(L), wt):
            pool.append(sum(1 << (L - 1 - i) for i in pos))
        pick = g.choice(len(pool), size=size, replace=False)
        return tuple(pool[i] for i in pick)
    seen: dict[int, None] = {}
    while len(seen) < size:
        pos = g.choice(L, size=wt, replace=False)
        seen.setdefault(sum(1 << (L - 1 - int(i)) for i in pos))
    return tuple(seen)


def sample_rpc(n: int, v: int, t: int, size: int, rng) -> RandomProductCode:
    """Uniform (n, v, t)-RPC with ``size`` centers, i.e. size**(1/t) distinct codewords per block."""
    if t < 1 or n % t or v % t:
        raise ValueError(f"t={t} must divide n={n} and v={v}")
    per_block = round(size ** (1 / t)) if size > 0 else 0
    while per_block**t > size:
        per_block -= 1
    while (per_block + 1) ** t <= size:
        per_block += 1
    if per_block < 1 or per_block**t != size:
        raise ValueError(f"size {size} is not a t-th power (t={t})")
    g = _as_rng(rng)
    L, wt = n // t, v // t
    blocks = tuple(_sample_block(L, wt, per_block, g) for _ in range(t))
    return RandomProductCode(n, v, t, blocks)


def find_valid_centers(rpc: RandomProductCode, x: Word, alpha: int) -> list[int]:
    """Ids of all centers c with |x & c| = alpha, in increasing id order."""
    if x.n != rpc.n:
        raise ValueError("length mismatch")
    L, t = rpc.block_len, rpc.t
    mask = (1 << L) - 1
    hits = [rpc.block_hits(j, (x.bits >> (rpc.n - (j + 1) * L)) & mask) for j in range(t)]
    if any(not h for h in hits):
        return []
    lo_suffix = [0] * (t + 1)
    hi_suffix = [0] * (t + 1)
    for j in range(t - 1, -1, -1):
        lo_suffix[j] = lo_suffix[j + 1] + min(hits[j])
        hi_suffix[j] = hi_suffix[j + 1] + max(hits[j])
    radix = [len(b) for b in rpc.blocks]
    out: list[int] = []

    def walk(j: int, remaining: int, chosen: list[list[int]]):
        if j == t:
            if remaining == 0:
                for ids in product(*chosen):
                    cid = 0
                    for r, i in zip(radix, ids):
                        cid = cid * r + i
                    out.append(cid)
            return
        for a, idx in sorted(hits[j].items()):
            rest = remaining - a
            if lo_suffix[j + 1] <= rest <= hi_suffix[j + 1]:
                chosen.append(idx)
                walk(j + 1, rest, chosen)
                chosen.pop()

    if lo_suffix[0] <= alpha <= hi_suffix[0]:
        walk(0, alpha, [])
    out.sort()
    return out


def bucket_all(words: list[Word], rpc: RandomProductCode, alpha: int) -> dict[int, list[int]]:
    """Map center id -> indices of list members overlapping it in exactly alpha places."""
    table: dict[int, list[int]] = {}
    for i, x in enumerate(words):
        for cid in find_valid_centers(rpc, x, alpha):
            table.setdefault(cid, []).append(i)
    return table


def find_solutions_bucket(bucket: list[Word], w: int) -> tuple[list[tuple[int, int]], int]:
    """All-pairs scan; returns (position pairs i < j with |x_i + x_j| = w, comparisons made)."""
    pairs = []
    bits = [x.bits for x in bucket]
    for i in range(len(bits)):
        bi = bits[i]
        for j in range(i + 1, len(bits)):
            if (bi ^ bits[j]).bit_count() == w:
                pairs.append((i, j))
    m = len(bits)
    return pairs, m * (m - 1) // 2


@dataclass(frozen=True)
class NnsParams:
    v: int
    alpha: int
    t: int
    block_size: int
    rounds: int
    slack: int
    predicted_cost: float = float("nan")

    @property
    def code_size(self) -> int:
        return self.block_size**self.t

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "alpha": self.alpha,
            "t": self.t,
            "block_size": self.block_size,
            "code_size": self.code_size,
            "rounds": self.rounds,
            "slack": self.slack,
            "predicted_cost": self.predicted_cost,
        }


@dataclass
class NnsResult:
    pairs: list[tuple[int, int]]
    params: NnsParams
    center_enumerations: int = 0
    pair_comparisons: int = 0


def _ceil_root(x: int, t: int) -> int:
    r = max(1, round(x ** (1 / t)))
    while r**t < x:
        r += 1
    while r > 1 and (r - 1) ** t >= x:
        r -= 1
    return r


def nns_params_for(n: int, w: int, N: int, v: int, alpha: int, slack: int | None = None) -> NnsParams | None:
    """Parameters for a fixed (v, alpha), or None when infeasible.

    Code size is slack * |sphere_v| / |cap| and the round count slack * |cap| / |wedge|,
    both rounded up; the code size is further rounded up to a t-th power.
    """
    slack = n if slack is None else slack
    if not (0 <= alpha <= min(v, w) and v <= n):
        return None
    cap = binomial(w, alpha) * binomial(n - w, v - alpha)
    wedge = sum(
        binomial(w // 2, e) * binomial(w // 2, alpha - e) ** 2 * binomial(n - 3 * (w // 2), v - 2 * alpha + e)
        for e in range(max(0, 2 * alpha - v), min(alpha, w // 2) + 1)
    )
    if cap == 0 or wedge == 0:
        return None
    t = default_t(n, v)
    L, wt = n // t, v // t
    desired = -(-slack * binomial(n, v) // cap)
    block = _ceil_root(desired, t)
    if block > binomial(L, wt):
        return None
    rounds = -(-slack * cap // wedge)
    size = block**t
    member = binomial(v, alpha) * binomial(n - v, w - alpha) / binomial(n, w)
    valid = cap / binomial(n, v)
    cost = rounds * (N * (t * block + size * valid) + size * (N * (N - 1) / 2) * member**2)
    return NnsParams(v, alpha, t, block, rounds, slack, cost)


def derive_nns_params(n: int, w: int, N: int, slack: int | None = None) -> NnsParams:
    """Cheapest feasible (v, alpha) under the predicted cost meter; ties go to smaller (v, alpha)."""
    best = None
    for v in range(n + 1):
        for alpha in range(min(v, w) + 1):
            p = nns_params_for(n, w, N, v, alpha, slack)
            if p is not None and (best is None or p.predicted_cost < best.predicted_cost):
                best = p
    if best is None:
        raise ValueError(f"no feasible (v, alpha) for n={n}, w={w}")
    return best


def brute_force_pairs(words: list[Word], w: int) -> set[tuple[int, int]]:
    pairs, _ = find_solutions_bucket(words, w)
    return set(pairs)


def nns_solve(words: list[Word], w: int, params: NnsParams, rng) -> NnsResult:
    """Union over ``params.rounds`` fresh RPCs of bucketing followed by all-pairs checks."""
    if not words:
        return NnsResult([], params)
    n = words[0].n
    seed = rng if isinstance(rng, Seed) else None
    g = None if seed is not None else _as_rng(rng)
    found: set[tuple[int, int]] = set()
    result = NnsResult([], params)
    for r in range(params.rounds):
        round_rng = seed.spawn(r).rng() if seed is not None else g
        rpc = sample_rpc(n, params.v, params.t, params.code_size, round_rng)
        table = bucket_all(words, rpc, params.alpha)
        result.center_enumerations += sum(len(b) for b in table.values())
        for cid in sorted(table):
            idx = table[cid]
            if len(idx) < 2:
                continue
            pairs, cmp = find_solutions_bucket([words[i] for i in idx], w)
            result.pair_comparisons += cmp
            for a, b in pairs:
                found.add((idx[a], idx[b]))
    result.pairs = sorted(found)
    return result
