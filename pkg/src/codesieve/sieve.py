"""Code sieving down a tower of codes, with NNS-by-LSF at every level."""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field

from .codes import LinearCode, build_tower, contains_prefix, sample_random_code
from .combinatorics import binomial
from .hamming import Seed, Word, sample_sphere_many
from .lsf import NnsParams, derive_nns_params, nns_solve


@dataclass
class LevelRecord:
    level: int
    input_size: int
    pairs_found: int  # ordered pairs (x, y) and (y, x) both counted
    pairs_kept: int  # sums x + y added to the next list (one per unordered pair)
    output_size: int

    @property
    def survival(self) -> float:
        return self.pairs_kept / self.pairs_found if self.pairs_found else float("nan")


@dataclass
class SieveTrace:
    n: int
    k: int
    w: int
    N: int
    nns: dict | None = None
    levels: list[LevelRecord] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.levels], indent=1)


class SieveCollapse(RuntimeError):
    """The list emptied before the last level; ``trace`` holds the levels run so far."""

    def __init__(self, trace: SieveTrace):
        last = trace.levels[-1].level if trace.levels else 0
        super().__init__(f"list collapsed at level {last} of {trace.n - trace.k}")
        self.trace = trace


def sieve(
    code: LinearCode,
    w: int,
    N: int,
    rng: Seed,
    slack: int | None = None,
    params: NnsParams | None = None,
) -> tuple[list[Word], SieveTrace]:
    """Return up to N weight-w codewords of ``code`` and the per-level trace.

    Raises :class:`SieveCollapse` if some level produces no words.
    """
    n, k = code.n, code.k
    if N > binomial(n, w) / 2 ** (n - k):
        warnings.warn(
            f"N={N} exceeds the expected number of weight-{w} codewords "
            f"({binomial(n, w) / 2 ** (n - k):.1f})",
            stacklevel=2,
        )
    trace = SieveTrace(n, k, w, N)
    if N == 0:
        return [], trace
    tower = build_tower(code, rng.spawn(0))
    current = sample_sphere_many(n, w, N, rng.spawn(1))
    if tower.levels == 0:
        return current, trace
    if params is None:
        params = derive_nns_params(n, w, N, slack)
    trace.nns = params.as_dict()
    trunc_rng = rng.spawn(2).rng()
    for i in range(1, tower.levels + 1):
        res = nns_solve(current, w, params, rng.spawn(100 + i))
        kept = 0
        seen: dict[int, None] = {}
        for a, b in res.pairs:
            s = Word(current[a].bits ^ current[b].bits, n)
            if contains_prefix(tower, i, s):
                kept += 1
                seen.setdefault(s.bits)
        nxt = [Word(bits, n) for bits in seen]
        if len(nxt) > N:
            keep = sorted(trunc_rng.choice(len(nxt), size=N, replace=False).tolist())
            nxt = [nxt[j] for j in keep]
        trace.levels.append(LevelRecord(i, len(current), 2 * len(res.pairs), kept, len(nxt)))
        current = nxt
        if not current:
            raise SieveCollapse(trace)
    return current, trace


def solve_dp(n: int, k: int, w: int, N: int, seed: Seed, slack: int | None = None) -> tuple[list[Word], SieveTrace]:
    """Sample a random [n, k] code and sieve it for N weight-w codewords."""
    code = sample_random_code(n, k, seed.spawn(1000))
    return sieve(code, w, N, seed, slack=slack)
