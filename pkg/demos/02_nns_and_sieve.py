"""Near-neighbor search with random product codes, then a full sieve.

Run with ``python demos/02_nns_and_sieve.py``.  Takes about half a minute.
"""

from codesieve.codes import contains, sample_random_code
from codesieve.combinatorics import min_list_size
from codesieve.hamming import Seed, sample_sphere_many
from codesieve.lsf import brute_force_pairs, derive_nns_params, nns_solve
from codesieve.sieve import SieveCollapse, sieve

# The filter parameters come from exact counts: a code of centers large
# enough to cover the sphere, and enough rounds to catch most pairs.
n, w = 40, 12
N = min_list_size(n, w)
params = derive_nns_params(n, w, N)
print(f"n={n}, w={w}, N={N}: centers of weight {params.v}, overlap {params.alpha}, "
      f"{params.code_size} centers per round, {params.rounds} rounds")

words = sample_sphere_many(n, w, N, Seed(1))
truth = brute_force_pairs(words, w)
res = nns_solve(words, w, params, Seed(2))
print(f"found {len(set(res.pairs))} of {len(truth)} pairs with {res.pair_comparisons} comparisons "
      f"(brute force needs {N * (N - 1) // 2})")

# At this size filtering costs far more than the quadratic scan: its savings
# are exponential in n but the polynomial overheads dominate until n is in
# the hundreds.  What the run does show is recall and the absence of false
# positives.

# The sieve walks down a tower of codes, one parity check per level.  Each
# level keeps the sums that pass the new check, truncated back to N.
n, k, w = 24, 14, 8
code = sample_random_code(n, k, Seed(3))
for N in (2 * min_list_size(n, w), min_list_size(n, w)):
    try:
        out, trace = sieve(code, w, N, Seed(4))
    except SieveCollapse as exc:
        print(f"N={N}: collapsed ({exc})")
        continue
    print(f"N={N}: {len(out)} codewords, all in the code: {all(contains(code, x) for x in out)}")
    for r in trace.levels:
        print(f"  level {r.level:>2}: {r.input_size:>4} in, {r.pairs_found:>5} pairs, {r.output_size:>4} out")

# At the smallest list size each level keeps on average as many words as it
# started with, so the list performs a random walk and often dies out.
