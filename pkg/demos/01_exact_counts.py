"""Exact counts behind the sieve, and how they turn into rates.

Run with ``python demos/01_exact_counts.py``.  Everything here is exact
integer or rational arithmetic until the last section.
"""

import math
from itertools import combinations

from codesieve import combinatorics as cb
from codesieve.costmodel import Rates, exponents
from codesieve.hamming import Word

# A list of weight-w words is sieved by summing pairs whose sum has weight w
# again.  At n=20, w=6 that happens for a small fraction of pairs.
n, w = 20, 6
p = cb.pair_prob(n, w)
print(f"pair probability at n={n}, w={w}: {p} ~ {float(p):.4f}")
print(f"smallest list that reproduces itself: {cb.min_list_size(n, w)}")

# Buckets restrict attention to words overlapping a center c in alpha places.
# Inside a bucket, solution pairs are far more common.
v, alpha = 5, 4
q = cb.bucket_pair_prob(n, w, v, alpha)
print(f"in a (v={v}, alpha={alpha}) bucket: {float(q):.4f}, a gain of {float(q / p):.1f}x")

# The wedge counts centers that catch both members of a pair.  Checking one
# cell by brute force at n=10 takes a moment.
n, w, ws, v, alpha = 10, 4, 2, 4, 2
x, y = Word.from_support(n, [0, 1, 2, 3]), Word.from_support(n, [0, 1, 4, 5])
brute = sum(
    1
    for s in combinations(range(n), v)
    if (Word.from_support(n, list(s)) & x).weight == alpha == (Word.from_support(n, list(s)) & y).weight
)
print(f"wedge at {(n, w, ws, v, alpha)}: closed form {cb.wedge_area(n, w, ws, v, alpha)}, enumeration {brute}")

# One overlap e* dominates the bucket probability; the others add at most
# a factor n/2.
n, w, v, alpha = 40, 12, 14, 5
e = cb.best_overlap_estar(n, w, v, alpha)
full = cb.bucket_pair_prob(n, w, v, alpha)
part = cb.bucket_pair_prob_component(n, w, v, alpha, e)
print(f"e* = {e}; full / dominant = {float(full / part):.3f} (bound {n // 2})")

# Rates are normalised logs of these counts.  The gap to the exact value
# shrinks like log(n)/n, slowly.
point = (0.1, 0.3, 0.05, 0.1, 1 / 60)
rates = exponents(Rates(*point)).as_dict()
for n in (60, 240):
    W, V, A = (round(z * n) for z in point[:3])
    exact = math.log2(cb.cap_area(n, W, V, A)) / n
    print(f"n={n:>3}: cap rate {rates['cap']:.5f}, exact {exact:.5f}")
