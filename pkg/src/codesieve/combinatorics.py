"""Exact counts and probabilities over Hamming spheres, caps and wedges.

Counts are Python ints, probabilities are :class:`fractions.Fraction`.
Every closed form here has a brute-force counterpart (``enumerate_*``) that
walks the whole sphere; those are capped at ``MAX_ENUM_DIM`` coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

MAX_ENUM_DIM = 24


class EmptyRegionError(ValueError):
    """A probability was requested over a region with no elements."""


def binomial(n: int, k: int) -> int:
    """C(n, k), with the convention C(n, k) = 0 outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def sphere_area(n: int, w: int) -> int:
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} outside [0, {n}]")
    return comb(n, w)


def cap_area(n: int, center_weight: int, vec_weight: int, alpha: int) -> int:
    """Number of weight-``vec_weight`` words overlapping a fixed center in exactly ``alpha`` places."""
    if not (0 <= center_weight <= n and 0 <= vec_weight <= n):
        raise ValueError("weights must lie in [0, n]")
    if not 0 <= alpha <= min(center_weight, vec_weight):
        raise ValueError(f"alpha={alpha} incompatible with weights ({center_weight}, {vec_weight})")
    return binomial(center_weight, alpha) * binomial(n - center_weight, vec_weight - alpha)


def _wedge_terms(n: int, w: int, w_star: int, v: int, alpha: int) -> dict[int, int]:
    # one term per e = |x & y & c|
    terms = {}
    for e in range(max(0, 2 * alpha - v), min(alpha, w_star) + 1):
        terms[e] = (
            binomial(w_star, e)
            * binomial(w - w_star, alpha - e) ** 2
            * binomial(n - 2 * w + w_star, v - 2 * alpha + e)
        )
    return terms


def _check_wedge_args(n: int, w: int, w_star: int, v: int, alpha: int) -> None:
    if not 0 <= alpha <= v <= n:
        raise ValueError(f"need 0 <= alpha <= v <= n, got alpha={alpha}, v={v}, n={n}")
    if alpha > w:
        raise ValueError(f"alpha={alpha} exceeds w={w}")
    if not 0 <= w_star <= w <= n:
        raise ValueError(f"need 0 <= w_star <= w <= n, got w_star={w_star}, w={w}")


def wedge_area(n: int, w: int, w_star: int, v: int, alpha: int) -> int:
    """Number of weight-v centers c with |x & c| = |y & c| = alpha.

    x and y are any two weight-w words with |x & y| = w_star; the count only
    depends on these weights.
    """
    _check_wedge_args(n, w, w_star, v, alpha)
    return sum(_wedge_terms(n, w, w_star, v, alpha).values())


def _enum_guard(n: int) -> None:
    if n > MAX_ENUM_DIM:
        raise ValueError(f"enumeration refused: dimension {n} > {MAX_ENUM_DIM}")


def _iter_sphere(n: int, w: int):
    for pos in combinations(range(n), w):
        x = 0
        for i in pos:
            x |= 1 << i
        yield x


def enumerate_wedge(x, y, v: int, alpha: int) -> int:
    """Brute-force wedge size for two concrete words (``Word`` or ``(bits, n)``)."""
    xb, n = _bits_and_len(x)
    yb, m = _bits_and_len(y)
    if n != m:
        raise ValueError("length mismatch")
    _enum_guard(n)
    return sum(
        1
        for c in _iter_sphere(n, v)
        if (xb & c).bit_count() == alpha and (yb & c).bit_count() == alpha
    )


def enumerate_cap(n: int, center_weight: int, vec_weight: int, alpha: int) -> int:
    _enum_guard(n)
    center = (1 << center_weight) - 1
    return sum(1 for x in _iter_sphere(n, vec_weight) if (x & center).bit_count() == alpha)


def _bits_and_len(x) -> tuple[int, int]:
    if isinstance(x, tuple):
        return x
    return x.bits, x.n


def pair_prob(n: int, w: int) -> Fraction:
    """Probability that two independent uniform weight-w words sum to weight w."""
    if w % 2:
        raise ValueError(f"w must be even, got {w}")
    if not 0 < w <= n:
        raise ValueError(f"need 0 < w <= n, got w={w}, n={n}")
    half = w // 2
    return Fraction(binomial(w, half) * binomial(n - w, half), comb(n, w))


def expected_pairs(N: int, n: int, w: int) -> Fraction:
    """Expected number of ordered pairs (x, y) in a list of N uniform words with |x + y| = w."""
    return N * N * pair_prob(n, w)


def min_list_size(n: int, w: int) -> int:
    """ceil(4 / pair_prob): the list size that keeps a sieve level from shrinking."""
    p = pair_prob(n, w)
    if p == 0:
        raise ValueError(f"no solution pairs exist at n={n}, w={w}")
    q = 4 / p
    return -(-q.numerator // q.denominator)


def _bucket_prefactor(n: int, w: int, v: int, alpha: int) -> Fraction:
    half = w // 2
    num = binomial(w, half) * binomial(n - w, half)
    den = binomial(v, alpha) * binomial(n - v, w - alpha) * binomial(w, alpha) * binomial(n - w, v - alpha)
    if den == 0:
        raise EmptyRegionError(f"empty region for n={n}, w={w}, v={v}, alpha={alpha}")
    return Fraction(num, den)


def _check_bucket_args(n: int, w: int, v: int, alpha: int) -> None:
    if w % 2:
        raise ValueError(f"w must be even, got {w}")
    if not (0 < w <= n and 0 <= v <= n):
        raise ValueError("need 0 < w <= n and 0 <= v <= n")
    if not 0 <= alpha <= min(v, w):
        raise ValueError(f"alpha={alpha} must lie in [0, min(v, w)]")


def bucket_pair_prob_component(n: int, w: int, v: int, alpha: int, e: int) -> Fraction:
    """Probability that two uniform region elements form a solution pair with |x & y & c| = e."""
    _check_bucket_args(n, w, v, alpha)
    half = w // 2
    if not max(0, 2 * alpha - v) <= e <= min(alpha, half):
        return Fraction(0)
    term = (
        binomial(half, e)
        * binomial(half, alpha - e) ** 2
        * binomial(n - 3 * half, v - 2 * alpha + e)
    )
    return _bucket_prefactor(n, w, v, alpha) * term


def bucket_pair_prob(n: int, w: int, v: int, alpha: int) -> Fraction:
    """Probability that independent uniform x, y from {x in S_w : |x & c| = alpha} satisfy |x + y| = w.

    Pairs are ordered and x = y is allowed.
    """
    _check_bucket_args(n, w, v, alpha)
    return _bucket_prefactor(n, w, v, alpha) * wedge_area(n, w, w // 2, v, alpha)


def best_overlap_estar(n: int, w: int, v: int, alpha: int) -> int:
    """The e maximizing the single-e component; ties go to the smallest e."""
    _check_bucket_args(n, w, v, alpha)
    lo, hi = max(0, 2 * alpha - v), min(alpha, w // 2)
    if lo > hi:
        raise ValueError(f"empty e-range for n={n}, w={w}, v={v}, alpha={alpha}")
    best_e, best = lo, None
    for e in range(lo, hi + 1):
        p = bucket_pair_prob_component(n, w, v, alpha, e)
        if best is None or p > best:
            best_e, best = e, p
    return best_e


def residual_filter_prob(v: int, alpha: int, v_prime: int, beta: int) -> Fraction:
    """Probability that a uniform weight-v' center in dimension v overlaps a fixed weight-alpha word in beta places."""
    if not (0 <= alpha <= v and 0 <= v_prime <= v):
        raise ValueError("need alpha, v_prime in [0, v]")
    if not 0 <= beta <= min(alpha, v_prime):
        raise ValueError(f"beta={beta} must lie in [0, min(alpha, v_prime)]")
    return Fraction(binomial(alpha, beta) * binomial(v - alpha, v_prime - beta), comb(v, v_prime))


def residual_wedge_prob(v: int, alpha: int, e_star: int, v_prime: int, beta: int) -> Fraction:
    """Probability that a uniform weight-v' center captures both residuals of an e*-overlapping pair."""
    return Fraction(wedge_area(v, alpha, e_star, v_prime, beta), comb(v, v_prime))


def shared_center_prob(code_size: int, W: Fraction) -> Fraction:
    """1 - (1 - W)^code_size, the chance that at least one of code_size independent centers is shared."""
    if not 0 <= W <= 1:
        raise ValueError("W must be a probability")
    return 1 - (1 - Fraction(W)) ** code_size


def shared_center_prob_clipped(code_size: int, W: Fraction) -> Fraction:
    return min(Fraction(1), code_size * Fraction(W))
