from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import bucket_components_fixed_x, bucket_prob, cap_table, pair_words, wedge_table
from codesieve.combinatorics import (
    MAX_ENUM_DIM,
    EmptyRegionError,
    best_overlap_estar,
    binomial,
    bucket_pair_prob,
    bucket_pair_prob_component,
    cap_area,
    enumerate_cap,
    enumerate_wedge,
    expected_pairs,
    min_list_size,
    pair_prob,
    residual_filter_prob,
    residual_wedge_prob,
    shared_center_prob,
    shared_center_prob_clipped,
    sphere_area,
    wedge_area,
)
from codesieve.hamming import Word


def test_binomial_convention():
    assert binomial(5, 2) == 10
    assert binomial(3, 4) == 0
    assert binomial(3, -1) == 0
    assert binomial(0, 0) == 1


def test_sphere_area():
    assert sphere_area(4, 2) == 6
    assert sphere_area(10, 3) == 120
    with pytest.raises(ValueError):
        sphere_area(3, 4)


def test_cap_examples():
    assert cap_area(4, 2, 2, 1) == 4
    assert cap_area(4, 2, 2, 2) == 1
    # more weight outside the center than there is room for
    assert cap_area(4, 3, 3, 1) == 0
    with pytest.raises(ValueError):
        cap_area(4, 2, 2, 3)


def test_wedge_examples():
    assert wedge_area(4, 2, 1, 2, 1) == 2
    assert enumerate_wedge(Word.from_str("1100"), Word.from_str("0011"), 2, 1) == 4
    assert wedge_area(4, 2, 0, 2, 1) == 4
    with pytest.raises(ValueError):
        wedge_area(4, 2, 3, 2, 1)


def test_enumeration_guard():
    big = Word(1, MAX_ENUM_DIM + 1)
    with pytest.raises(ValueError, match="enumeration refused"):
        enumerate_wedge(big, big, 1, 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_wedge_matches_enumeration(n):
    for w in range(n + 1):
        for w_star in range(max(0, 2 * w - n), w + 1):
            table = wedge_table(n, w, w_star)
            for v in range(n + 1):
                for alpha in range(min(v, w) + 1):
                    assert wedge_area(n, w, w_star, v, alpha) == table.get((v, alpha), 0)


def test_enumerate_wedge_agrees_with_numpy_oracle():
    x, y = pair_words(9, 4, 1)
    assert enumerate_wedge((x, 9), (y, 9), 4, 2) == wedge_table(9, 4, 1)[(4, 2)]


@pytest.mark.parametrize("n", range(1, 9))
def test_cap_matches_enumeration(n):
    for cw in range(n + 1):
        table = cap_table(n, cw)
        for vw in range(n + 1):
            for alpha in range(min(cw, vw) + 1):
                assert cap_area(n, cw, vw, alpha) == table.get((vw, alpha), 0)
    assert enumerate_cap(n, n // 2, n // 2, 0) == cap_table(n, n // 2).get((n // 2, 0), 0)


def test_pair_prob_examples():
    assert pair_prob(4, 2) == Fraction(2, 3)
    assert pair_prob(6, 2) == Fraction(8, 15)
    assert pair_prob(2, 2) == 0
    with pytest.raises(ValueError):
        pair_prob(6, 3)


def test_min_list_size():
    assert min_list_size(4, 2) == 6
    with pytest.raises(ValueError):
        min_list_size(2, 2)


def test_min_list_size_when_pairs_are_certain(monkeypatch):
    import codesieve.combinatorics as cmb

    monkeypatch.setattr(cmb, "pair_prob", lambda n, w: Fraction(1))
    assert cmb.min_list_size(10, 4) == 4


def test_expected_pairs_zero_list():
    assert expected_pairs(0, 10, 4) == 0


@given(st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n // 2).map(lambda h: 2 * h), st.integers(0, 10**6))))
def test_expected_pairs_threshold(args):
    n, w, N = args
    threshold = Fraction(comb(n, w), comb(w, w // 2) * comb(n - w, w // 2)) if comb(n - w, w // 2) else None
    if threshold is None:
        assert expected_pairs(N, n, w) == 0
        return
    assert (expected_pairs(N, n, w) >= N) == (N >= threshold or N == 0)


def test_bucket_examples():
    assert bucket_pair_prob(4, 2, 2, 1) == Fraction(1, 2)
    assert bucket_pair_prob_component(4, 2, 2, 1, 0) == Fraction(1, 4)
    assert bucket_pair_prob_component(4, 2, 2, 1, 1) == Fraction(1, 4)
    assert bucket_pair_prob_component(4, 2, 2, 1, 5) == 0
    assert best_overlap_estar(4, 2, 2, 1) == 0


def test_bucket_empty_region():
    with pytest.raises(EmptyRegionError):
        bucket_pair_prob(4, 2, 4, 0)


@pytest.mark.parametrize("n", range(2, 9))
def test_bucket_matches_enumeration(n):
    for w in range(2, n + 1, 2):
        for v in range(n + 1):
            for alpha in range(min(v, w) + 1):
                want = bucket_prob(n, w, v, alpha)
                if want is None:
                    with pytest.raises(EmptyRegionError):
                        bucket_pair_prob(n, w, v, alpha)
                else:
                    assert bucket_pair_prob(n, w, v, alpha) == want


def test_estar_against_enumerated_components():
    comps = bucket_components_fixed_x(20, 8, 8, 4)
    best = max(comps.values())
    want = min(e for e, p in comps.items() if p == best)
    assert best_overlap_estar(20, 8, 8, 4) == want
    for e, p in comps.items():
        assert bucket_pair_prob_component(20, 8, 8, 4, e) == p


def test_residual_filter_example():
    assert residual_filter_prob(4, 2, 2, 1) == Fraction(2, 3)
    table = cap_table(10, 4)
    assert residual_filter_prob(10, 4, 3, 2) == Fraction(table[(3, 2)], comb(10, 3))


def test_residual_wedge_example():
    assert residual_wedge_prob(4, 2, 1, 2, 1) == Fraction(1, 3)
    table = wedge_table(12, 5, 2)
    assert residual_wedge_prob(12, 5, 2, 4, 2) == Fraction(table[(4, 2)], comb(12, 4))


def test_shared_center():
    assert shared_center_prob(10, Fraction(1, 3)) == 1 - Fraction(2, 3) ** 10
    assert shared_center_prob(7, Fraction(0)) == 0
    assert shared_center_prob(1, Fraction(2, 5)) == Fraction(2, 5)
    assert shared_center_prob_clipped(10, Fraction(1, 3)) == 1
    assert shared_center_prob_clipped(2, Fraction(1, 5)) == Fraction(2, 5)


@given(st.integers(2, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n // 2).map(lambda h: 2 * h), st.integers(0, n))).flatmap(
    lambda t: st.tuples(st.just(t), st.integers(0, min(t[1], t[2])))
))
def test_sandwich_property(args):
    (n, w, v), alpha = args
    try:
        e = best_overlap_estar(n, w, v, alpha)
        p = bucket_pair_prob(n, w, v, alpha)
    except (EmptyRegionError, ValueError):
        return
    pe = bucket_pair_prob_component(n, w, v, alpha, e)
    assert pe <= p <= Fraction(n, 2) * pe
