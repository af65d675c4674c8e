import math
from dataclasses import replace

import pytest

from codesieve.combinatorics import min_list_size
from codesieve.hamming import Seed, Word, sample_sphere_many
from codesieve.lsf import (
    brute_force_pairs,
    bucket_all,
    default_t,
    derive_nns_params,
    find_solutions_bucket,
    find_valid_centers,
    nns_params_for,
    nns_solve,
    sample_rpc,
)


def test_rpc_shape():
    rpc = sample_rpc(16, 8, 2, 9, Seed(1))
    assert [len(b) for b in rpc.blocks] == [3, 3]
    assert rpc.size == 9
    centers = list(rpc.centers())
    assert len(set(centers)) == 9
    assert all(c.weight == 8 for c in centers)
    for b in rpc.blocks:
        assert len(set(b)) == len(b)


def test_rpc_rejects_bad_sizes():
    with pytest.raises(ValueError):
        sample_rpc(16, 8, 3, 8, Seed(1))
    with pytest.raises(ValueError):
        sample_rpc(16, 8, 2, 10, Seed(1))
    with pytest.raises(ValueError):
        sample_rpc(4, 2, 2, 9, Seed(1))


def test_default_t_divides():
    for n, v in [(40, 12), (24, 8), (17, 5), (36, 0)]:
        t = default_t(n, v)
        assert n % t == 0 and v % t == 0


@pytest.mark.parametrize("alpha", range(0, 5))
def test_valid_centers_match_scan(alpha):
    rpc = sample_rpc(24, 8, 4, 4**4, Seed(2))
    for x in sample_sphere_many(24, 6, 12, Seed(3)):
        want = [i for i, c in enumerate(rpc.centers()) if (c & x).weight == alpha]
        assert find_valid_centers(rpc, x, alpha) == want


def test_zero_word_hits_every_center_at_alpha_zero():
    rpc = sample_rpc(12, 4, 2, 16, Seed(4))
    assert find_valid_centers(rpc, Word.zeros(12), 0) == list(range(16))


def test_bucket_table_invariant():
    rpc = sample_rpc(20, 8, 4, 3**4, Seed(5))
    words = sample_sphere_many(20, 6, 30, Seed(6))
    table = bucket_all(words, rpc, 2)
    for cid, c in enumerate(rpc.centers()):
        want = [i for i, x in enumerate(words) if (x & c).weight == 2]
        assert table.get(cid, []) == want
    assert bucket_all([], rpc, 2) == {}


def test_bucket_scan():
    words = [Word.from_str(s) for s in ("1100", "0110", "0011", "1001")]
    pairs, cmp = find_solutions_bucket(words, 2)
    assert cmp == 6
    for i, j in pairs:
        assert (words[i] ^ words[j]).weight == 2
    assert find_solutions_bucket(words[:1], 2) == ([], 0)
    assert find_solutions_bucket([], 2) == ([], 0)


def test_single_bucket_params():
    p = nns_params_for(20, 6, 50, 0, 0, slack=1)
    assert p.code_size == 1 and p.rounds == 1


def test_single_bucket_has_full_recall():
    words = sample_sphere_many(20, 6, 40, Seed(7))
    p = nns_params_for(20, 6, 40, 0, 0, slack=1)
    res = nns_solve(words, 6, p, Seed(8))
    assert set(res.pairs) == brute_force_pairs(words, 6)
    assert res.pair_comparisons == 40 * 39 // 2


def test_derived_params_are_consistent():
    n, w = 40, 12
    N = min_list_size(n, w)
    p = derive_nns_params(n, w, N)
    assert p.slack == n
    assert 0 <= p.alpha <= min(p.v, w)
    assert n % p.t == 0 and p.v % p.t == 0
    # code size covers slack * sphere / cap, rounds cover slack * cap / wedge
    ref = nns_params_for(n, w, N, p.v, p.alpha, n)
    assert ref == p
    assert math.isfinite(p.predicted_cost)


def test_derive_rejects_impossible():
    with pytest.raises(ValueError):
        derive_nns_params(2, 2, 4)


def test_nns_no_false_positives_and_good_recall():
    n, w = 32, 8
    N = min_list_size(n, w)
    p = derive_nns_params(n, w, N)
    recall = []
    for s in range(5):
        words = sample_sphere_many(n, w, N, Seed(100 + s))
        truth = brute_force_pairs(words, w)
        res = nns_solve(words, w, p, Seed(200 + s))
        assert set(res.pairs) <= truth
        recall.append(len(set(res.pairs)) / len(truth) if truth else 1.0)
    assert sum(recall) / len(recall) >= 0.8


def test_nns_is_reproducible():
    words = sample_sphere_many(24, 6, 30, Seed(9))
    p = replace(derive_nns_params(24, 6, 30), rounds=3)
    a = nns_solve(words, 6, p, Seed(10))
    b = nns_solve(words, 6, p, Seed(10))
    assert a.pairs == b.pairs and a.pair_comparisons == b.pair_comparisons


def test_nns_empty_list():
    p = derive_nns_params(24, 6, 30)
    assert nns_solve([], 6, p, Seed(1)).pairs == []
