import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from codesieve.costmodel import (
    INFEASIBLE,
    NNS_KINDS,
    AlgorithmKind,
    Rates,
    approach1_bound_exponent,
    entropy,
    exponents,
    is_feasible,
    nns_exponent,
    quantum_prange_exponent,
    rate_binom,
    sievingisd_bound_exponent,
    varying_list_check,
)


def test_entropy():
    assert entropy(0) == 0
    assert entropy(1) == 0
    assert entropy(0.5) == pytest.approx(1)
    with pytest.raises(ValueError):
        entropy(1.5)


def test_rate_binom():
    assert rate_binom(1, 0.5) == pytest.approx(1)
    assert rate_binom(0.3, 0) == 0
    assert rate_binom(0, 0) == 0
    assert rate_binom(0.2, 0.3) == -math.inf
    with pytest.raises(ValueError):
        rate_binom(-0.1, 0)


def test_parse_kind():
    assert AlgorithmKind.parse("classical") is AlgorithmKind.CLASSICAL
    assert AlgorithmKind.parse("Sparse") is AlgorithmKind.QWLSF_SPARSE
    assert AlgorithmKind.parse("qw") is AlgorithmKind.QWLSF
    assert AlgorithmKind.QWLSF.is_walk and not AlgorithmKind.GROVER.is_walk
    with pytest.raises(ValueError):
        AlgorithmKind.parse("bogus")


def test_small_omega_limit():
    e = exponents(Rates(1e-9, 2e-9, 1e-9, 1e-9, 5e-10))
    for name, x in e.as_dict().items():
        assert abs(x) < 1e-6, name


def test_classical_reference_point():
    rep = nns_exponent(AlgorithmKind.CLASSICAL, Rates(0.15, 0.1, 0.05))
    assert rep.time == pytest.approx(0.1536484683, abs=1e-8)
    assert rep.mem_classical == pytest.approx(exponents(Rates(0.15)).list_rate)
    assert rep.mem_quantum is None
    assert rep.as_dict()["mem_quantum"] == "unused"


def test_infeasible_rates_give_sentinel():
    bad = Rates(0.15, 0.1, 0.12)  # alpha above nu
    assert not is_feasible(bad)
    assert nns_exponent(AlgorithmKind.CLASSICAL, bad).time == INFEASIBLE
    assert not nns_exponent(AlgorithmKind.CLASSICAL, bad).feasible
    walk = Rates(0.15, 0.3, 0.05, 0.1, 0.02, sigma=1.0)  # sigma beyond -rho_p/2
    assert not is_feasible(walk, AlgorithmKind.QWLSF)
    assert nns_exponent(AlgorithmKind.QWLSF, walk).time == INFEASIBLE


def test_exponents_fields():
    e = exponents(Rates(0.15, 0.3, 0.05, 0.1, 0.02))
    assert e.sphere == pytest.approx(entropy(0.15))
    assert e.code == pytest.approx(e.centers_sphere - e.cap)
    assert e.repetitions == pytest.approx(e.cap - e.wedge)
    assert e.bucket_size == pytest.approx(max(0.0, e.list_rate + e.bucket))
    assert e.pair <= 0 and e.filter <= 0 and e.residual_wedge <= e.filter + 1e-12


rates = st.tuples(
    st.floats(0.01, 0.5),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
).map(
    lambda t: (
        lambda omega, nu: (
            lambda alpha, nu_p: Rates(omega, nu, alpha, nu_p, t[4] * min(alpha, nu_p))
        )(t[2] * min(nu, omega), t[3] * nu)
    )(t[0], t[1])
)


@settings(max_examples=200, deadline=None)
@given(rates)
def test_grover_never_beats_nothing_and_never_loses_to_classical(r):
    c = nns_exponent(AlgorithmKind.CLASSICAL, r)
    g = nns_exponent(AlgorithmKind.GROVER, r)
    assume(c.feasible)
    assert g.time <= c.time + 1e-12
    for rep in (c, g):
        for m in (rep.mem_classical, rep.mem_qracm):
            if m is not None:
                assert m <= rep.time + 1e-12


@settings(max_examples=200, deadline=None)
@given(rates, st.floats(0, 1))
def test_sparse_never_loses_to_plain_walk(r, s):
    pair = exponents(r).pair
    assume(math.isfinite(pair))
    r = Rates(r.omega, r.nu, r.alpha, r.nu_p, r.beta, s * (-pair / 2))
    q = nns_exponent(AlgorithmKind.QWLSF, r)
    sp = nns_exponent(AlgorithmKind.QWLSF_SPARSE, r)
    assume(q.feasible)
    assert sp.feasible
    assert sp.time <= q.time + 1e-12
    assert q.mem_quantum <= q.time + 1e-12


def test_prange():
    assert quantum_prange_exponent(0, 0.5) == 0
    assert quantum_prange_exponent(0.110, 0.5) == pytest.approx(0.060, abs=5e-4)
    with pytest.raises(ValueError):
        quantum_prange_exponent(0.6, 0.5)


@pytest.mark.parametrize("kappa", [0.3, 0.5, 0.7])
def test_isd_bound_meets_prange_at_the_corner(kappa):
    omega = 0.1
    assert sievingisd_bound_exponent(omega, kappa, kappa, 0.0) == pytest.approx(
        quantum_prange_exponent(omega, kappa), abs=1e-12
    )


def test_isd_bound_guards():
    assert sievingisd_bound_exponent(0.1, 0.5, 0.6, 0.7) == INFEASIBLE
    assert sievingisd_bound_exponent(0.1, 0.5, 0.4, 0.0) == INFEASIBLE


@settings(max_examples=300, deadline=None)
@given(st.floats(0.3, 0.7), st.floats(0, 1), st.floats(0, 1))
def test_isd_bound_never_below_prange(kappa, a, b):
    omega = 0.5 * (1 - kappa) * 0.6
    nu_p = kappa + a * (1 - kappa)
    wp = b * min(nu_p, omega)
    v = sievingisd_bound_exponent(omega, kappa, nu_p, wp)
    assume(math.isfinite(v))
    assert v >= quantum_prange_exponent(omega, kappa) - 1e-6
    assert approach1_bound_exponent(omega, kappa, nu_p, wp) == pytest.approx(v, abs=1e-12)


def test_varying_list_examples():
    p = 1 / 64
    assert varying_list_check([64.0] * 5, p)
    assert varying_list_check([100, 120, 90], p)
    with pytest.raises(ValueError):
        varying_list_check([10, 50], p)
    with pytest.raises(ValueError):
        varying_list_check([], p)


def test_exponents_vectorised_agree_with_scalar():
    from codesieve.costmodel import _score

    rs = [Rates(0.12, 0.5, 0.05, 0.1, 0.02), Rates(0.2, 0.9, 0.15, 0.02, 0.01)]
    for kind in NNS_KINDS:
        arr = [np.array([getattr(r, f) for r in rs]) for f in ("omega", "nu", "alpha", "nu_p", "beta")]
        t = _score(kind, *arr)["time"]
        for i, r in enumerate(rs):
            assert t[i] == pytest.approx(_score(kind, r.omega, r.nu, r.alpha, r.nu_p, r.beta)["time"])


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 0.5), st.floats(0, 1), st.floats(0, 1))
def test_sparse_walk_without_second_layer_is_grover(omega, nu, a):
    # holds wherever a bucket is expected to hold a solution pair
    r = Rates(omega, nu, a * min(nu, omega))
    e = exponents(r)
    g = nns_exponent(AlgorithmKind.GROVER, r)
    assume(g.feasible and 2 * e.bucket_size + e.pair >= 0)
    s = nns_exponent(AlgorithmKind.QWLSF_SPARSE, Rates(omega, r.nu, r.alpha, 0, 0, 0))
    assert s.time == pytest.approx(g.time, abs=1e-12)


def test_sparse_walk_and_grover_part_below_one_pair_per_bucket():
    r = Rates(0.4587, 0.6597, 0.4444)
    e = exponents(r)
    assert 2 * e.bucket_size + e.pair < 0
    g = nns_exponent(AlgorithmKind.GROVER, r).time
    s = nns_exponent(AlgorithmKind.QWLSF_SPARSE, Rates(r.omega, r.nu, r.alpha, 0, 0, 0)).time
    assert s == pytest.approx(g - e.pair / 2 - e.bucket_size, abs=1e-12)
