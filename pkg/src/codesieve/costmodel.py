"""Exponent calculus for the sieving and decoding cost formulas.

Every quantity is a rate: the coefficient c of a count growing as 2^(cn).
Infeasible parameter points map to ``INFEASIBLE`` (+inf), which sorts above
every real exponent so the optimizer can treat constraints as plain costs.

The private helpers work elementwise on numpy arrays so that a whole grid of
candidate rates is scored in one call; the public functions wrap them for
scalars.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np
from scipy.special import entr

INFEASIBLE = math.inf
_EPS = 1e-12
_GOLDEN = (math.sqrt(5) - 1) / 2
_LN2 = math.log(2.0)
_NEWTON_STEPS = 24


class AlgorithmKind(str, Enum):
    CLASSICAL = "classical"
    GROVER = "grover"
    QWLSF = "qwlsf"
    QWLSF_SPARSE = "qwlsf-sparse"
    QUANTUM_PRANGE = "quantum-prange"
    SIEVING_ISD_BOUND = "sievingisd-bound"

    @property
    def is_walk(self) -> bool:
        return self in (AlgorithmKind.QWLSF, AlgorithmKind.QWLSF_SPARSE)

    @classmethod
    def parse(cls, name: str) -> "AlgorithmKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {"sparse": "qwlsf-sparse", "qw": "qwlsf", "prange": "quantum-prange"}
        return cls(aliases.get(key, key))


NNS_KINDS = (AlgorithmKind.CLASSICAL, AlgorithmKind.GROVER, AlgorithmKind.QWLSF, AlgorithmKind.QWLSF_SPARSE)


# -- elementwise primitives ---------------------------------------------------


def _h(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return (entr(x) + entr(1.0 - x)) / _LN2


def _rb(a, b):
    """a*h(b/a) elementwise, -inf where b lies outside [0, a].

    Written as entr(b) + entr(a - b) - entr(a), which needs no division and
    sends negative arguments to -inf by itself.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a - b
    # rounding noise within _EPS of a boundary counts as the boundary
    b = np.where((b < 0) & (b >= -_EPS), 0.0, b)
    d = np.where((d < 0) & (d >= -_EPS), 0.0, d)
    a = np.maximum(a, 0.0)
    with np.errstate(invalid="ignore"):
        val = (entr(b) + entr(d) - entr(a)) / _LN2
    return np.where(np.isnan(val), -np.inf, val)


def _wedge_max(A, B, C, alpha, v):
    """max over e of rb(A, e) + 2 rb(B, alpha - e) + rb(C, v - 2 alpha + e).

    This is the rate of a wedge of weight-v centers overlapping two words in
    alpha places each, the words sharing A coordinates, with B private ones
    each and C coordinates outside both.  The summand is concave in e, so its
    maximizer is the root of the (decreasing) derivative, found by Newton
    steps kept inside a shrinking bracket.  Returns (value, argmax); value is
    -inf where the e-range is empty.
    """
    A, B, C, alpha, v = np.broadcast_arrays(*(np.asarray(z, dtype=float) for z in (A, B, C, alpha, v)))
    lo = np.maximum.reduce([np.zeros_like(alpha), 2 * alpha - v, alpha - B])
    hi = np.minimum.reduce([alpha, A, C - v + 2 * alpha])
    top = np.maximum(hi, lo)
    r = v - 2 * alpha

    def f(e):
        return _rb(A, e) + 2 * _rb(B, alpha - e) + _rb(C, r + e)

    def slope(e):
        p1, p2, p3 = A - e, B - alpha + e, C - r - e
        q1, q2, q3 = e, alpha - e, r + e
        g = np.log(p1 / q1) - 2 * np.log(p2 / q2) + np.log(p3 / q3)
        dg = -(1 / p1 + 1 / q1) - 2 * (1 / p2 + 1 / q2) - (1 / p3 + 1 / q3)
        return g, dg

    a, b = lo.copy(), top.copy()
    e = (a + b) / 2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        g_lo, g_top = slope(lo)[0], slope(top)[0]
        # lanes whose maximum provably sits on an end of the range need no
        # iterations; an undefined (nan) end slope proves nothing
        live = ~(g_lo <= 0) & ~(g_top >= 0) & (top - lo > _EPS)
        for _ in range(_NEWTON_STEPS):
            g, dg = slope(e)
            up = g > 0
            a, b = np.where(up, e, a), np.where(up, b, e)
            step = e - g / dg
            e_new = np.where((step >= a) & (step <= b), step, (a + b) / 2)
            e_new = np.where(g == 0, e, e_new)
            moved = np.abs(e_new - e)
            e = e_new
            if not np.any(live & (moved > 1e-12)):
                break
    inner = np.clip(np.nan_to_num(e), lo, top)
    arg = np.where(live, inner, np.where(g_lo <= 0, lo, top))
    val = f(arg)
    odd = np.isnan(g_lo) | np.isnan(g_top)
    if np.any(odd):
        # undetermined end slopes: fall back to comparing the candidates
        cands = np.stack([lo, inner, top])
        vals = np.stack([f(z) for z in cands])
        k = np.argmax(vals, axis=0)
        val = np.where(odd, np.take_along_axis(vals, k[None], 0)[0], val)
        arg = np.where(odd, np.take_along_axis(cands, k[None], 0)[0], arg)
    empty = lo > hi + _EPS
    return np.where(empty, -np.inf, val), np.where(empty, np.nan, arg)


def _list_rate(omega):
    omega = np.asarray(omega, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = _h(omega) - omega - (1 - omega) * _h(omega / (2 - 2 * omega))
    return np.maximum(0.0, r)


def _first_layer(omega, nu, alpha) -> dict:
    with np.errstate(invalid="ignore"):
        return _first_layer_unchecked(omega, nu, alpha)


def _first_layer_unchecked(omega, nu, alpha) -> dict:
    omega, nu, alpha = np.broadcast_arrays(*(np.asarray(z, dtype=float) for z in (omega, nu, alpha)))
    ell = _list_rate(omega)
    cap = _rb(omega, alpha) + _rb(1 - omega, nu - alpha)
    wedge, eps = _wedge_max(omega / 2, omega / 2, 1 - 1.5 * omega, alpha, nu)
    bucket = _rb(nu, alpha) + _rb(1 - nu, omega - alpha) - _h(omega)
    pair = (
        _rb(omega, omega / 2)
        + _rb(1 - omega, omega / 2)
        - (_rb(nu, alpha) + _rb(1 - nu, omega - alpha) + cap)
        + wedge
    )
    ok = (
        (nu >= -_EPS)
        & (nu <= 1 + _EPS)
        & (alpha >= -_EPS)
        & (alpha <= np.minimum(nu, omega) + _EPS)
        & np.isfinite(cap)
        & np.isfinite(wedge)
        & np.isfinite(bucket)
    )
    return {
        "ok": ok,
        "ell": ell,
        "sphere": _h(omega),
        "centers_sphere": _h(nu),
        "cap": cap,
        "bucket": bucket,
        "wedge": wedge,
        "eps": eps,
        "pair": pair,
        "code": _h(nu) - cap,
        "reps": cap - wedge,
        "b": np.maximum(0.0, ell + bucket),
    }


def _second_layer(first: dict, nu, alpha, nu_p, beta) -> dict:
    nu, alpha, nu_p, beta = np.broadcast_arrays(*(np.asarray(z, dtype=float) for z in (nu, alpha, nu_p, beta)))
    eps = np.nan_to_num(first["eps"], nan=0.0)
    norm = _rb(nu, nu_p)
    filt = _rb(alpha, beta) + _rb(nu - alpha, nu_p - beta) - norm
    res, eta = _wedge_max(eps, alpha - eps, nu - 2 * alpha + eps, beta, nu_p)
    rw = res - norm
    ok = (
        first["ok"]
        & (nu_p >= -_EPS)
        & (nu_p <= nu + _EPS)
        & (beta >= -_EPS)
        & (beta <= np.minimum(alpha, nu_p) + _EPS)
        & np.isfinite(filt)
        & np.isfinite(rw)
    )
    return {"ok": ok, "filter": filt, "residual_wedge": rw, "eta": eta}


def _walk_terms(kind: AlgorithmKind, first: dict, second: dict):
    """Split the walk cost as max(sigma + c0, A - sigma/2, A_floor) plus a repetition term.

    Both walk variants have this shape once the inner max(0, (sigma + pi)/2)
    is expanded, which makes the sigma minimization exact.
    """
    rp, pi, rw = first["pair"], second["filter"], second["residual_wedge"]
    vc = pi - rw
    if kind is AlgorithmKind.QWLSF:
        c0 = np.maximum(0.0, vc)
        A = 0.5 * (vc - rp) + 0.5 * c0
        vc_mem = vc
    else:
        c0 = np.zeros_like(vc)
        A = 0.5 * (vc - rp)
        vc_mem = np.zeros_like(vc)
    floor = 0.5 * (vc - rp + pi)
    return c0, A, floor, vc_mem


def _walk_tau(kind, first, second, sigma):
    rp, pi, rw = first["pair"], second["filter"], second["residual_wedge"]
    lead = np.maximum(0.0, 2 * first["b"] + rp)
    if kind is AlgorithmKind.QWLSF:
        vc1 = np.maximum(0.0, pi - rw)
        walk = 0.5 * (pi - rw - sigma - rp) + np.maximum(0.5 * vc1, np.maximum(0.0, 0.5 * (sigma + pi)))
        return lead + np.maximum(sigma + vc1, walk)
    return lead + np.maximum(sigma, 0.5 * (pi - sigma - rp - rw) + np.maximum(0.0, 0.5 * (sigma + pi)))


def _best_sigma(kind, first, second):
    """Smallest sigma in [0, -rho_p/2] minimizing the walk cost."""
    c0, A, floor, _ = _walk_terms(kind, first, second)
    hi = np.maximum(0.0, -0.5 * first["pair"])
    cross = np.clip(2.0 / 3.0 * (A - c0), 0.0, hi)
    # a sigma-free floor may dominate; then the least sigma reaching it is enough
    reach = np.clip(2.0 * (A - floor), 0.0, cross)
    floored = floor >= np.maximum(cross + c0, A - cross / 2)
    return np.where(floored, reach, cross)


def _score(kind: AlgorithmKind, omega, nu, alpha, nu_p=0.0, beta=0.0, sigma=None, first=None) -> dict:
    """Time and memory exponents, elementwise; sigma=None picks the optimal sigma.

    ``first`` may carry a precomputed ``_first_layer(omega, nu, alpha)``.
    """
    with np.errstate(invalid="ignore"):
        if first is None:
            first = _first_layer(omega, nu, alpha)
        return _score_unchecked(kind, first, nu, alpha, nu_p, beta, sigma)


def _score_unchecked(kind, first, nu, alpha, nu_p, beta, sigma) -> dict:
    ok = first["ok"]
    ell, b, rp = first["ell"], first["b"], first["pair"]
    zero = np.zeros_like(ell)
    out = {"mem_classical": ell}
    if kind is AlgorithmKind.CLASSICAL:
        tau = 2 * b
        out.update(mem_quantum=None, mem_qracm=None, mem_qraqm=None)
    elif kind is AlgorithmKind.GROVER:
        tau = np.maximum(b, 2 * b + rp / 2)
        out.update(mem_quantum=zero, mem_qracm=b, mem_qraqm=None)
    elif kind.is_walk:
        second = _second_layer(first, nu, alpha, nu_p, beta)
        ok = second["ok"]
        if sigma is None:
            sigma = _best_sigma(kind, first, second)
        sigma = np.broadcast_to(np.asarray(sigma, dtype=float), ell.shape)
        ok = ok & (sigma >= -_EPS) & (sigma <= -rp / 2 + _EPS)
        tau = _walk_tau(kind, first, second, sigma)
        vc = second["filter"] - second["residual_wedge"] if kind is AlgorithmKind.QWLSF else zero
        mq = sigma + vc
        out.update(mem_quantum=mq, mem_qracm=np.maximum(b, mq), mem_qraqm=mq, sigma=sigma)
    else:
        raise ValueError(f"{kind.value} is not a nearest-neighbor algorithm")
    time = first["reps"] + np.maximum(ell, first["code"] + tau)
    ok = ok & np.isfinite(time)
    out["time"] = np.where(ok, time, INFEASIBLE)
    out["ok"] = ok
    return out


# -- scalar API ----------------------------------------------------------------


def entropy(x: float) -> float:
    """Binary entropy h(x) in bits."""
    if not 0 <= x <= 1:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    return float(_h(x))


def rate_binom(a: float, b: float) -> float:
    """Rate of C(an, bn), i.e. a*h(b/a); -inf when b is not in [0, a]."""
    if a < 0:
        raise ValueError(f"negative rate a={a}")
    return float(_rb(a, b))


@dataclass(frozen=True)
class Rates:
    omega: float
    nu: float = 0.0
    alpha: float = 0.0
    nu_p: float = 0.0
    beta: float = 0.0
    sigma: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExponentReport:
    time: float
    mem_classical: float | None = None
    mem_quantum: float | None = None
    mem_qracm: float | None = None
    mem_qraqm: float | None = None

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.time)

    def as_dict(self) -> dict:
        return {k: ("unused" if v is None else v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class Exponents:
    """Named rates of one parameter point; ``filter`` and ``residual_wedge`` need the second layer."""

    sphere: float
    centers_sphere: float
    cap: float
    bucket: float
    wedge: float
    eps_star: float
    pair: float
    list_rate: float
    code: float
    repetitions: float
    bucket_size: float
    filter: float
    residual_wedge: float
    eta_star: float

    def as_dict(self) -> dict:
        return asdict(self)


def is_feasible(r: Rates, kind: AlgorithmKind = AlgorithmKind.CLASSICAL) -> bool:
    """Independent re-check of the Rates invariants for ``kind``."""
    vals = [r.omega, r.nu, r.alpha, r.nu_p, r.beta]
    if any(not (-_EPS <= x <= 1 + _EPS) for x in vals) or r.sigma < -_EPS:
        return False
    if r.alpha > min(r.nu, r.omega) + _EPS or r.omega - r.alpha > 1 - r.nu + _EPS:
        return False
    with np.errstate(invalid="ignore"):
        first = _first_layer(r.omega, r.nu, r.alpha)
    if not bool(first["ok"]):
        return False
    if kind.is_walk:
        if r.nu_p > r.nu + _EPS or r.beta > min(r.alpha, r.nu_p) + _EPS:
            return False
        with np.errstate(invalid="ignore"):
            second = _second_layer(first, r.nu, r.alpha, r.nu_p, r.beta)
        if not bool(second["ok"]):
            return False
        if r.sigma > -float(first["pair"]) / 2 + _EPS:
            return False
    return True


def exponents(r: Rates) -> Exponents:
    """All intermediate rates at ``r``; infeasible quantities come back as the sentinel."""
    with np.errstate(invalid="ignore"):
        first = _first_layer(r.omega, r.nu, r.alpha)
        second = _second_layer(first, r.nu, r.alpha, r.nu_p, r.beta)

    def val(x, ok=True):
        x = float(x)
        return x if ok and math.isfinite(x) else INFEASIBLE

    f_ok = bool(first["ok"])
    s_ok = bool(second["ok"])
    return Exponents(
        sphere=val(first["sphere"]),
        centers_sphere=val(first["centers_sphere"]),
        cap=val(first["cap"], f_ok),
        bucket=val(first["bucket"], f_ok),
        wedge=val(first["wedge"], f_ok),
        eps_star=val(first["eps"], f_ok),
        pair=val(first["pair"], f_ok),
        list_rate=val(first["ell"]),
        code=val(first["code"], f_ok),
        repetitions=val(first["reps"], f_ok),
        bucket_size=val(first["b"], f_ok),
        filter=val(second["filter"], s_ok),
        residual_wedge=val(second["residual_wedge"], s_ok),
        eta_star=val(second["eta"], s_ok),
    )


def nns_exponent(kind: AlgorithmKind, r: Rates) -> ExponentReport:
    """Time and memory exponents of one NNS algorithm at the given rates (sigma taken from ``r``)."""
    kind = AlgorithmKind(kind)
    s = _score(kind, r.omega, r.nu, r.alpha, r.nu_p, r.beta, r.sigma if kind.is_walk else None)
    if not bool(s["ok"]):
        return ExponentReport(INFEASIBLE)

    def opt(key):
        x = s.get(key)
        return None if x is None else float(x)

    return ExponentReport(float(s["time"]), opt("mem_classical"), opt("mem_quantum"), opt("mem_qracm"), opt("mem_qraqm"))


def quantum_prange_exponent(omega: float, kappa: float) -> float:
    """Half the rate of C(n, w) / C(n - k, w)."""
    if not (0 <= kappa < 1 and 0 <= omega <= 1 - kappa):
        raise ValueError(f"need 0 <= kappa < 1 and 0 <= omega <= 1 - kappa, got omega={omega}, kappa={kappa}")
    return 0.5 * (entropy(omega) - (1 - kappa) * entropy(omega / (1 - kappa)))


def _isd_bound(omega, kappa, nu_p, omega_p):
    omega, kappa, nu_p, omega_p = np.broadcast_arrays(*(np.asarray(z, dtype=float) for z in (omega, kappa, nu_p, omega_p)))
    half = _rb(omega_p, omega_p / 2) + _rb(nu_p - omega_p, omega_p / 2)
    with np.errstate(invalid="ignore"):
        val = 0.5 * (_rb(nu_p, omega_p) + _h(omega) - half - (nu_p - kappa) - _rb(1 - nu_p, omega - omega_p))
    ok = (
        (nu_p >= kappa - _EPS)
        & (nu_p <= 1 + _EPS)
        & (omega_p >= -_EPS)
        & (omega_p <= np.minimum(nu_p, omega) + _EPS)
        & (omega - omega_p <= 1 - nu_p + _EPS)
        & (half >= nu_p - kappa - _EPS)
        & np.isfinite(val)
    )
    return np.where(ok, val, INFEASIBLE)


def sievingisd_bound_exponent(omega: float, kappa: float, nu_p: float, omega_p: float) -> float:
    """Lower bound on quantum sieving-ISD time for puncturing to n' = nu_p*n with w' = omega_p*n.

    Returns ``INFEASIBLE`` when the punctured code has too few weight-w' words
    to seed a sieve list, or when the weights do not fit.
    """
    return float(_isd_bound(omega, kappa, nu_p, omega_p))


def approach1_bound_exponent(omega: float, kappa: float, nu_p: float, omega_p: float) -> float:
    """The same bound assembled as 1/sqrt(p1 * q2 * p) from its three probabilities.

    p1 is the chance that puncturing keeps w' of the error's ones, q2 the
    per-word chance that a weight-w' codeword of the punctured code is the
    right one, and p the pair probability that fixes the smallest list size.
    """
    if not math.isfinite(sievingisd_bound_exponent(omega, kappa, nu_p, omega_p)):
        return INFEASIBLE
    words = rate_binom(nu_p, omega_p)
    p1 = words + rate_binom(1 - nu_p, omega - omega_p) - entropy(omega)
    q2 = (nu_p - kappa) - words
    p = rate_binom(omega_p, omega_p / 2) + rate_binom(nu_p - omega_p, omega_p / 2) - words
    return -0.5 * (p1 + q2 + p)


def varying_list_check(n_seq, p: float) -> bool:
    """Whether max(N) / sqrt(N_last) >= 1/sqrt(p) for a list-size schedule.

    Each N_i must be reachable from N_{i-1}, i.e. N_i <= N_{i-1}^2 * p.
    """
    seq = [float(x) for x in n_seq]
    if not seq or any(x <= 0 for x in seq):
        raise ValueError("list sizes must be positive")
    if not 0 < p <= 1:
        raise ValueError(f"p={p} outside (0, 1]")
    for i in range(1, len(seq)):
        if seq[i] > seq[i - 1] ** 2 * p * (1 + 1e-12):
            raise ValueError(f"N_{i}={seq[i]} exceeds N_{i-1}^2 p = {seq[i - 1] ** 2 * p}")
    # compare squares to dodge rounding at equality
    return max(seq) ** 2 * p >= seq[-1] * (1 - 1e-12)
