"""Minimizing time exponents over the LSF rates, and the sweeps built on that.

The search runs in unit-cube coordinates u, mapped to rates by

    nu = u0,  alpha = u1 * min(nu, omega),  nu' = (nu/2) * u2^3,  beta = u3 * min(alpha, nu'),

so that the ordering constraints between rates hold by construction and
only the entropy-domain constraints can reject a point.  Inside a center of
weight nu, swapping the second-layer center for its complement maps
(nu', beta) to (nu - nu', alpha - beta) at equal cost, so nu' <= nu/2 loses
nothing; the cube puts grid resolution near nu' = 0, where the walk optimum
often sits behind a steep wall.

For the walk variants two coordinates are solved rather than searched.
The walk cost is piecewise linear and convex in sigma, and costmodel picks
the minimizing sigma in closed form.  Along u3 the cost is a single narrow
V (two terms of a max trading off), which grids and coordinate moves
straddle badly, so each probe minimizes over u3 by a batched k-section.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import cma
import numpy as np
from scipy.optimize import brentq

from .costmodel import (
    _GOLDEN,
    INFEASIBLE,
    NNS_KINDS,
    AlgorithmKind,
    ExponentReport,
    Rates,
    _first_layer,
    _isd_bound,
    _score,
    entropy,
    quantum_prange_exponent,
)

COARSE_POINTS = 40
WALK_INNER_POINTS = 12
WARM_COARSE_POINTS = 12
WARM_INNER_POINTS = 6
COLD_STARTS = 6
WARM_STARTS = 2
REFINE_PASSES = 3
REFINE_POINTS = 5
SHRINK = 5
LINE_POINTS = 9
MAX_SWEEPS = 200
POLISH_POPULATION = 48
POLISH_SIGMA = 0.02
POLISH_SEED = 1
POLISH_TOLX = 1e-6
POLISH_TOLFUN = 1e-8
POLISH_GENERATIONS = 600
BETA_PROBES = 8
BETA_ROUNDS = 10
OMEGA_MIN = 1e-3
OMEGA_MAX = 0.5
CHUNK = 10
CSV_HEADER = "omega,time,mem_classical,mem_quantum,mem_qracm,mem_qraqm,converged"


@dataclass
class OptimizationResult:
    kind: AlgorithmKind
    omega: float
    best: Rates
    report: ExponentReport
    evaluations: int
    converged: bool
    coords: tuple[float, ...] = field(default=(), repr=False)

    @property
    def time(self) -> float:
        return self.report.time

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "omega": self.omega,
            "best": self.best.as_dict(),
            "report": self.report.as_dict(),
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


@dataclass
class SweepCurve:
    kind: AlgorithmKind
    points: list[tuple[float, OptimizationResult]]

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w for w, _ in self.points])

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for _, r in self.points])

    def to_csv(self) -> str:
        return curve_csv(self)


def _dims(kind: AlgorithmKind) -> int:
    """Searched coordinates: (u0, u1), plus u2 for the walks (u3 is solved per probe)."""
    return 3 if kind.is_walk else 2


def _to_rates(omega: float, U: np.ndarray):
    U = np.clip(U, 0.0, 1.0)
    nu = U[:, 0]
    alpha = U[:, 1] * np.minimum(nu, omega)
    if U.shape[1] == 2:
        z = np.zeros_like(nu)
        return nu, alpha, z, z
    nu_p = _nu_p(nu, U[:, 2])
    beta = U[:, 3] * np.minimum(alpha, nu_p)
    return nu, alpha, nu_p, beta


def _nu_p(nu, u2):
    return nu / 2 * u2**3


def _from_rates(omega: float, r: Rates, dims: int) -> np.ndarray:
    def frac(x, cap):
        return float(np.clip(x / cap, 0.0, 1.0)) if cap > 0 else 0.0

    u = [r.nu, frac(r.alpha, min(r.nu, omega))]
    if dims == 3:
        nu_p = min(r.nu_p, r.nu - r.nu_p)
        u.append(frac(nu_p, r.nu / 2) ** (1 / 3))
    return np.array(u)


class _Objective:
    """Time exponent at search coordinates; counts cost-model evaluations."""

    def __init__(self, kind: AlgorithmKind, omega: float):
        self.kind, self.omega, self.calls = kind, omega, 0

    def solve(self, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(times, full 2- or 4-coordinate points) for the rows of U."""
        U = np.clip(np.atleast_2d(np.asarray(U, dtype=float)), 0.0, 1.0)
        w = self.omega
        nu = U[:, 0]
        alpha = U[:, 1] * np.minimum(nu, w)
        first = _first_layer(w, nu, alpha)
        if not self.kind.is_walk:
            self.calls += len(U)
            t = _score(self.kind, w, nu, alpha, first=first)["time"]
            return np.where(np.isnan(t), INFEASIBLE, t), U
        nu_p = _nu_p(nu, U[:, 2])
        top = np.minimum(alpha, nu_p)

        def ev_many(X):
            m = X.shape[1]
            self.calls += X.size
            rep = {key: np.repeat(val, m) for key, val in first.items()}
            t = _score(self.kind, w, *(np.repeat(z, m) for z in (nu, alpha, nu_p)), (X * top[:, None]).ravel(), first=rep)
            t = t["time"].reshape(X.shape)
            return np.where(np.isnan(t), INFEASIBLE, t)

        # k-section: each round probes BETA_PROBES evenly spaced points in
        # one call and keeps the two cells around the best of them
        n = len(U)
        a, b = np.zeros(n), np.ones(n)
        best_u, best_t = np.zeros(n), np.full(n, np.inf)
        j = np.arange(1, BETA_PROBES + 1) / (BETA_PROBES + 1)
        rows = np.arange(n)
        for _ in range(BETA_ROUNDS):
            X = a[:, None] + (b - a)[:, None] * j[None, :]
            T = ev_many(X)
            k = np.argmin(T, axis=1)
            t = T[rows, k]
            better = t < best_t
            best_u, best_t = np.where(better, X[rows, k], best_u), np.where(better, t, best_t)
            cell = (b - a) / (BETA_PROBES + 1)
            a, b = X[rows, k] - cell, X[rows, k] + cell
        return best_t, np.column_stack([U, best_u])

    def __call__(self, U: np.ndarray) -> np.ndarray:
        return self.solve(U)[0]


def _grid(points: list[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*points, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _argmin(values: np.ndarray) -> int:
    # first index of the minimum, so ties resolve the same way on every run
    return int(np.argmin(values))


def _starts(U: np.ndarray, vals: np.ndarray, coarse: list[int], count: int) -> list[int]:
    """Best coarse points, taking at most one per band of nu.

    Competing basins of the walk costs differ mostly in nu, and the
    lower-ranked basin on the coarse grid is sometimes the better one once
    refined, so the starts are spread along nu rather than bunched.
    """
    band = np.floor(U[:, 0] * (count - 1e-9)).astype(int)
    picked: list[int] = []
    for i in np.argsort(vals, kind="stable"):
        if not math.isfinite(vals[i]):
            break
        if all(band[i] != band[j] for j in picked):
            picked.append(int(i))
    return picked


def _local(f, x: np.ndarray, fx: float, half: np.ndarray, tol: float) -> tuple[np.ndarray, float, bool]:
    """Shrinking local grids around x, then coordinate descent until improvement < tol."""
    dims = len(x)
    for _ in range(REFINE_PASSES):
        axes = [np.clip(np.linspace(x[d] - half[d], x[d] + half[d], REFINE_POINTS), 0, 1) for d in range(dims)]
        U = _grid(axes)
        vals = f(U)
        i = _argmin(vals)
        if vals[i] < fx:
            x, fx = U[i].copy(), float(vals[i])
        half = half / SHRINK
    step = half.copy()
    for _ in range(MAX_SWEEPS):
        start = fx
        for d in range(dims):
            line = np.repeat(x[None], LINE_POINTS, axis=0)
            line[:, d] = np.clip(np.linspace(x[d] - step[d], x[d] + step[d], LINE_POINTS), 0, 1)
            vals = f(line)
            i = _argmin(vals)
            if vals[i] < fx:
                x, fx = line[i].copy(), float(vals[i])
        if start - fx < tol:
            if np.all(step < tol):
                return x, fx, True
            step = step / 4
    return x, fx, False


def _polish(f, x: np.ndarray, fx: float) -> tuple[np.ndarray, float]:
    """Covariance-adapting evolution strategy started at x.

    The cost has kinks where two terms of a max trade off, and the optimum
    often sits at the bottom of a long, nearly flat valley running along
    such a kink at an angle to every axis.  Coordinate moves stall on its
    walls; an adapted search distribution follows it.  Seeded, so the
    result is deterministic.
    """
    es = cma.CMAEvolutionStrategy(
        list(x),
        POLISH_SIGMA,
        {
            "popsize": POLISH_POPULATION,
            "bounds": [0.0, 1.0],
            "seed": POLISH_SEED,
            "verbose": -9,
            "tolx": POLISH_TOLX,
            "tolfun": POLISH_TOLFUN,
            "maxiter": POLISH_GENERATIONS,
        },
    )
    while not es.stop():
        X = es.ask()
        es.tell(X, [float(v) for v in f(np.array(X))])
    xb, fb = es.result.xbest, es.result.fbest
    if xb is None or not fb < fx:
        return x, fx
    return np.clip(np.asarray(xb, dtype=float), 0.0, 1.0), float(fb)


def _nested_search(f, coarse: list[int], tol: float, starts: int = 1, extra=()) -> tuple[np.ndarray, float, bool]:
    """Coarse grid, then local refinement from the ``starts`` best separated coarse points.

    ``extra`` points (warm starts) are always refined as well.  Each
    refined point is then polished, and the best polished point is returned.
    """
    U = _grid([np.linspace(0.0, 1.0, m) for m in coarse])
    vals = f(U)
    seeds = [(U[i].copy(), float(vals[i])) for i in _starts(U, vals, coarse, starts)]
    for x in extra:
        x = np.clip(np.asarray(x, dtype=float), 0, 1)
        seeds.append((x, float(f(x[None])[0])))
    seeds = [(x, fx) for x, fx in seeds if math.isfinite(fx)]
    if not seeds:
        return U[0], INFEASIBLE, False
    half0 = np.array([1.0 / (m - 1) for m in coarse])
    best = None
    for x, fx in seeds:
        x, fx, converged = _local(f, x, fx, half0, tol)
        x, fx = _polish(f, x, fx)
        if best is None or fx < best[1]:
            best = (x, fx, converged)
    return best


def optimize(
    kind: AlgorithmKind,
    omega: float,
    tol: float = 1e-4,
    start: Rates | tuple | None = None,
) -> OptimizationResult:
    """Smallest time exponent of ``kind`` at relative weight omega.

    ``start`` (a neighbouring optimum) enables a cheaper coarse stage that
    also probes that point; without it the full coarse grid is used.
    """
    kind = AlgorithmKind(kind)
    if kind not in NNS_KINDS:
        raise ValueError(f"{kind.value} has no rates to optimize")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0 < omega < 1:
        raise ValueError(f"omega={omega} outside (0, 1)")
    dims = _dims(kind)
    f = _Objective(kind, omega)
    if start is None:
        coarse = [COARSE_POINTS] * 2 + [WALK_INNER_POINTS] * (dims - 2)
        x, fx, converged = _nested_search(f, coarse, tol, COLD_STARTS)
    else:
        coarse = [WARM_COARSE_POINTS] * 2 + [WARM_INNER_POINTS] * (dims - 2)
        warm = _from_rates(omega, start, dims) if isinstance(start, Rates) else np.asarray(start)[:dims]
        x, fx, converged = _nested_search(f, coarse, tol, WARM_STARTS, extra=[warm])
    if not math.isfinite(fx):
        return OptimizationResult(kind, omega, Rates(omega), ExponentReport(INFEASIBLE), f.calls, False, tuple(x))
    return _result(kind, omega, f.solve(x[None])[1][0], f.calls, converged)


def _result(kind, omega, x, calls, converged) -> OptimizationResult:
    nu, alpha, nu_p, beta = (float(z[0]) for z in _to_rates(omega, x[None]))
    s = _score(kind, omega, nu, alpha, nu_p, beta)
    sigma = float(s["sigma"]) if "sigma" in s else 0.0

    def opt(key):
        v = s.get(key)
        return None if v is None else float(v)

    report = ExponentReport(float(s["time"]), opt("mem_classical"), opt("mem_quantum"), opt("mem_qracm"), opt("mem_qraqm"))
    return OptimizationResult(kind, omega, Rates(omega, nu, alpha, nu_p, beta, sigma), report, calls, converged, tuple(x))


def omega_grid(n_points: int, omega_min: float = OMEGA_MIN, omega_max: float = OMEGA_MAX) -> np.ndarray:
    """n_points equidistant values in [omega_min, omega_max)."""
    if n_points < 2:
        raise ValueError("need at least two grid points")
    return omega_min + (omega_max - omega_min) * np.arange(n_points) / n_points


def _run_chunk(args) -> list[OptimizationResult]:
    kind, omegas, tol, warm = args
    out, prev = [], None
    for w in omegas:
        r = optimize(kind, float(w), tol, start=prev.coords if (warm and prev and prev.converged) else None)
        out.append(r)
        prev = r
    return out


def default_threads() -> int:
    env = os.environ.get("CODESIEVE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _map_chunks(jobs, threads: int | None):
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(jobs) == 1:
        return [_run_chunk(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        return list(pool.map(_run_chunk, jobs))


def sweep(
    kind: AlgorithmKind,
    n_points: int = 100,
    tol: float = 1e-4,
    warm: bool = True,
    threads: int | None = None,
    omega_min: float = OMEGA_MIN,
    omega_max: float = OMEGA_MAX,
) -> SweepCurve:
    """Optimize at every grid omega.

    Warm starts run along fixed blocks of CHUNK consecutive points, each block
    starting cold, so the curve does not depend on the worker count.
    """
    kind = AlgorithmKind(kind)
    grid = omega_grid(n_points, omega_min, omega_max)
    jobs = [(kind, grid[i : i + CHUNK], tol, warm) for i in range(0, len(grid), CHUNK)]
    results = [r for block in _map_chunks(jobs, threads) for r in block]
    return SweepCurve(kind, [(float(w), r) for w, r in zip(grid, results)])


def hardest(
    kind: AlgorithmKind,
    n_points: int = 100,
    tol: float = 1e-4,
    threads: int | None = None,
    curve: SweepCurve | None = None,
) -> tuple[float, OptimizationResult]:
    """The omega maximizing the optimized time: grid argmax, then golden section on omega."""
    kind = AlgorithmKind(kind)
    if curve is None:
        curve = sweep(kind, n_points, tol, threads=threads)
    times = curve.times
    i = int(np.argmax(times))
    omegas = curve.omegas
    lo = omegas[max(i - 1, 0)]
    hi = omegas[min(i + 1, len(omegas) - 1)]
    seed = curve.points[i][1]
    best_w, best = omegas[i], seed
    cache: dict[float, OptimizationResult] = {}

    def g(w: float) -> OptimizationResult:
        if w not in cache:
            cache[w] = optimize(kind, w, tol, start=seed.coords)
        return cache[w]

    a, b = float(lo), float(hi)
    while b - a > tol:
        c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
        if g(c).time >= g(d).time:
            b = d
        else:
            a = c
    for w, r in sorted(cache.items()):
        if r.time > best.time:
            best_w, best = w, r
    return float(best_w), best


def _fmt(x) -> str:
    if x is None:
        return "unused"
    if not math.isfinite(x):
        return "inf"
    return f"{x:.6f}"


def curve_csv(curve: SweepCurve) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for w, r in curve.points:
        rep = r.report
        cells = [f"{w:.6f}", _fmt(rep.time), _fmt(rep.mem_classical), _fmt(rep.mem_quantum), _fmt(rep.mem_qracm), _fmt(rep.mem_qraqm)]
        buf.write(",".join(cells) + ("," + ("true" if r.converged else "false")) + "\n")
    return buf.getvalue()


@dataclass
class ClaimRow:
    kappa: float
    omega: float
    min_bound: float
    prange: float
    gap: float
    argmin_nu_p: float
    argmin_omega_p: float
    cell_nu_p: float
    cell_omega_p: float
    evaluations: int

    @property
    def argmin_near_prange(self) -> bool:
        """Argmin within one coarse grid cell of (nu_p, omega') = (kappa, 0)."""
        return (
            self.argmin_nu_p - self.kappa <= self.cell_nu_p + 1e-12
            and self.argmin_omega_p <= self.cell_omega_p + 1e-12
        )

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["argmin_near_prange"] = self.argmin_near_prange
        return d


def unique_decoding_omega(kappa: float) -> float:
    """The omega <= 1/2 with h(omega) = 1 - kappa."""
    if not 0 < kappa < 1:
        raise ValueError(f"kappa={kappa} outside (0, 1)")
    return float(brentq(lambda x: entropy(x) - (1 - kappa), 1e-300, 0.5, xtol=1e-15))


def isd_claim_check(kappa_grid, tol: float = 1e-6) -> list[ClaimRow]:
    """Minimize the sieving-ISD lower bound per kappa and compare with quantum Prange."""
    rows = []
    for kappa in kappa_grid:
        kappa = float(kappa)
        omega = unique_decoding_omega(kappa)
        calls = 0

        def to_point(U):
            U = np.clip(np.atleast_2d(U), 0, 1)
            nu_p = kappa + U[:, 0] * (1 - kappa)
            return nu_p, U[:, 1] * np.minimum(nu_p, omega)

        def f(U):
            nonlocal calls
            nu_p, wp = to_point(U)
            calls += len(nu_p)
            return _isd_bound(omega, kappa, nu_p, wp)

        x, fx, _ = _nested_search(f, [COARSE_POINTS] * 2, tol)
        nu_p, wp = (float(z[0]) for z in to_point(x))
        prange = quantum_prange_exponent(omega, kappa)
        cell = 1.0 / (COARSE_POINTS - 1)
        rows.append(
            ClaimRow(kappa, omega, fx, prange, fx - prange, nu_p, wp, cell * (1 - kappa), cell * min(1.0, omega), calls)
        )
    return rows
