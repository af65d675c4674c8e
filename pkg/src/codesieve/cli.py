"""Command-line entry point: ``python -m codesieve <command> ...``.

Exit codes: 0 success, 1 bad usage or invalid arguments, 2 a computed
negative outcome (infeasible rates, sieve collapse).  Diagnostics for codes
1 and 2 go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import combinatorics as cb
from .codes import sample_random_code
from .costmodel import NNS_KINDS, AlgorithmKind, quantum_prange_exponent
from .hamming import Seed, sample_sphere_many
from .lsf import brute_force_pairs, derive_nns_params, nns_solve
from .optimizer import curve_csv, hardest, isd_claim_check, sweep
from .sieve import SieveCollapse, solve_dp


class UsageError(Exception):
    pass


class Outcome(Exception):
    """A scientific negative result, reported with exit code 2."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "outcome"))
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _exact(x) -> dict:
    if isinstance(x, Fraction):
        return {"value": f"{x.numerator}/{x.denominator}", "decimal": f"{float(x):.12g}"}
    return {"value": str(x), "decimal": str(x)}


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.format == "json" or text is None:
        sys.stdout.write(json.dumps(payload, indent=1, default=str) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _config(args) -> dict:
    skip = {"func", "format"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _positive(name: str, value, allow_zero: bool = False):
    if value is None:
        return
    if value < 0 or (value == 0 and not allow_zero):
        raise UsageError(f"--{name} must be {'non-negative' if allow_zero else 'positive'}, got {value}")


# -- oracle ------------------------------------------------------------------

ORACLES = {
    "binom": (("n", "k"), lambda a: cb.binomial(a.n, a.k)),
    "sphere": (("n", "w"), lambda a: cb.sphere_area(a.n, a.w)),
    "cap": (("n", "v", "w", "alpha"), lambda a: cb.cap_area(a.n, a.v, a.w, a.alpha)),
    "wedge": (("n", "w", "wstar", "v", "alpha"), lambda a: cb.wedge_area(a.n, a.w, a.wstar, a.v, a.alpha)),
    "p": (("n", "w"), None),
    "pbeta": (("v", "alpha", "vprime", "beta"), lambda a: cb.residual_filter_prob(a.v, a.alpha, a.vprime, a.beta)),
    "w": (
        ("v", "alpha", "estar", "vprime", "beta"),
        lambda a: cb.residual_wedge_prob(a.v, a.alpha, a.estar, a.vprime, a.beta),
    ),
    "estar": (("n", "w", "v", "alpha"), lambda a: cb.best_overlap_estar(a.n, a.w, a.v, a.alpha)),
}


def _oracle_p(a):
    # with a center (v, alpha) this is the in-bucket pair probability
    if a.v is None and a.alpha is None:
        return cb.pair_prob(a.n, a.w)
    if a.v is None or a.alpha is None:
        raise UsageError("oracle p needs both --v and --alpha, or neither")
    return cb.bucket_pair_prob(a.n, a.w, a.v, a.alpha)


def cmd_oracle(args) -> int:
    needed, fn = ORACLES[args.which]
    missing = [k for k in needed if getattr(args, k) is None]
    if missing:
        raise UsageError(f"oracle {args.which} needs " + ", ".join(f"--{k}" for k in missing))
    fn = fn or _oracle_p
    try:
        val = fn(args)
    except cb.EmptyRegionError as e:
        raise Outcome({"error": "empty region", "detail": str(e)}) from e
    except ValueError as e:
        raise UsageError(str(e)) from e
    ex = _exact(val)
    args_used = {k: getattr(args, k) for k in needed if getattr(args, k) is not None}
    if args.which == "p":
        args_used.update({k: getattr(args, k) for k in ("v", "alpha") if getattr(args, k) is not None})
    _emit(args, {"oracle": args.which, "args": args_used, **ex}, ex["value"])
    return 0


# -- code / nns / sieve ------------------------------------------------------


def cmd_code_sample(args) -> int:
    if not 1 <= args.k <= args.n:
        raise UsageError(f"need 1 <= k <= n, got k={args.k}, n={args.n}")
    code = sample_random_code(args.n, args.k, Seed(args.seed))
    payload = {"config": _config(args), **json.loads(code.to_json())}
    _emit(args, payload, json.dumps(payload))
    return 0


def cmd_nns(args) -> int:
    _positive("N", args.N)
    _positive("slack", args.slack)
    _positive("rounds", args.rounds)
    if not (0 < args.w <= args.n and args.w % 2 == 0):
        raise UsageError("w must be even with 0 < w <= n")
    N = args.N if args.N is not None else cb.min_list_size(args.n, args.w)
    slack = args.slack if args.slack is not None else args.n
    seed = Seed(args.seed)
    words = sample_sphere_many(args.n, args.w, N, seed.spawn(0))
    params = derive_nns_params(args.n, args.w, N, slack)
    if args.rounds is not None:
        params = dataclasses.replace(params, rounds=args.rounds)
    t0 = time.perf_counter()
    res = nns_solve(words, args.w, params, seed.spawn(1))
    wall = time.perf_counter() - t0
    cfg = _config(args) | {"N": N, "slack": slack}
    found = set(res.pairs)
    payload = {
        "config": cfg,
        "params": params.as_dict(),
        "pairs_found": len(found),
        "center_enumerations": res.center_enumerations,
        "pair_comparisons": res.pair_comparisons,
        "wall_time_s": round(wall, 6),
    }
    if args.n <= 48:
        truth = brute_force_pairs(words, args.w)
        payload["pairs_true"] = len(truth)
        payload["recall"] = len(found & truth) / len(truth) if truth else 1.0
        payload["false_positives"] = len(found - truth)
    _emit(args, payload)
    return 0


def cmd_sieve(args) -> int:
    _positive("N", args.N)
    _positive("slack", args.slack)
    if not 1 <= args.k <= args.n:
        raise UsageError(f"need 1 <= k <= n, got k={args.k}, n={args.n}")
    if not (0 < args.w <= args.n and args.w % 2 == 0):
        raise UsageError("w must be even with 0 < w <= n")
    N = args.N if args.N is not None else cb.min_list_size(args.n, args.w)
    cfg = _config(args) | {"N": N, "slack": args.slack if args.slack is not None else args.n}
    try:
        words, trace = solve_dp(args.n, args.k, args.w, N, Seed(args.seed), args.slack)
    except SieveCollapse as e:
        if args.trace:
            _write(args.trace, e.trace.to_json())
        raise Outcome({"error": "sieve collapsed", "detail": str(e), "config": cfg}) from e
    if args.trace:
        _write(args.trace, trace.to_json())
    payload = {
        "config": cfg,
        "nns": trace.nns,
        "output_size": len(words),
        "words": [x.to_hex() for x in words],
        "levels": len(trace.levels),
    }
    _emit(args, payload)
    return 0


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


# -- cost / isd-bound --------------------------------------------------------


def _kinds(name: str) -> list[AlgorithmKind]:
    if name == "all":
        return list(NNS_KINDS)
    try:
        kind = AlgorithmKind.parse(name)
    except ValueError as e:
        raise UsageError(f"unknown algorithm {name!r}") from e
    if kind not in NNS_KINDS:
        raise UsageError(f"{kind.value} is not an NNS algorithm")
    return [kind]


def _threads(args) -> int | None:
    if args.threads is not None:
        _positive("threads", args.threads)
        return args.threads
    env = os.environ.get("CODESIEVE_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError as e:
            raise UsageError(f"CODESIEVE_THREADS={env!r} is not an integer") from e
    return None


def _cell(x) -> str:
    return "unused" if x is None else f"{x:.6f}"


def cmd_cost_table(args) -> int:
    _positive("tol", args.tol)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    rows = []
    for kind in _kinds(args.algo):
        w, r = hardest(kind, args.points, args.tol, threads=_threads(args))
        rows.append((kind, w, r))
    payload = {
        "config": _config(args),
        "rows": [{"algo": k.value, "omega": w, **r.report.as_dict(), "rates": r.best.as_dict()} for k, w, r in rows],
    }
    head = f"{'algo':<14}{'omega':>10}{'time':>10}{'M_C':>10}{'M_Q':>10}{'M_QRACM':>10}{'M_QRAQM':>10}"
    lines = [head]
    for k, w, r in rows:
        rep = r.report
        cells = [rep.time, rep.mem_classical, rep.mem_quantum, rep.mem_qracm, rep.mem_qraqm]
        lines.append(f"{k.value:<14}{w:>10.6f}" + "".join(f"{_cell(c):>10}" for c in cells))
    _emit(args, payload, "\n".join(lines))
    if any(not r.report.feasible for _, _, r in rows):
        raise Outcome({"error": "infeasible optimum", "rows": payload["rows"]})
    return 0


def cmd_cost_curve(args) -> int:
    _positive("tol", args.tol)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    kinds = _kinds(args.algo)
    if len(kinds) != 1:
        raise UsageError("cost curve takes a single --algo")
    curve = sweep(kinds[0], args.points, args.tol, threads=_threads(args))
    _write(args.out, curve_csv(curve))
    return 0


def cmd_isd_bound(args) -> int:
    for k in args.kappa:
        if not 0 < k < 1:
            raise UsageError(f"kappa={k} outside (0, 1)")
    rows = isd_claim_check(args.kappa)
    payload = {"config": _config(args), "rows": [r.as_dict() for r in rows]}
    lines = [f"{'kappa':>8}{'omega':>10}{'bound':>10}{'prange':>10}{'gap':>11}{'nu_p':>10}{'omega_p':>10}"]
    for r in rows:
        lines.append(
            f"{r.kappa:>8.4f}{r.omega:>10.6f}{r.min_bound:>10.6f}{r.prange:>10.6f}"
            f"{r.gap:>11.6f}{r.argmin_nu_p:>10.6f}{r.argmin_omega_p:>10.6f}"
        )
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_prange(args) -> int:
    try:
        v = quantum_prange_exponent(args.omega, args.kappa)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit(args, {"omega": args.omega, "kappa": args.kappa, "exponent": v}, f"{v:.6f}")
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="codesieve", description="Code sieving, LSF near-neighbor search and their cost exponents.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--threads", type=int, default=None, help="worker cap (default: CODESIEVE_THREADS or all cores)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = sub.add_parser("oracle", help="exact combinatorial quantities")
    o.add_argument("which", choices=sorted(ORACLES))
    for name in ("n", "k", "w", "wstar", "v", "alpha", "vprime", "beta", "estar"):
        o.add_argument(f"--{name}", type=int)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("code", help="random linear codes")
    csub = c.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cs = csub.add_parser("sample", help="sample a random [n, k] code")
    cs.add_argument("--n", type=int, required=True)
    cs.add_argument("--k", type=int, required=True)
    cs.add_argument("--seed", type=int, required=True)
    cs.set_defaults(func=cmd_code_sample)

    n = sub.add_parser("nns", help="LSF near-neighbor search on a random list")
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--w", type=int, required=True)
    n.add_argument("--N", type=int, default=None, help="list size (default: minimal sieve list size)")
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--slack", type=int, default=None, help="default: n")
    n.add_argument("--rounds", type=int, default=None, help="override the derived round count")
    n.set_defaults(func=cmd_nns)

    s = sub.add_parser("sieve", help="sieve a random code for weight-w codewords")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--N", type=int, default=None, help="list size (default: minimal sieve list size)")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--slack", type=int, default=None)
    s.add_argument("--trace", default=None, help="write the per-level trace JSON here")
    s.set_defaults(func=cmd_sieve)

    cost = sub.add_parser("cost", help="optimized cost exponents")
    csub = cost.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = csub.add_parser("table", help="hardest-instance exponents per algorithm")
    t.add_argument("--algo", default="all")
    t.add_argument("--points", type=int, default=100)
    t.add_argument("--tol", type=float, default=1e-4)
    t.set_defaults(func=cmd_cost_table)
    cv = csub.add_parser("curve", help="optimized exponents along the omega grid, as CSV")
    cv.add_argument("--algo", required=True)
    cv.add_argument("--points", type=int, default=100)
    cv.add_argument("--tol", type=float, default=1e-4)
    cv.add_argument("--out", default="-")
    cv.set_defaults(func=cmd_cost_curve)

    ib = sub.add_parser("isd-bound", help="sieving-ISD lower bound against quantum Prange")
    ib.add_argument("--kappa", type=float, nargs="+", required=True)
    ib.set_defaults(func=cmd_isd_bound)

    pr = sub.add_parser("prange", help="quantum Prange exponent")
    pr.add_argument("--omega", type=float, required=True)
    pr.add_argument("--kappa", type=float, required=True)
    pr.set_defaults(func=cmd_prange)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is not None:
            _positive("threads", args.threads)
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(json.dumps({"error": "usage", "detail": str(e)}) + "\n")
        return 1
    except Outcome as e:
        sys.stderr.write(json.dumps(e.payload, default=str) + "\n")
        return 2
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
