"""From rates to runtime exponents, and why sieving cannot beat quantum Prange.

Run with ``python demos/03_exponents.py``.  Takes about a minute on one core.
"""

from codesieve.costmodel import NNS_KINDS, AlgorithmKind, Rates, nns_exponent
from codesieve.optimizer import isd_claim_check, optimize

# A single hand-picked parameter set for the classical sieve: list, code of
# centers and buckets all follow from (omega, nu, alpha).
r = Rates(0.15, 0.1, 0.05)
print(f"classical at {r.as_dict()}: time 2^({nns_exponent(AlgorithmKind.CLASSICAL, r).time:.4f} n)")

# Optimizing the filter rates near the hardest weight.  Each quantum
# variant trades memory of a new kind for a smaller exponent.
omega = 0.15
print(f"\noptimized at omega={omega}:")
print(f"{'algorithm':<14}{'time':>8}{'M_C':>8}{'M_Q':>8}{'QRACM':>8}")
for kind in NNS_KINDS:
    res = optimize(kind, omega)
    rep = res.report
    cells = [rep.time, rep.mem_classical, rep.mem_quantum, rep.mem_qracm]
    print(f"{kind.value:<14}" + "".join(f"{'-' if c is None else f'{c:.4f}':>8}" for c in cells))

# Best walk rates sit at a large first-layer center (nu near 1) with a very
# light second layer; the walk cost balances against the list size there.
res = optimize(AlgorithmKind.QWLSF_SPARSE, omega)
print(f"\nsparse walk optimum: {({k: round(v, 4) for k, v in res.best.as_dict().items()})}")

# Used inside information-set decoding, the sieve only ever helps through
# puncturing.  Minimizing the resulting lower bound lands on the corner with
# no puncturing and no weight in the kept part, which is quantum Prange.
for row in isd_claim_check([0.3, 0.5, 0.7]):
    print(f"kappa={row.kappa}: bound {row.min_bound:.5f} vs Prange {row.prange:.5f} "
          f"at nu_p={row.argmin_nu_p:.3f}, omega'={row.argmin_omega_p:.3f}")
