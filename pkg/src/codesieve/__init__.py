"""Code sieving with locality-sensitive filtering, at desk scale and in exponent space."""

__version__ = "0.1.0"

from .combinatorics import (
    EmptyRegionError,
    best_overlap_estar,
    bucket_pair_prob,
    cap_area,
    min_list_size,
    pair_prob,
    residual_filter_prob,
    residual_wedge_prob,
    wedge_area,
)
from .costmodel import AlgorithmKind, ExponentReport, Rates, exponents, nns_exponent
from .hamming import Seed, Word
from .optimizer import hardest, isd_claim_check, optimize, sweep

__all__ = [
    "AlgorithmKind",
    "EmptyRegionError",
    "ExponentReport",
    "Rates",
    "Seed",
    "Word",
    "best_overlap_estar",
    "bucket_pair_prob",
    "cap_area",
    "exponents",
    "hardest",
    "isd_claim_check",
    "min_list_size",
    "nns_exponent",
    "optimize",
    "pair_prob",
    "residual_filter_prob",
    "residual_wedge_prob",
    "sweep",
    "wedge_area",
]
