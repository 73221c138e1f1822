"""Rank-n zeta invariants of elliptic curves over finite fields, their
Sato-Tate statistics, and murmuration averages over curve families."""

from .ec import CurveQ, reduce
from .traces import ap_table, trace_of_frobenius
from .zeta import beta_sequence, rank_a, rank_a_recursive, rank_a_via_beta, zeta_polynomial

__version__ = "0.1.0"

__all__ = [
    "CurveQ",
    "reduce",
    "ap_table",
    "trace_of_frobenius",
    "beta_sequence",
    "rank_a",
    "rank_a_recursive",
    "rank_a_via_beta",
    "zeta_polynomial",
]
