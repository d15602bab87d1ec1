"""Exact contextuality analysis for content-context systems of +/-1 variables.

All probabilities are exact rationals; values cross into python as
fractions.Fraction (Fraction, int, and "p/q" strings are accepted going in).
Systems come from parse(), load(), build_system(), or ingest_trials().
"""

from fractions import Fraction

from cbdkit._core import (
    CbdError,
    System,
    analyze,
    build_system,
    check_perfect_coupling,
    connection_max_equality,
    correlation,
    decide_contextuality,
    detect_cyclic,
    ingest_trials,
    is_consistently_connected,
    marginal,
    parse,
    reconstruct_lambda,
    reduce_coupling,
    s_odd,
    serialize,
    success_probability,
    validate,
    verify_factorization,
)

__version__ = "0.1.0"

__all__ = [
    "CbdError",
    "Fraction",
    "System",
    "analyze",
    "build_system",
    "check_perfect_coupling",
    "connection_max_equality",
    "correlation",
    "decide_contextuality",
    "detect_cyclic",
    "ingest_trials",
    "is_consistently_connected",
    "load",
    "marginal",
    "parse",
    "reconstruct_lambda",
    "reduce_coupling",
    "s_odd",
    "serialize",
    "success_probability",
    "validate",
    "verify_factorization",
]


def load(path):
    """Parse the system document at *path*."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())
