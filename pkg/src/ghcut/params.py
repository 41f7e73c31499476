"""Shared numeric parameters and derived quantities.

All ratio-valued parameters are kept as exact fractions so that threshold
comparisons never depend on floating-point rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidArgumentError


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string, or float literal.

    Floats go through their shortest decimal representation so that a caller
    writing ``0.1`` gets exactly 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    raise InvalidArgumentError(f"cannot interpret {x!r} as an exact ratio")

# Largest edge weight accepted anywhere in the package.
MAX_EDGE_WEIGHT = 10**9

# Total graph weight must stay well inside signed 64-bit range.
MAX_TOTAL_WEIGHT = 2**62


def log2_ceil(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1."""
    if x < 1:
        raise ValueError("log2_ceil requires x >= 1")
    return (x - 1).bit_length()


def log2_int(x: int) -> int:
    """ceil(log2(x)) but at least 1, used where a log factor multiplies a budget."""
    return max(1, log2_ceil(x))


def boundary_ratio(n: int) -> int:
    """Per-cluster boundary-link multiplier q(n) used by expander routines."""
    k = log2_int(max(2, n))
    return 8 * k * k


def sparsity_target(n: int, q: int) -> Fraction:
    """Conductance parameter for the expander phases of the cut-collection engine."""
    return Fraction(1, q * 20 * log2_int(max(2, n)))


def sparsity_target_cc(n: int, q: int) -> Fraction:
    """Conductance parameter for the large-component detector (looser than the engine's)."""
    return Fraction(1, q * 100 * log2_int(max(2, n)))


def capture_budget(n: int, total_weight: int, psi: Fraction) -> int:
    """Per-round cap on how many collected sets the engine keeps.

    At the scales this package targets the cap always exceeds the number of
    candidate sets, so the engine runs in its saturated regime.
    """
    lg = log2_int(max(2, n * max(1, total_weight)))
    return math.ceil(1000 * lg * lg / psi)


def capture_budget_cc(n: int, psi: Fraction) -> int:
    """Pivot budget for the large-component detector."""
    return math.ceil(100 * log2_int(max(2, n)) / psi)


def shrink_depth_bound(h: int) -> int:
    """Upper bound on recursion depth for h terminals.

    Each recursive child keeps at most a 15/16 fraction of the terminals, so
    depth is logarithmic in h with base 16/15, plus slack for the two base
    levels.
    """
    if h <= 1:
        return 2
    return math.ceil(math.log(h, 16 / 15)) + 2


def halving_steps(h: int) -> int:
    """Exact ceil(log_{16/15} h) computed with integer arithmetic."""
    if h <= 1:
        return 0
    k = 0
    num, den = 1, 1
    # grow (16/15)**k until it reaches h
    while num < h * den:
        num *= 16
        den *= 15
        k += 1
    return k
