"""Approximate cut-equivalent trees for weighted graphs.

``approx_gh_tree`` relaxes the reported pair values to a ``1 + epsilon``
factor while keeping every tree edge an exact cut of its own weight.  The
recursion mirrors the exact builder until the dominant connectivity class
stops covering almost all terminals; at that point, instead of contracting
the class core, it rounds the smallest terminal-pair connectivity up to a
power of ``1 + epsilon'`` and splits off every minimum pivot cut below the
rounded threshold.  Each split-off side attaches at its actual cut weight,
so reported values never drop below the true connectivity.

The per-level rounding step ``epsilon'`` is fixed once at the root as an
exact fraction of the overall tolerance, which keeps the accumulated
inflation across all shrinking levels within ``epsilon``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidArgumentError
from .ghtree import _singleton_tree, _split_by_cuts
from .graph import Graph
from .metrics import Metrics
from .params import as_fraction, halving_steps, log2_int
from .steps import LabeledCut, _threshold_engine, cut_threshold, find_tau_star
from .tree import SteinerGHTree


@dataclass(frozen=True)
class ApproxConfig:
    """Tolerance schedule shared by every level of one approximate build."""

    epsilon: Fraction
    epsilon_prime: Fraction
    depth_cap: int


def approx_config(epsilon, h: int, total_weight: int) -> ApproxConfig:
    """Schedule for ``h`` terminals on a graph of the given total weight.

    The per-level step is the overall tolerance split across twice the
    worst-case number of shrinking levels.  The depth cap scales with
    ``1 / epsilon`` and leaves generous slack over the exact builder's
    bound because rounded thresholds may shave terminals more slowly.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise InvalidArgumentError("tolerance must lie in (0, 1]")
    steps = max(1, halving_steps(h))
    cap = math.ceil(8 * (steps + log2_int(total_weight + 2) + 2) / eps)
    return ApproxConfig(eps, eps / (2 * steps), cap)


def lambda_u(g: Graph, u, metrics: Metrics | None = None) -> int:
    """Smallest connectivity over all pairs of terminals in ``u``.

    Equals the smallest connectivity from any one terminal to the rest, so a
    doubling-then-bisection scan over ``cut_threshold`` levels finds it with
    logarithmically many threshold queries.
    """
    uu = tuple(sorted(set(int(t) for t in u)))
    if len(uu) < 2:
        raise InvalidArgumentError("need at least two terminals")
    if uu[0] < 0 or uu[-1] >= g.n:
        raise InvalidArgumentError("terminal set contains an out-of-range vertex")
    if not g.is_connected():
        raise InvalidArgumentError("connectivity scan needs a connected graph")
    r = uu[0]
    others = frozenset(uu[1:])
    w = g.total_weight()

    def clear(tau: int) -> bool:
        return not (cut_threshold(g, r, tau, metrics) & others)

    # invariant: clear(lo) holds, clear(hi) fails once hi settles inside range
    lo, hi = 1, 2
    while hi <= w and clear(hi):
        lo, hi = hi, hi * 2
    hi = min(hi, w + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if clear(mid):
            lo = mid
        else:
            hi = mid
    return lo


def approx_gh_tree(
    g: Graph, u, epsilon, metrics: Metrics | None = None
) -> SteinerGHTree:
    """Cut-equivalent tree reporting pair values within ``1 + epsilon``.

    Every tree edge weight is the exact weight of its assignment-preimage
    cut, so reported values sandwich the true connectivity from above:
    ``lambda <= reported <= (1 + epsilon) * lambda`` for every terminal
    pair.  ``epsilon`` accepts any exact ratio in ``(0, 1]``.
    """
    uu = tuple(sorted(set(int(t) for t in u)))
    if not uu:
        raise InvalidArgumentError("terminal set must be nonempty")
    if uu[0] < 0 or uu[-1] >= g.n:
        raise InvalidArgumentError("terminal set contains an out-of-range vertex")
    if not g.is_connected():
        raise InvalidArgumentError("tree construction needs a connected graph")
    cfg = approx_config(epsilon, len(uu), g.total_weight())
    return _abuild(g, uu, cfg, metrics, 1)


def _abuild(
    g: Graph, u: tuple[int, ...], cfg: ApproxConfig, metrics: Metrics | None, depth: int
) -> SteinerGHTree:
    if metrics is not None:
        metrics.record_node(depth)
    if depth > cfg.depth_cap:
        raise InternalError("recursion exceeded its depth cap")
    if depth > 1 and not g.is_connected():
        raise InternalError("contracted instance lost connectivity")
    if len(u) == 1:
        return _singleton_tree(g, u[0])
    tau, c_star = find_tau_star(g, u, metrics)
    cu = tuple(sorted(set(u) & c_star))

    def rec(g2, u2, d):
        return _abuild(g2, u2, cfg, metrics, d)

    if 16 * len(cu) >= 15 * len(u):
        return _split_by_cuts(g, u, cu, tau, metrics, depth, rec)
    sides = _rounded_collection(g, u, cu, cfg.epsilon_prime, metrics)
    return _split_by_cuts(g, u, cu, tau, metrics, depth, rec, collection=sides)


def _rounded_collection(g, u, cu, step, metrics):
    """Disjoint minimum pivot cuts below a rounded connectivity threshold.

    The threshold is the smallest terminal-pair connectivity rounded up to
    the next power of ``1 + step``.  Capping collected cut weights at that
    power is what bounds the error of one split: a side may swallow a
    terminal the pivot barely separates, and that terminal's pairs then
    report the side's boundary weight instead of their own connectivity.
    Among the per-pass batches of the collection engine, the one covering
    the most vertices after maximality filtering wins; earlier passes break
    ties.
    """
    if metrics is not None:
        metrics.bump("rounded_splits")
    lam = lambda_u(g, u, metrics)
    level = Fraction(1)
    growth = 1 + step
    while level < lam:
        level *= growth
    # keeps integer weights w with lam <= w <= floor(level) <= (1+step)*lam
    r = min(cu)
    batches: list[tuple[LabeledCut, ...]] = []
    _threshold_engine(g, r, math.floor(level) + 1, metrics, collect=batches)
    best: list[LabeledCut] = []
    best_total = 0
    for batch in batches:
        sides = _maximal_sides(batch)
        total = sum(len(cut.side) for cut in sides)
        if total > best_total:
            best, best_total = sides, total
    if not best:
        raise InternalError("rounded threshold collected no cuts")
    return best


def _maximal_sides(batch) -> list[LabeledCut]:
    """Containment-maximal cuts of one engine pass, sorted by owner.

    Minimum pivot cuts below a shared threshold form a laminar family, so
    after dropping contained sides the survivors are pairwise disjoint.
    """
    uniq: dict[frozenset[int], LabeledCut] = {}
    for cut in batch:
        prev = uniq.get(cut.side)
        if prev is None or cut.owner < prev.owner:
            uniq[cut.side] = cut
    kept: list[LabeledCut] = []
    for cut in sorted(uniq.values(), key=lambda c: (-len(c.side), c.owner)):
        if any(cut.side <= big.side for big in kept):
            continue
        if any(cut.side & big.side for big in kept):
            raise InternalError("threshold cuts crossed; expected a laminar family")
        kept.append(cut)
    return sorted(kept, key=lambda c: c.owner)
