"""Cut collection engine: threshold captures, large-class detection, branch cuts.

The routines here turn pairwise minimum cuts into the set-level primitives the
tree builders consume:

* ``remove_leaf_step`` floats candidate cuts for a working set by running
  isolating cuts over a hit-and-miss family.
* ``cut_threshold`` collects every vertex whose connectivity to a pivot sits
  below a threshold, interleaving capture rounds with expander halving.
* ``detect_large_cc`` finds the threshold-connectivity class holding at least
  three quarters of the terminals, when one exists.
* ``find_tau_star`` locates the largest threshold where such a class survives.
* ``decomp`` extracts disjoint maximal branch cuts at an exact weight.

Capture budgets at this package's scales always exceed the number of candidate
sets, so the family construction is saturated: every relevant pair of the
working set gets its own member.  ``cut_threshold`` exploits that by capturing
through pivot pairs directly (one minimal cut per working vertex), which is
set-for-set equivalent to iterating the full family; the literal variant is
kept for tests.  All threshold comparisons are exact (int or Fraction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidArgumentError
from .expander import expander_decompose, indicator_demand
from .graph import Graph
from .hitmiss import construct_family, hit_set
from .isolating import isolating_cuts
from .metrics import Metrics
from .params import (
    boundary_ratio,
    capture_budget,
    capture_budget_cc,
    log2_int,
    sparsity_target,
    sparsity_target_cc,
)


@dataclass(frozen=True)
class LabeledCut:
    """One collected cut: the side, the vertex it isolates, the cut weight."""

    side: frozenset[int]
    owner: int
    weight: int


def _check_vertex(g: Graph, v: int, what: str) -> int:
    v = int(v)
    if not (0 <= v < g.n):
        raise InvalidArgumentError(f"{what} {v} out of range for n={g.n}")
    return v


def _check_threshold(tau) -> int | Fraction:
    if isinstance(tau, bool) or not isinstance(tau, (int, Fraction)):
        raise InvalidArgumentError("threshold must be an int or a Fraction")
    if tau <= 0:
        raise InvalidArgumentError("threshold must be positive")
    return tau


def _check_vertex_set(g: Graph, vs, what: str) -> tuple[int, ...]:
    out = tuple(sorted(set(int(v) for v in vs)))
    if not out:
        raise InvalidArgumentError(f"{what} must be nonempty")
    if out[0] < 0 or out[-1] >= g.n:
        raise InvalidArgumentError(f"{what} contains an out-of-range vertex")
    return out


def _pair_isolating(
    g: Graph, a: int, b: int, metrics: Metrics | None
) -> tuple[LabeledCut, LabeledCut]:
    """Minimal cut sides for both endpoints of one pair, memoized per graph."""
    key = (a, b) if a < b else (b, a)
    memo = g._memo.setdefault("pair_iso", {})
    hit = memo.get(key)
    if hit is None:
        res = isolating_cuts(g, [[key[0]], [key[1]]], metrics)
        hit = (
            LabeledCut(res.sides[0], key[0], res.weights[0]),
            LabeledCut(res.sides[1], key[1], res.weights[1]),
        )
        memo[key] = hit
    return hit


def _pivot_cut(g: Graph, v: int, r: int, metrics: Metrics | None) -> LabeledCut:
    """Vertex-minimal minimum cut isolating ``v`` from ``r``."""
    lo, hi = _pair_isolating(g, v, r, metrics)
    return lo if lo.owner == v else hi


# capped per graph; the hot entry (the full working set) is created first
_LEAF_MEMO_LIMIT = 32


def _leaf_groups(
    g: Graph, aset: tuple[int, ...], budget: int, metrics: Metrics | None
) -> tuple[tuple[LabeledCut, ...], ...]:
    """Per family member, the labeled cuts its isolating call yields."""
    a_eff = max(int(budget), 2)
    memo = g._memo.setdefault("leaf_groups", {})
    key = (aset, a_eff)
    hit = memo.get(key)
    if hit is not None:
        return hit
    fam = construct_family(aset, a_eff, 2)
    out: list[tuple[LabeledCut, ...]] = []
    for i in range(fam.size):
        hs = sorted(hit_set(fam, i))
        if len(hs) < 2:
            continue
        if len(hs) == 2:
            cuts = _pair_isolating(g, hs[0], hs[1], metrics)
        else:
            res = isolating_cuts(g, [[v] for v in hs], metrics)
            cuts = tuple(
                LabeledCut(side, v, w)
                for v, side, w in zip(hs, res.sides, res.weights)
            )
        out.append(cuts)
    result = tuple(out)
    if len(memo) < _LEAF_MEMO_LIMIT:
        memo[key] = result
    return result


def remove_leaf_step(
    g: Graph, a_set, l: int, metrics: Metrics | None = None
) -> list[LabeledCut]:
    """Candidate cuts for a working set, one isolating round per family member.

    Builds a hit-and-miss family over ``a_set`` with miss budget ``l`` (hit
    size two), runs isolating cuts on each member with at least two elements,
    and returns the labeled sides deduplicated by (owner, side).  Guarantee:
    whenever ``v`` and ``r`` are both in ``a_set`` and the minimal minimum cut
    between them keeps at most ``l`` working vertices on ``v``'s side, that
    exact side appears in the output labeled with ``v``.
    """
    if int(l) < 1:
        raise InvalidArgumentError("miss budget must be at least 1")
    aset = tuple(sorted(set(int(v) for v in a_set)))
    if aset and (aset[0] < 0 or aset[-1] >= g.n):
        raise InvalidArgumentError("working set contains an out-of-range vertex")
    if len(aset) < 2:
        return []
    seen: dict[tuple[int, frozenset[int]], LabeledCut] = {}
    for member in _leaf_groups(g, aset, int(l), metrics):
        for cut in member:
            seen.setdefault((cut.owner, cut.side), cut)
    return list(seen.values())


def _expander_halve(
    g: Graph,
    demand_on,
    active: set[int],
    phi: Fraction,
    metrics: Metrics | None,
) -> None:
    """One halving round: decompose w.r.t. an indicator demand, then drop the
    lexicographically smallest half of ``active`` inside every cluster."""
    dec = expander_decompose(g, indicator_demand(g, demand_on), phi, metrics=metrics)
    for cluster in dec.clusters:
        t = sorted(active.intersection(cluster))
        for v in t[: (len(t) + 1) // 2]:
            active.discard(v)


def _threshold_engine(
    g: Graph,
    r: int,
    tau,
    metrics: Metrics | None,
    collect: list | None = None,
    literal: bool = False,
) -> frozenset[int]:
    """Capture rounds interleaved with expander halving, shared loop body.

    ``collect``, when given, receives one tuple per inner capture pass holding
    the cuts that survived the (weight, pivot) filter in that pass.  The
    pivot-pair path and the literal family path collect the same union; only
    the multiset of intermediate sides differs.
    """
    n = g.n
    q = boundary_ratio(n)
    psi = sparsity_target(n, q)
    budget = capture_budget(n, g.total_weight(), psi)
    phi = min(Fraction(1), psi * tau)
    outer_cap = log2_int(n) ** 2
    inner_cap = log2_int(n)

    a = set(range(n))
    captured: set[int] = set()
    for _ in range(outer_cap):
        a_prime = set(a)
        round_cuts: dict[tuple[int, frozenset[int]], LabeledCut] = {}
        for k in range(inner_cap):
            if len(a_prime) < 2:
                break
            batch: list[LabeledCut] = []
            if literal:
                for member in _leaf_groups(g, tuple(sorted(a_prime)), budget, metrics):
                    for cut in member:
                        if cut.weight < tau and r not in cut.side:
                            batch.append(cut)
            else:
                for v in sorted(a_prime):
                    if v == r:
                        continue
                    cut = _pivot_cut(g, v, r, metrics)
                    if cut.weight < tau and r not in cut.side:
                        batch.append(cut)
            if collect is not None:
                collect.append(tuple(batch))
            grew = False
            for cut in batch:
                key = (cut.owner, cut.side)
                if key not in round_cuts:
                    round_cuts[key] = cut
                    grew = True
            if not grew:
                break
            if k + 1 < inner_cap:
                _expander_halve(g, sorted(a_prime), a_prime, phi, metrics)
        if not round_cuts:
            break
        union: set[int] = set()
        for cut in round_cuts.values():
            union |= cut.side
        new_a = a - union
        captured |= union
        if new_a == a:
            break
        a = new_a
    return frozenset(captured)


def cut_threshold(
    g: Graph, r: int, tau, metrics: Metrics | None = None
) -> frozenset[int]:
    """Every vertex whose connectivity to ``r`` lies strictly below ``tau``.

    Runs capture rounds against pivot ``r`` interleaved with expander halving
    of the working set; the union of all captured sides is exactly the set of
    vertices separated from ``r`` by a cut lighter than ``tau``.  Results are
    memoized per graph, so repeated probes during threshold searches are free.
    ``tau`` may be an integer or an exact Fraction.
    """
    r = _check_vertex(g, r, "pivot")
    tau = _check_threshold(tau)
    memo = g._memo.setdefault("cut_threshold", {})
    key = (r, tau)
    hit = memo.get(key)
    if hit is None:
        hit = _threshold_engine(g, r, tau, metrics)
        memo[key] = hit
    return hit


def _cut_threshold_literal(
    g: Graph, r: int, tau, metrics: Metrics | None = None
) -> frozenset[int]:
    """Family-iterating variant of ``cut_threshold``, kept for equivalence tests."""
    r = _check_vertex(g, r, "pivot")
    tau = _check_threshold(tau)
    return _threshold_engine(g, r, tau, metrics, literal=True)


def threshold_class(
    g: Graph, u, r: int, tau, metrics: Metrics | None = None
) -> frozenset[int]:
    """Terminals at connectivity >= ``tau`` from ``r`` (``r`` included)."""
    uset = frozenset(_check_vertex_set(g, u, "terminal set"))
    return uset - cut_threshold(g, r, tau, metrics)


def detect_large_cc(
    g: Graph, u, tau, metrics: Metrics | None = None
) -> frozenset[int]:
    """The threshold-connectivity class covering >= 3/4 of the terminals, or empty.

    Terminals split into equivalence classes under "connectivity >= tau"; at
    most one class can hold three quarters of them.  A whittling loop keeps
    the candidate pool small when the terminal set is enormous (at this
    package's scales it never triggers); the final scan probes one candidate
    per class, skipping classes already seen and aborting once the unseen
    remainder is too small to host a large class.
    """
    uset = frozenset(_check_vertex_set(g, u, "terminal set"))
    tau = _check_threshold(tau)
    n = g.n
    usize = len(uset)
    q = boundary_ratio(n)
    psi = sparsity_target_cc(n, q)
    budget = capture_budget_cc(n, psi)
    phi = min(Fraction(1), psi * tau)
    pool_floor = psi.denominator // psi.numerator

    a = set(uset)
    while len(a) > pool_floor:
        cuts = remove_leaf_step(g, sorted(a), budget, metrics)
        hit: set[int] = set()
        for cut in cuts:
            if cut.weight < tau and 4 * len(cut.side & uset) < 3 * usize:
                hit |= a & cut.side
        # too few hits means the pool is expander-like: halve instead
        if len(hit) * psi.denominator * 100 * log2_int(n) < psi.numerator * len(a):
            _expander_halve(g, sorted(a), a, phi, metrics)
        else:
            a -= hit

    ruled_out: set[int] = set()
    for r in sorted(a):
        if r in ruled_out:
            continue
        cls = uset - cut_threshold(g, r, tau, metrics)
        if 4 * len(cls) >= 3 * usize:
            return frozenset(cls)
        ruled_out |= cls
        if 4 * (usize - len(ruled_out)) < 3 * usize:
            break
    return frozenset()


def find_tau_star(
    g: Graph, u, metrics: Metrics | None = None
) -> tuple[int, frozenset[int]]:
    """Largest threshold admitting a large terminal class, plus that class's
    full vertex set.

    Returns ``(tau_star, c_star)`` where ``c_star`` is every graph vertex with
    connectivity >= ``tau_star`` to the class (a maximal threshold-connected
    set).  Doubles up from 1, then bisects; class sizes only shrink as the
    threshold grows, so the predicate is monotone.
    """
    uu = _check_vertex_set(g, u, "terminal set")
    if len(uu) < 2:
        raise InvalidArgumentError("threshold search needs at least two terminals")
    if not g.is_connected():
        raise InvalidArgumentError("threshold search needs a connected graph")
    w_total = g.total_weight()

    lo = 1
    c_lo = detect_large_cc(g, uu, 1, metrics)
    if not c_lo:
        raise InternalError("connected graph lost its threshold-1 class")
    hi = 2
    while hi <= w_total:
        c = detect_large_cc(g, uu, hi, metrics)
        if c:
            lo, c_lo = hi, c
            hi *= 2
        else:
            break
    hi = min(hi, w_total + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        c = detect_large_cc(g, uu, mid, metrics)
        if c:
            lo, c_lo = mid, c
        else:
            hi = mid
    rep = min(c_lo)
    c_star = frozenset(range(g.n)) - cut_threshold(g, rep, lo, metrics)
    return lo, c_star


def decomp(
    g: Graph,
    c,
    r: int,
    tau: int,
    u=None,
    metrics: Metrics | None = None,
) -> list[LabeledCut]:
    """Disjoint maximal branch cuts of weight exactly ``tau`` inside ``c``.

    Collects cuts floated by capture rounds over ``c`` (filtered to weight
    exactly ``tau``, avoiding ``r``, and keeping at most a 15/16 fraction of
    ``u`` on the cut side), then keeps maximal sides.  Ties between equal
    sides go to the smallest owner.  The kept sides are asserted disjoint;
    each is a minimum cut between its owner and ``r``.  ``u`` defaults to the
    ground set ``c``.
    """
    cc = _check_vertex_set(g, c, "ground set")
    r = _check_vertex(g, r, "pivot")
    if r not in cc:
        raise InvalidArgumentError("pivot must belong to the ground set")
    if isinstance(tau, bool) or not isinstance(tau, int):
        raise InvalidArgumentError("branch cut weight must be an integer")
    if tau <= 0:
        raise InvalidArgumentError("branch cut weight must be positive")
    uset = frozenset(cc if u is None else _check_vertex_set(g, u, "terminal set"))
    usize = len(uset)

    n = g.n
    q = boundary_ratio(n)
    psi = sparsity_target(n, q)
    budget = capture_budget(n, g.total_weight(), psi)
    phi = min(Fraction(1), psi * tau)
    outer_cap = log2_int(n) ** 2
    inner_cap = log2_int(n)

    a = set(cc)
    collected: dict[tuple[int, frozenset[int]], LabeledCut] = {}
    for _ in range(outer_cap):
        a_prime = set(a)
        for k in range(inner_cap):
            if len(a_prime) < 2:
                break
            grew = False
            for member in _leaf_groups(g, tuple(sorted(a_prime)), budget, metrics):
                for cut in member:
                    if (
                        cut.weight == tau
                        and r not in cut.side
                        and 16 * len(cut.side & uset) <= 15 * usize
                    ):
                        key = (cut.owner, cut.side)
                        if key not in collected:
                            collected[key] = cut
                            grew = True
            if not grew:
                break
            if k + 1 < inner_cap:
                _expander_halve(g, sorted(a), a_prime, phi, metrics)
        union: set[int] = set()
        for cut in collected.values():
            union |= cut.side
        new_a = a - union
        if new_a == a:
            break
        a = new_a

    # smallest owner wins between equal sides, then drop contained sides
    by_side: dict[frozenset[int], LabeledCut] = {}
    for cut in collected.values():
        cur = by_side.get(cut.side)
        if cur is None or cut.owner < cur.owner:
            by_side[cut.side] = cut
    order = sorted(by_side.values(), key=lambda cut: (-len(cut.side), cut.owner))
    kept: list[LabeledCut] = []
    for cut in order:
        if any(cut.side <= other.side for other in kept):
            continue
        kept.append(cut)

    taken: set[int] = set()
    for cut in kept:
        if cut.side & taken:
            raise InternalError("maximal branch cuts overlap")
        taken |= cut.side
        if cut.owner not in cut.side or r in cut.side:
            raise InternalError("branch cut lost its owner or caught the pivot")
    return sorted(kept, key=lambda cut: cut.owner)
