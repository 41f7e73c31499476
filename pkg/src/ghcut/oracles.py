"""Independent reference implementations used to validate the fast solvers.

Everything here favors obviousness over speed: exhaustive enumeration for
min cuts on small graphs, the textbook contraction recursion for
cut-equivalent trees, and direct pairwise flow computations for connectivity
structure.  Tests freeze expected values produced by these routines and then
require the production algorithms to match them.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import InvalidArgumentError
from .graph import Graph
from .maxflow import max_flow
from .metrics import Metrics
from .tree import SteinerGHTree

_BRUTE_FREE_LIMIT = 24


def _brute_best_side(
    g: Graph, include: list[int], exclude: list[int]
) -> tuple[int, frozenset[int]]:
    """Minimum-weight cut side containing ``include`` and avoiding ``exclude``.

    Ties broken by smaller side, then lexicographically smallest vertex list,
    which selects the unique vertex-minimal side among minimum cuts.
    """
    inc = sorted(set(include))
    exc = sorted(set(exclude))
    if set(inc) & set(exc):
        raise InvalidArgumentError("include and exclude sets overlap")
    free = [v for v in range(g.n) if v not in set(inc) | set(exc)]
    nf = len(free)
    if nf > _BRUTE_FREE_LIMIT:
        raise InvalidArgumentError(f"brute force limited to {_BRUTE_FREE_LIMIT} free vertices")
    masks = np.arange(1 << nf, dtype=np.int64)
    side = np.zeros((g.n, len(masks)), dtype=bool)
    for v in inc:
        side[v, :] = True
    for i, v in enumerate(free):
        side[v, :] = (masks >> i) & 1 == 1
    cuts = np.zeros(len(masks), dtype=np.int64)
    for u, v, w in zip(g.eu, g.ev, g.ew):
        cuts += np.where(side[u] != side[v], w, 0)
    sizes = side.sum(axis=0)
    best_w = int(cuts.min())
    cand = np.flatnonzero(cuts == best_w)
    best_size = int(sizes[cand].min())
    cand = cand[sizes[cand] == best_size]
    best = None
    for mi in cand:
        s = sorted(int(v) for v in np.flatnonzero(side[:, mi]))
        if best is None or s < best:
            best = s
    return best_w, frozenset(best)


def brute_force_mincut(g: Graph, s: int, t: int) -> tuple[int, frozenset[int]]:
    """Exhaustive min s-t cut: value and the vertex-minimal s-side."""
    if s == t:
        raise InvalidArgumentError("cut endpoints must differ")
    return _brute_best_side(g, [s], [t])


def brute_force_isolating(
    g: Graph, terminals: Iterable[int]
) -> dict[int, tuple[int, frozenset[int]]]:
    """For each terminal, the minimal minimum cut splitting it from the rest."""
    u = sorted(set(int(t) for t in terminals))
    if len(u) < 2:
        raise InvalidArgumentError("need at least two terminals")
    out = {}
    for v in u:
        out[v] = _brute_best_side(g, [v], [t for t in u if t != v])
    return out


def classic_gomory_hu(
    g: Graph, terminals: Iterable[int], metrics: Metrics | None = None
) -> SteinerGHTree:
    """Cut-equivalent tree by the textbook split-and-contract recursion.

    Splits on a minimum cut between the two smallest terminals, contracts
    each side for the recursive calls, and joins the subtrees by an edge of
    the cut's weight between the terminals owning the contracted blobs.
    """
    u_orig = sorted(set(int(t) for t in terminals))
    if not u_orig:
        raise InvalidArgumentError("need at least one terminal")
    for t in u_orig:
        if not (0 <= t < g.n):
            raise InvalidArgumentError("terminal out of range")
    if not g.is_connected():
        raise InvalidArgumentError("graph must be connected")

    def rec(
        graph: Graph, terms: list[int], origs: list[list[int]]
    ) -> tuple[list[tuple[int, int, int]], dict[int, int]]:
        if len(terms) == 1:
            root = origs[terms[0]][0]
            assign = {v: root for ol in origs for v in ol}
            return [], assign
        s, t = terms[0], terms[1]
        r = max_flow(graph, s, t, metrics)
        s_side = r.source_side
        comp = sorted(set(range(graph.n)) - s_side)
        g1, m1 = graph.contract([comp])
        g2, m2 = graph.contract([sorted(s_side)])
        origs1: list[list[int]] = [[] for _ in range(g1.n)]
        origs2: list[list[int]] = [[] for _ in range(g2.n)]
        for old in range(graph.n):
            origs1[m1[old]].extend(origs[old])
            origs2[m2[old]].extend(origs[old])
        terms1 = sorted(m1[x] for x in terms if x in s_side)
        terms2 = sorted(m2[x] for x in terms if x not in s_side)
        edges1, assign1 = rec(g1, terms1, origs1)
        edges2, assign2 = rec(g2, terms2, origs2)
        orig_comp = min(v for old in comp for v in origs[old])
        orig_sside = min(v for old in s_side for v in origs[old])
        a1 = assign1[orig_comp]
        a2 = assign2[orig_sside]
        edge = (min(a1, a2), max(a1, a2), r.value)
        merged: dict[int, int] = {}
        sside_origs = {v for old in s_side for v in origs[old]}
        for ol in origs:
            for v in ol:
                merged[v] = assign1[v] if v in sside_origs else assign2[v]
        return edges1 + edges2 + [edge], merged

    edges, assign = rec(g, u_orig, [[v] for v in range(g.n)])
    return SteinerGHTree(
        nodes=tuple(u_orig),
        edges=tuple(sorted(edges)),
        assign=tuple(assign[v] for v in range(g.n)),
    )


def pairwise_connectivity(
    g: Graph, vertices: Iterable[int] | None = None, metrics: Metrics | None = None
) -> dict[tuple[int, int], int]:
    """Connectivity for every pair in ``vertices`` (default: all vertices)."""
    vs = sorted(set(vertices)) if vertices is not None else list(range(g.n))
    out = {}
    for i, a in enumerate(vs):
        for b in vs[i + 1 :]:
            out[(a, b)] = max_flow(g, a, b, metrics).value
    return out


def below_threshold(
    g: Graph,
    r: int,
    tau: int,
    vertices: Iterable[int] | None = None,
    metrics: Metrics | None = None,
) -> list[int]:
    """Vertices whose connectivity to ``r`` is below ``tau``, by direct flows."""
    vs = sorted(set(vertices)) if vertices is not None else list(range(g.n))
    out = []
    for v in vs:
        if v == r:
            continue
        if max_flow(g, r, v, metrics).value < tau:
            out.append(v)
    return out


def connectivity_classes(
    g: Graph,
    vertices: Iterable[int],
    tau: int,
    metrics: Metrics | None = None,
) -> list[list[int]]:
    """Partition of ``vertices`` into classes with pairwise connectivity >= tau.

    The relation is transitive because connectivity obeys
    ``conn(a, c) >= min(conn(a, b), conn(b, c))``; the partition is checked
    against that property before being returned.
    """
    vs = sorted(set(vertices))
    conn = pairwise_connectivity(g, vs, metrics)
    parent = {v: v for v in vs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), lam in conn.items():
        if lam >= tau:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for v in vs:
        classes.setdefault(find(v), []).append(v)
    out = [sorted(c) for c in sorted(classes.values(), key=lambda c: c[0])]
    for cls in out:
        for i, a in enumerate(cls):
            for b in cls[i + 1 :]:
                if conn[(a, b)] < tau:
                    raise AssertionError(
                        f"connectivity classes not transitive at ({a}, {b})"
                    )
    return out
