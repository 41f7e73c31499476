"""Maximum flow / minimum cut with deterministic minimal cut sides.

Two backends produce identical results: a compiled path through
``scipy.sparse.csgraph.maximum_flow`` and a pure-Python Dinic used for tiny
instances (where wrapper overhead dominates) and capacities beyond the int32
range of the compiled routine.  Both report the *vertex-minimal* source-side
mincut, which is the residual-reachable set of the source under any maximum
flow and therefore backend-independent.

Single source/sink queries on a :class:`~ghcut.graph.Graph` are memoized on
the graph object; the solvers re-query the same pairs heavily.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .errors import InvalidArgumentError
from .graph import Graph
from .metrics import Metrics

# Below this many vertices + arcs, pure Python beats the scipy call overhead.
_SMALL_INSTANCE = 300

_INT32_MAX = 2**31 - 1


@dataclass(frozen=True)
class FlowResult:
    value: int
    source_side: frozenset[int]


# -- pure-Python Dinic -------------------------------------------------------


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_undirected(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(c)

    def add_directed(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        to, cap, adj = self.to, self.cap, self.adj
        total = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for eid in adj[u]:
                    v = to[eid]
                    if cap[eid] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        q.append(v)
            if level[t] < 0:
                return total
            it = [0] * self.n
            path = [s]
            path_arc: list[int] = []
            while path:
                u = path[-1]
                if u == t:
                    bn = min(cap[e] for e in path_arc)
                    total += bn
                    for e in path_arc:
                        cap[e] -= bn
                        cap[e ^ 1] += bn
                    i = 0
                    while i < len(path_arc) and cap[path_arc[i]] > 0:
                        i += 1
                    del path[i + 1 :]
                    del path_arc[i:]
                    continue
                advanced = False
                while it[u] < len(adj[u]):
                    eid = adj[u][it[u]]
                    v = to[eid]
                    if cap[eid] > 0 and level[v] == level[u] + 1:
                        path.append(v)
                        path_arc.append(eid)
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    level[u] = -1
                    path.pop()
                    if path_arc:
                        path_arc.pop()

    def reachable(self, s: int) -> list[int]:
        seen = [False] * self.n
        seen[s] = True
        q = deque([s])
        out = [s]
        while q:
            u = q.popleft()
            for eid in self.adj[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and not seen[v]:
                    seen[v] = True
                    out.append(v)
                    q.append(v)
        return out


# -- scipy backend -----------------------------------------------------------


def _graph_flow_template(g: Graph) -> csr_matrix:
    if g._flow_template is None:
        row = np.concatenate([g.eu, g.ev])
        col = np.concatenate([g.ev, g.eu])
        dat = np.concatenate([g.ew, g.ew]).astype(np.int32)
        a = csr_matrix((dat, (row, col)), shape=(g.n, g.n))
        a.sum_duplicates()
        g._flow_template = a
    return g._flow_template


def _scipy_flow(capacity: csr_matrix, s: int, t: int) -> tuple[int, frozenset[int]]:
    res = maximum_flow(capacity, s, t)
    residual = capacity.data - res.flow.data
    # index arrays must be copies: eliminate_zeros compacts them in place,
    # which would corrupt the capacity template shared across queries
    rgraph = csr_matrix(
        (residual, capacity.indices.copy(), capacity.indptr.copy()),
        shape=capacity.shape,
    )
    rgraph.eliminate_zeros()
    order = breadth_first_order(rgraph, s, directed=True, return_predecessors=False)
    return int(res.flow_value), frozenset(int(x) for x in order)


# -- public API ---------------------------------------------------------------


def max_flow(
    g: Graph, s: int, t: int, metrics: Metrics | None = None
) -> FlowResult:
    """Max ``s``-``t`` flow value and the vertex-minimal source-side mincut."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise InvalidArgumentError("flow endpoint out of range")
    if s == t:
        raise InvalidArgumentError("flow endpoints must differ")
    cached = g._mincut_cache.get((s, t))
    if cached is not None:
        return cached
    if metrics is not None:
        metrics.record_maxflow(g.n, g.m)
    if g.n + 2 * g.m <= _SMALL_INSTANCE or g.total_weight() > _INT32_MAX:
        d = _Dinic(g.n)
        for u, v, w in zip(g.eu, g.ev, g.ew):
            d.add_undirected(int(u), int(v), int(w))
        value = d.max_flow(s, t)
        side = frozenset(d.reachable(s))
    else:
        value, side = _scipy_flow(_graph_flow_template(g), s, t)
    out = FlowResult(value, side)
    g._mincut_cache[(s, t)] = out
    return out


def max_flow_multi(
    g: Graph,
    sources: Iterable[int],
    sinks: Iterable[int],
    metrics: Metrics | None = None,
) -> FlowResult:
    """Max flow from a source set to a sink set, minimal source-side cut.

    Source and sink sets are attached through unbounded-capacity arcs; the
    reported side excludes the auxiliary vertices.
    """
    src = sorted(set(int(v) for v in sources))
    snk = sorted(set(int(v) for v in sinks))
    if not src or not snk:
        raise InvalidArgumentError("source and sink sets must be nonempty")
    if set(src) & set(snk):
        raise InvalidArgumentError("source and sink sets overlap")
    for v in src + snk:
        if not (0 <= v < g.n):
            raise InvalidArgumentError("flow endpoint out of range")
    inf_cap = g.total_weight() + 1
    if metrics is not None:
        metrics.record_maxflow(g.n + 2, g.m + len(src) + len(snk))
    n_all = g.n + 2
    s_star, t_star = g.n, g.n + 1
    arc_count = 2 * g.m + len(src) + len(snk)
    if n_all + 2 * arc_count <= _SMALL_INSTANCE or inf_cap > _INT32_MAX:
        d = _Dinic(n_all)
        for u, v, w in zip(g.eu, g.ev, g.ew):
            d.add_undirected(int(u), int(v), int(w))
        for v in src:
            d.add_directed(s_star, v, inf_cap)
        for v in snk:
            d.add_directed(v, t_star, inf_cap)
        value = d.max_flow(s_star, t_star)
        side = frozenset(v for v in d.reachable(s_star) if v < g.n)
    else:
        row = np.concatenate(
            [g.eu, g.ev, np.full(len(src), s_star), np.array(src, dtype=np.int64),
             np.array(snk, dtype=np.int64), np.full(len(snk), t_star)]
        )
        col = np.concatenate(
            [g.ev, g.eu, np.array(src, dtype=np.int64), np.full(len(src), s_star),
             np.full(len(snk), t_star), np.array(snk, dtype=np.int64)]
        )
        dat = np.concatenate(
            [g.ew, g.ew, np.full(len(src), inf_cap), np.zeros(len(src)),
             np.full(len(snk), inf_cap), np.zeros(len(snk))]
        ).astype(np.int32)
        cap = csr_matrix((dat, (row, col)), shape=(n_all, n_all))
        cap.sum_duplicates()
        value, side_all = _scipy_flow(cap, s_star, t_star)
        side = frozenset(v for v in side_all if v < g.n)
    return FlowResult(value, side)


def max_flow_capacitated(
    n: int,
    edges: list[tuple[int, int, int]],
    source_caps: list[tuple[int, int]],
    sink_caps: list[tuple[int, int]],
    metrics: Metrics | None = None,
) -> FlowResult:
    """General form: undirected capacities plus per-vertex supply/demand arcs.

    ``source_caps`` and ``sink_caps`` list ``(vertex, capacity)`` arcs from an
    auxiliary source and to an auxiliary sink.  Used for feasibility flows
    where supplies are bounded.  Returns the flow value and residual-reachable
    set of real vertices from the auxiliary source.
    """
    if not source_caps or not sink_caps:
        raise InvalidArgumentError("need at least one source and one sink arc")
    s_star, t_star = n, n + 1
    total_cap = sum(w for _, _, w in edges) + sum(c for _, c in source_caps) + sum(
        c for _, c in sink_caps
    )
    if metrics is not None:
        metrics.record_maxflow(n + 2, len(edges) + len(source_caps) + len(sink_caps))
    arc_count = 2 * len(edges) + len(source_caps) + len(sink_caps)
    if n + 2 + 2 * arc_count <= _SMALL_INSTANCE or total_cap > _INT32_MAX:
        d = _Dinic(n + 2)
        for u, v, w in edges:
            d.add_undirected(u, v, w)
        for v, c in source_caps:
            d.add_directed(s_star, v, c)
        for v, c in sink_caps:
            d.add_directed(v, t_star, c)
        value = d.max_flow(s_star, t_star)
        side = frozenset(v for v in d.reachable(s_star) if v < n)
        return FlowResult(value, side)
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    ew = np.array([e[2] for e in edges], dtype=np.int64)
    sv = np.array([v for v, _ in source_caps], dtype=np.int64)
    sc = np.array([c for _, c in source_caps], dtype=np.int64)
    tv = np.array([v for v, _ in sink_caps], dtype=np.int64)
    tc = np.array([c for _, c in sink_caps], dtype=np.int64)
    row = np.concatenate([eu, ev, np.full(len(sv), s_star), sv, tv,
                          np.full(len(tv), t_star)])
    col = np.concatenate([ev, eu, sv, np.full(len(sv), s_star),
                          np.full(len(tv), t_star), tv])
    dat = np.concatenate([ew, ew, sc, np.zeros(len(sv)), tc,
                          np.zeros(len(tv))]).astype(np.int32)
    cap = csr_matrix((dat, (row, col)), shape=(n + 2, n + 2))
    cap.sum_duplicates()
    value, side_all = _scipy_flow(cap, s_star, t_star)
    return FlowResult(value, frozenset(v for v in side_all if v < n))


def connectivity(g: Graph, s: int, t: int, metrics: Metrics | None = None) -> int:
    """Min cut value separating ``s`` from ``t``."""
    return max_flow(g, s, t, metrics).value
