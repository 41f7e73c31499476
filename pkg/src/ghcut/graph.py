"""Undirected weighted multigraphs with the operations the cut algorithms need.

Vertices are the integers ``0..n-1``.  Parallel edges are kept as separate
entries; self-loops are rejected on construction and silently dropped by
contraction (they never affect a cut).  Weights are positive integers.

Instances are treated as immutable once built: derived structures (adjacency,
degrees, flow templates, pair-mincut results) are cached on the object.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidArgumentError, ParseError
from .params import MAX_EDGE_WEIGHT, MAX_TOTAL_WEIGHT


class Graph:
    __slots__ = (
        "n",
        "eu",
        "ev",
        "ew",
        "_adj",
        "_degrees",
        "_components",
        "_flow_template",
        "_mincut_cache",
        "_memo",
        "_total_weight",
    )

    def __init__(self, n: int, eu: np.ndarray, ev: np.ndarray, ew: np.ndarray):
        self.n = int(n)
        self.eu = eu
        self.ev = ev
        self.ew = ew
        self._adj = None
        self._degrees = None
        self._components = None
        self._flow_template = None
        self._mincut_cache: dict = {}
        self._memo: dict = {}
        self._total_weight = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Graph":
        if n < 1:
            raise InvalidArgumentError(f"graph needs at least one vertex, got n={n}")
        es = list(edges)
        eu = np.array([e[0] for e in es], dtype=np.int64)
        ev = np.array([e[1] for e in es], dtype=np.int64)
        ew = np.array([e[2] for e in es], dtype=np.int64)
        g = cls(n, eu, ev, ew)
        g._validate()
        return g

    def _validate(self) -> None:
        n, eu, ev, ew = self.n, self.eu, self.ev, self.ew
        if len(eu) != len(ev) or len(eu) != len(ew):
            raise InvalidArgumentError("edge arrays have mismatched lengths")
        if len(eu) > 0:
            if eu.min(initial=0) < 0 or ev.min(initial=0) < 0:
                raise InvalidArgumentError("edge endpoint below 0")
            if eu.max(initial=0) >= n or ev.max(initial=0) >= n:
                raise InvalidArgumentError("edge endpoint out of range")
            if np.any(eu == ev):
                raise InvalidArgumentError("self-loops are not supported")
            if ew.min() < 1:
                raise InvalidArgumentError("edge weights must be >= 1")
            if ew.max() > MAX_EDGE_WEIGHT:
                raise InvalidArgumentError(
                    f"edge weight exceeds limit {MAX_EDGE_WEIGHT}"
                )
        if int(ew.sum()) > MAX_TOTAL_WEIGHT:
            raise InvalidArgumentError("total graph weight too large")

    # -- basic queries -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.eu)

    def total_weight(self) -> int:
        if self._total_weight is None:
            self._total_weight = int(self.ew.sum())
        return self._total_weight

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [
            (int(u), int(v), int(w))
            for u, v, w in zip(self.eu, self.ev, self.ew)
        ]

    def adjacency(self) -> csr_matrix:
        """Symmetric weighted adjacency with parallel edges summed."""
        if self._adj is None:
            row = np.concatenate([self.eu, self.ev])
            col = np.concatenate([self.ev, self.eu])
            dat = np.concatenate([self.ew, self.ew])
            a = csr_matrix((dat, (row, col)), shape=(self.n, self.n))
            a.sum_duplicates()
            self._adj = a
        return self._adj

    def weighted_degrees(self) -> np.ndarray:
        if self._degrees is None:
            d = np.zeros(self.n, dtype=np.int64)
            np.add.at(d, self.eu, self.ew)
            np.add.at(d, self.ev, self.ew)
            self._degrees = d
        return self._degrees

    def cut_weight(self, side: Iterable[int]) -> int:
        """Total weight of edges with exactly one endpoint in ``side``."""
        mask = np.zeros(self.n, dtype=bool)
        idx = np.fromiter((int(v) for v in side), dtype=np.int64)
        if len(idx) > 0:
            if idx.min() < 0 or idx.max() >= self.n:
                raise InvalidArgumentError("cut side contains out-of-range vertex")
            mask[idx] = True
        cross = mask[self.eu] != mask[self.ev]
        return int(self.ew[cross].sum())

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest member."""
        if self._components is None:
            if self.m == 0:
                self._components = [[v] for v in range(self.n)]
            else:
                k, labels = connected_components(self.adjacency(), directed=False)
                comps: list[list[int]] = [[] for _ in range(k)]
                for v in range(self.n):
                    comps[labels[v]].append(v)
                comps.sort(key=lambda c: c[0])
                self._components = comps
        return self._components

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    # -- derived graphs ----------------------------------------------------

    def contract(
        self, blocks: Sequence[Iterable[int]]
    ) -> tuple["Graph", list[int]]:
        """Contract each block to one vertex.

        Blocks must be disjoint and nonempty.  Vertices outside every block
        stay as singletons.  Edges that fall inside a block are dropped;
        parallel edges between the same pair of new vertices are merged by
        weight summation.  A block is represented by its smallest member and
        new ids are assigned in ascending representative order, so the result
        is independent of block listing order.  Returns the contracted graph
        and ``new_of_old`` mapping each old vertex to its new id.
        """
        rep = np.arange(self.n, dtype=np.int64)
        seen = np.zeros(self.n, dtype=bool)
        effective = False
        for block in blocks:
            bl = sorted(int(v) for v in block)
            if not bl:
                raise InvalidArgumentError("cannot contract an empty block")
            if bl[0] < 0 or bl[-1] >= self.n:
                raise InvalidArgumentError("contraction block out of range")
            r = bl[0]
            for v in bl:
                if seen[v]:
                    raise InvalidArgumentError("contraction blocks overlap")
                seen[v] = True
                rep[v] = r
            if len(bl) > 1:
                effective = True
        if not effective:
            return self, list(range(self.n))
        reps_sorted = np.unique(rep)
        n2 = len(reps_sorted)
        new_id = np.empty(self.n, dtype=np.int64)
        new_id[reps_sorted] = np.arange(n2)
        new_of_old = new_id[rep]
        nu = new_of_old[self.eu]
        nv = new_of_old[self.ev]
        keep = nu != nv
        lo = np.minimum(nu[keep], nv[keep])
        hi = np.maximum(nu[keep], nv[keep])
        key = lo * n2 + hi
        uniq, inverse = np.unique(key, return_inverse=True)
        w2 = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(w2, inverse, self.ew[keep])
        g2 = Graph(n2, uniq // n2, uniq % n2, w2)
        return g2, [int(x) for x in new_of_old]

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Subgraph induced on ``vertices``.

        Returns the subgraph and ``old_of_new`` where position ``i`` holds the
        original id of new vertex ``i`` (ascending original order).
        """
        old = sorted(set(int(v) for v in vertices))
        if not old:
            raise InvalidArgumentError("induced subgraph needs at least one vertex")
        if old[0] < 0 or old[-1] >= self.n:
            raise InvalidArgumentError("induced vertex out of range")
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[old] = np.arange(len(old))
        keep = (new_id[self.eu] >= 0) & (new_id[self.ev] >= 0)
        g2 = Graph(
            len(old),
            new_id[self.eu[keep]],
            new_id[self.ev[keep]],
            self.ew[keep].copy(),
        )
        return g2, old


# -- text format -----------------------------------------------------------
#
#   p ghcut <n> <m>
#   c <free-form comment>
#   e <u> <v> <w>        1-based endpoints
#   t <v1> <v2> ...      terminal list, 1-based; lines accumulate


def parse_graph_text(text: str) -> tuple[Graph, list[int]]:
    n = -1
    m = -1
    edges: list[tuple[int, int, int]] = []
    terminals: set[int] = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n >= 0:
                raise ParseError(f"line {ln}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "ghcut":
                raise ParseError(f"line {ln}: expected 'p ghcut <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: bad problem line numbers") from None
            if n < 1 or m < 0:
                raise ParseError(f"line {ln}: invalid sizes n={n} m={m}")
        elif parts[0] == "e":
            if n < 0:
                raise ParseError(f"line {ln}: edge before problem line")
            if len(parts) != 4:
                raise ParseError(f"line {ln}: expected 'e <u> <v> <w>'")
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: bad edge numbers") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"line {ln}: edge endpoint out of range")
            if u == v:
                raise ParseError(f"line {ln}: self-loop not allowed")
            if not (1 <= w <= MAX_EDGE_WEIGHT):
                raise ParseError(f"line {ln}: edge weight out of range")
            edges.append((u - 1, v - 1, w))
        elif parts[0] == "t":
            if n < 0:
                raise ParseError(f"line {ln}: terminals before problem line")
            try:
                ts = [int(x) for x in parts[1:]]
            except ValueError:
                raise ParseError(f"line {ln}: bad terminal id") from None
            for t in ts:
                if not (1 <= t <= n):
                    raise ParseError(f"line {ln}: terminal out of range")
                terminals.add(t - 1)
        else:
            raise ParseError(f"line {ln}: unknown line type {parts[0]!r}")
    if n < 0:
        raise ParseError("missing problem line")
    if len(edges) != m:
        raise ParseError(f"problem line declares {m} edges, found {len(edges)}")
    try:
        g = Graph.from_edges(n, edges)
    except InvalidArgumentError as exc:
        raise ParseError(str(exc)) from None
    return g, sorted(terminals)


def graph_to_text(g: Graph, terminals: Iterable[int] | None = None) -> str:
    lines = [f"p ghcut {g.n} {g.m}"]
    for u, v, w in g.edge_list():
        lines.append(f"e {u + 1} {v + 1} {w}")
    if terminals is not None:
        ts = sorted(set(int(t) for t in terminals))
        if ts:
            lines.append("t " + " ".join(str(t + 1) for t in ts))
    return "\n".join(lines) + "\n"
