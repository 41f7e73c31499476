"""Cut-equivalent trees over a terminal set, their validation and text format.

A tree here is a weighted tree whose nodes are the terminals, together with an
assignment of every graph vertex to one terminal.  The defining property: for
any two terminals ``s, t``, the smallest edge weight on the tree path between
them reports their connectivity in the graph, and the preimage (under the
assignment) of either side of that edge is a cut achieving exactly the edge's
weight.  The approximate variant relaxes the reported value to at most
``(1 + eps)`` times the true connectivity while keeping the cut-weight
equality per edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .errors import InvalidArgumentError, ParseError
from .graph import Graph
from .maxflow import max_flow
from .metrics import Metrics
from .params import as_fraction


@dataclass(frozen=True)
class SteinerGHTree:
    """Cut-equivalent tree on a terminal subset.

    nodes: sorted terminal vertex ids.
    edges: tree edges ``(a, b, w)`` between terminal ids, ``a < b``.
    assign: for every graph vertex, the terminal it maps to.
    """

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    assign: tuple[int, ...]

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for a, b, w in self.edges:
            adj[a].append((b, w))
            adj[b].append((a, w))
        for v in adj:
            adj[v].sort()
        return adj

    def path_min_edge(self, s: int, t: int) -> tuple[int, tuple[int, int]]:
        """Smallest weight on the s..t tree path and the first edge achieving it.

        The reporting edge is the one closest to ``s`` among minimum-weight
        path edges, which makes the choice deterministic under ties.
        """
        if s == t:
            raise InvalidArgumentError("tree query endpoints must differ")
        adj = self.adjacency()
        parent: dict[int, tuple[int, int]] = {s: (s, 0)}
        q = deque([s])
        while q:
            u = q.popleft()
            if u == t:
                break
            for v, w in adj[u]:
                if v not in parent:
                    parent[v] = (u, w)
                    q.append(v)
        if t not in parent:
            raise InvalidArgumentError("endpoints not connected in tree")
        path: list[tuple[int, int, int]] = []
        cur = t
        while cur != s:
            p, w = parent[cur]
            path.append((p, cur, w))
            cur = p
        path.reverse()
        best = min(p[2] for p in path)
        for a, b, w in path:
            if w == best:
                return best, (min(a, b), max(a, b))
        raise AssertionError("unreachable")

    def side_of_edge(self, a: int, b: int) -> frozenset[int]:
        """Terminal nodes on the ``a`` side after removing tree edge (a, b)."""
        adj = self.adjacency()
        seen = {a}
        q = deque([a])
        while q:
            u = q.popleft()
            for v, _ in adj[u]:
                if u == a and v == b:
                    continue
                if v not in seen:
                    seen.add(v)
                    q.append(v)
        return frozenset(seen)

    def preimage(self, side: Iterable[int]) -> frozenset[int]:
        """Graph vertices assigned to any terminal in ``side``."""
        s = set(side)
        return frozenset(v for v, t in enumerate(self.assign) if t in s)


def _edge_split_sides(tree: SteinerGHTree) -> dict[tuple[int, int], frozenset[int]]:
    """For every tree edge (a, b), the node set on the ``a`` side.

    Computed in one pass by rooting the tree at the smallest node.
    """
    if not tree.edges:
        return {}
    adj = tree.adjacency()
    root = tree.nodes[0]
    order: list[int] = []
    parent: dict[int, int] = {root: root}
    q = deque([root])
    while q:
        u = q.popleft()
        order.append(u)
        for v, _ in adj[u]:
            if v not in parent:
                parent[v] = u
                q.append(v)
    subtree: dict[int, set[int]] = {v: {v} for v in tree.nodes}
    for u in reversed(order):
        if parent[u] != u:
            subtree[parent[u]] |= subtree[u]
    out: dict[tuple[int, int], frozenset[int]] = {}
    all_nodes = frozenset(tree.nodes)
    for a, b, _ in tree.edges:
        child = a if parent[a] == b else b
        child_side = frozenset(subtree[child])
        if child == a:
            out[(a, b)] = child_side
        else:
            out[(a, b)] = all_nodes - child_side
    return out


@dataclass
class VerifyReport:
    ok: bool
    pairs_checked: int
    edges_checked: int
    failures: list[str] = field(default_factory=list)


def verify_gh_tree(
    g: Graph,
    terminals: Iterable[int],
    tree: SteinerGHTree,
    eps=0,
    *,
    connectivity_fn: Callable[[Graph, int, int], int] | None = None,
    max_pairs: int = 1000,
    seed: int = 7,
    metrics: Metrics | None = None,
) -> VerifyReport:
    """Check a tree against the graph it claims to represent.

    Validates structure, then the per-edge cut-weight equality, then the
    value sandwich ``conn <= reported <= (1 + eps) * conn`` over terminal
    pairs (all pairs, or a seeded sample when there are more than
    ``max_pairs``).  ``connectivity_fn`` defaults to max flow; tests may pass
    a brute-force alternative.
    """
    eps_f = as_fraction(eps)
    if eps_f < 0:
        raise InvalidArgumentError("tolerance must be nonnegative")
    fails: list[str] = []
    u_sorted = tuple(sorted(set(int(t) for t in terminals)))
    if tree.nodes != u_sorted:
        fails.append(f"tree nodes {tree.nodes} do not match terminals {u_sorted}")
        return VerifyReport(False, 0, 0, fails)
    k = len(tree.nodes)
    if len(tree.edges) != k - 1:
        fails.append(f"expected {k - 1} tree edges, found {len(tree.edges)}")
        return VerifyReport(False, 0, 0, fails)
    if len(tree.assign) != g.n:
        fails.append("assignment length does not match vertex count")
        return VerifyReport(False, 0, 0, fails)
    node_set = set(tree.nodes)
    for v, t in enumerate(tree.assign):
        if t not in node_set:
            fails.append(f"vertex {v} assigned to non-node {t}")
            return VerifyReport(False, 0, 0, fails)
    for t in tree.nodes:
        if tree.assign[t] != t:
            fails.append(f"terminal {t} not assigned to itself")
    for a, b, w in tree.edges:
        if not (a in node_set and b in node_set and a < b):
            fails.append(f"bad tree edge ({a}, {b})")
            return VerifyReport(False, 0, 0, fails)
        if w < 1:
            fails.append(f"tree edge ({a}, {b}) has non-positive weight {w}")
    # connectivity of the tree itself
    if k >= 1:
        adj = tree.adjacency()
        seen = {tree.nodes[0]}
        q = deque([tree.nodes[0]])
        while q:
            u = q.popleft()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    q.append(v)
        if len(seen) != k:
            fails.append("tree edges do not form a connected tree")
            return VerifyReport(False, 0, 0, fails)
    if fails:
        return VerifyReport(False, 0, 0, fails)

    # per-edge cut-weight equality
    sides = _edge_split_sides(tree)
    edges_checked = 0
    for a, b, w in tree.edges:
        pre = tree.preimage(sides[(a, b)])
        cw = g.cut_weight(pre)
        edges_checked += 1
        if cw != w:
            fails.append(
                f"edge ({a}, {b}) weight {w} but assigned-side cut weighs {cw}"
            )

    # pair value sandwich
    conn = connectivity_fn or (lambda gg, s, t: max_flow(gg, s, t, metrics).value)
    pairs = [
        (tree.nodes[i], tree.nodes[j])
        for i in range(k)
        for j in range(i + 1, k)
    ]
    if len(pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(pairs), size=max_pairs, replace=False)
        pairs = [pairs[int(i)] for i in sorted(idx)]
    for s, t in pairs:
        reported, _ = tree.path_min_edge(s, t)
        lam = conn(g, s, t)
        if not (lam <= reported and Fraction(reported) <= (1 + eps_f) * lam):
            fails.append(
                f"pair ({s}, {t}): reported {reported}, connectivity {lam}, "
                f"tolerance {float(eps_f):g}"
            )
    return VerifyReport(not fails, len(pairs), edges_checked, fails)


# -- text format -----------------------------------------------------------
#
#   p ghtree <n> <k>
#   n <id>              terminal node, 1-based, k lines
#   e <a> <b> <w>       tree edge, k-1 lines
#   f <v> <t>           vertex v assigned to terminal t, n lines


def tree_to_text(tree: SteinerGHTree) -> str:
    lines = [f"p ghtree {len(tree.assign)} {len(tree.nodes)}"]
    for v in tree.nodes:
        lines.append(f"n {v + 1}")
    for a, b, w in sorted(tree.edges):
        lines.append(f"e {a + 1} {b + 1} {w}")
    for v, t in enumerate(tree.assign):
        lines.append(f"f {v + 1} {t + 1}")
    return "\n".join(lines) + "\n"


def parse_tree_text(text: str) -> SteinerGHTree:
    n = -1
    k = -1
    nodes: list[int] = []
    edges: list[tuple[int, int, int]] = []
    assign: dict[int, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if n >= 0:
                    raise ParseError(f"line {ln}: duplicate problem line")
                if len(parts) != 4 or parts[1] != "ghtree":
                    raise ParseError(f"line {ln}: expected 'p ghtree <n> <k>'")
                n, k = int(parts[2]), int(parts[3])
            elif parts[0] == "n":
                nodes.append(int(parts[1]) - 1)
            elif parts[0] == "e":
                a, b, w = int(parts[1]) - 1, int(parts[2]) - 1, int(parts[3])
                edges.append((min(a, b), max(a, b), w))
            elif parts[0] == "f":
                v, t = int(parts[1]) - 1, int(parts[2]) - 1
                if v in assign:
                    raise ParseError(f"line {ln}: duplicate assignment for {v + 1}")
                assign[v] = t
            else:
                raise ParseError(f"line {ln}: unknown line type {parts[0]!r}")
        except (ValueError, IndexError):
            raise ParseError(f"line {ln}: malformed line") from None
    if n < 0:
        raise ParseError("missing problem line")
    if len(nodes) != k:
        raise ParseError(f"expected {k} node lines, found {len(nodes)}")
    if len(assign) != n:
        raise ParseError(f"expected {n} assignment lines, found {len(assign)}")
    if sorted(assign) != list(range(n)):
        raise ParseError("assignments must cover vertices exactly once")
    return SteinerGHTree(
        nodes=tuple(sorted(nodes)),
        edges=tuple(sorted(edges)),
        assign=tuple(assign[v] for v in range(n)),
    )
