"""Shared deterministic graph generators for the test suite."""

from __future__ import annotations

import numpy as np

from ghcut.graph import Graph


def random_connected(n: int, extra_edges: int, wmax: int = 1, seed: int = 0) -> Graph:
    """Random connected graph: spanning tree plus extra edges, fixed seed."""
    rng = np.random.default_rng(seed)
    edges = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append((u, v, int(rng.integers(1, wmax + 1))))
    added = 0
    while added < extra_edges:
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        if a == b:
            continue
        edges.append((min(a, b), max(a, b), int(rng.integers(1, wmax + 1))))
        added += 1
    return Graph.from_edges(n, edges)


def random_terminals(n: int, k: int, seed: int = 0) -> list[int]:
    rng = np.random.default_rng(seed)
    k = min(k, n)
    return sorted(int(v) for v in rng.choice(n, size=k, replace=False))


_ATLAS_CACHE: dict[tuple[int, int], list[Graph]] = {}


def atlas_connected(min_n: int = 2, max_n: int = 7) -> list[Graph]:
    """All connected simple unweighted graphs with min_n..max_n vertices."""
    key = (min_n, max_n)
    if key not in _ATLAS_CACHE:
        import networkx as nx

        out = []
        for G in nx.graph_atlas_g():
            nn = G.number_of_nodes()
            if min_n <= nn <= max_n and nn >= 1 and nx.is_connected(G):
                out.append(
                    Graph.from_edges(nn, [(u, v, 1) for u, v in sorted(G.edges())])
                )
        _ATLAS_CACHE[key] = out
    return _ATLAS_CACHE[key]


def clique(n: int, w: int = 1) -> Graph:
    return Graph.from_edges(
        n, [(a, b, w) for a in range(n) for b in range(a + 1, n)]
    )


def path_graph(weights: list[int]) -> Graph:
    return Graph.from_edges(
        len(weights) + 1, [(i, i + 1, w) for i, w in enumerate(weights)]
    )


def two_triangles_bridge() -> Graph:
    """Triangles {0,1,2} and {3,4,5} joined by the unit edge (2, 3)."""
    return Graph.from_edges(
        6,
        [(0, 1, 1), (0, 2, 1), (1, 2, 1), (3, 4, 1), (3, 5, 1), (4, 5, 1), (2, 3, 1)],
    )


def two_cliques_bridge(k: int, w_bridge: int = 1) -> Graph:
    """Two k-cliques joined by one edge between vertices 0 and k."""
    edges = [(a, b, 1) for a in range(k) for b in range(a + 1, k)]
    edges += [(a + k, b + k, 1) for a in range(k) for b in range(a + 1, k)]
    edges.append((0, k, w_bridge))
    return Graph.from_edges(2 * k, edges)


def star_graph(leaves: int) -> Graph:
    """Vertex 0 is the center."""
    return Graph.from_edges(leaves + 1, [(0, i, 1) for i in range(1, leaves + 1)])
