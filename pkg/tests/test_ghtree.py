import numpy as np
import pytest

from ghcut.errors import InternalError, InvalidArgumentError
from ghcut.ghtree import combine_type_i, combine_type_ii, gh_tree
from ghcut.graph import Graph
from ghcut.metrics import Metrics
from ghcut.oracles import brute_force_mincut, classic_gomory_hu
from ghcut.params import shrink_depth_bound
from ghcut.tree import SteinerGHTree, verify_gh_tree

from util_graphs import (
    atlas_connected,
    clique,
    path_graph,
    random_connected,
    random_terminals,
    two_triangles_bridge,
)


def brute_conn(g, a, b):
    return brute_force_mincut(g, a, b)[0]


# -------------------------------------------------------------- whole trees


def test_unit_path():
    g = path_graph([1, 1])
    t = gh_tree(g, [0, 1, 2])
    assert t.path_min_edge(0, 1)[0] == 1
    assert t.path_min_edge(1, 2)[0] == 1
    assert t.path_min_edge(0, 2)[0] == 1
    assert verify_gh_tree(g, [0, 1, 2], t, 0).ok


def test_weighted_path():
    g = path_graph([3, 7])
    t = gh_tree(g, [0, 1, 2])
    assert t.path_min_edge(0, 1)[0] == 3
    assert t.path_min_edge(1, 2)[0] == 7
    assert t.path_min_edge(0, 2)[0] == 3
    assert verify_gh_tree(g, [0, 1, 2], t, 0).ok


def test_clique_all_pairs_three():
    g = clique(4)
    t = gh_tree(g, range(4))
    for i in range(4):
        for j in range(i + 1, 4):
            assert t.path_min_edge(i, j)[0] == 3
    assert verify_gh_tree(g, range(4), t, 0).ok


def test_bridged_triangles_values():
    g = two_triangles_bridge()
    t = gh_tree(g, range(6))
    for i in range(6):
        for j in range(i + 1, 6):
            want = 2 if (i < 3) == (j < 3) else 1
            assert t.path_min_edge(i, j)[0] == want
    assert verify_gh_tree(g, range(6), t, 0).ok


def test_terminal_subset():
    g = two_triangles_bridge()
    t = gh_tree(g, [0, 4])
    assert t.nodes == (0, 4)
    assert t.edges == ((0, 4, 1),)
    assert t.preimage({0}) == frozenset({0, 1, 2})


def test_single_terminal():
    g = two_triangles_bridge()
    t = gh_tree(g, [3])
    assert t.nodes == (3,)
    assert t.edges == ()
    assert t.assign == (3,) * 6


def test_core_contraction_branch():
    # clique class holds 6 of 8 terminals: below 15/16, above 3/4, so the
    # recursion must go through the core-contraction branch at the root
    edges = [(a, b, 1) for a in range(6) for b in range(a + 1, 6)]
    edges += [(0, 6, 1), (1, 7, 1)]
    g = Graph.from_edges(8, edges)
    t = gh_tree(g, range(8))
    assert verify_gh_tree(g, range(8), t, 0).ok
    assert t.path_min_edge(0, 1)[0] == 5
    assert t.path_min_edge(6, 7)[0] == 1


def test_rejects_bad_input():
    g = clique(3)
    with pytest.raises(InvalidArgumentError):
        gh_tree(g, [])
    with pytest.raises(InvalidArgumentError):
        gh_tree(g, [0, 7])
    disc = Graph.from_edges(4, [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(InvalidArgumentError):
        gh_tree(disc, [0, 2])


def test_atlas_exhaustive_small():
    checked = 0
    for g in atlas_connected(2, 6):
        n = g.n
        subsets = [tuple(range(n))]
        if n >= 3:
            subsets.append(tuple(range(0, n, 2)))
            subsets.append((0, n - 1))
        for u in subsets:
            m = Metrics()
            t = gh_tree(g, u, m)
            rep = verify_gh_tree(g, u, t, 0, connectivity_fn=brute_conn)
            assert rep.ok, (g.edge_list(), u, rep.failures)
            assert m.max_depth <= shrink_depth_bound(len(u))
            checked += 1
    assert checked > 400


def test_random_weighted_exact():
    for seed in range(30):
        rng = np.random.default_rng(seed + 5000)
        n = int(rng.integers(4, 14))
        g = random_connected(n, int(rng.integers(0, n)), wmax=8, seed=seed + 5000)
        u = random_terminals(n, int(rng.integers(2, n + 1)), seed=seed)
        m = Metrics()
        t = gh_tree(g, u, m)
        rep = verify_gh_tree(g, u, t, 0)
        assert rep.ok, (seed, rep.failures)
        assert m.max_depth <= shrink_depth_bound(len(u))


def test_matches_classic_construction_values():
    for seed in range(10):
        g = random_connected(9, 9, wmax=5, seed=seed + 42)
        t = gh_tree(g, range(9))
        ref = classic_gomory_hu(g, range(9))
        for i in range(9):
            for j in range(i + 1, 9):
                assert t.path_min_edge(i, j)[0] == ref.path_min_edge(i, j)[0]


def test_deterministic():
    def build():
        g = random_connected(10, 8, wmax=5, seed=9)
        return gh_tree(g, range(10))

    assert build() == build()


# ----------------------------------------------------------------- combine


def _tree(nodes, edges, assign):
    return SteinerGHTree(tuple(nodes), tuple(edges), tuple(assign))


def test_combine_i_zero_subtrees_identity():
    t = _tree([0, 1], [(0, 1, 2)], [0, 1])
    assert combine_type_i(t, [], 5) is t


def test_combine_i_single_node_graft():
    t_large = _tree([0], [], [0, 0])
    t_v = _tree([1], [], [1, 1])
    out = combine_type_i(t_large, [(t_v, 1, 0, frozenset({1}))], 5)
    assert out.nodes == (0, 1)
    assert out.edges == ((0, 1, 5),)
    assert out.assign == (0, 1)


def test_combine_i_two_subtrees_structure():
    t_large = _tree([0, 1], [(0, 1, 4)], [0, 1, 0, 1])
    s2 = _tree([2], [], [2] * 4)
    s3 = _tree([3], [], [3] * 4)
    out = combine_type_i(
        t_large,
        [(s2, 2, 0, frozenset({2})), (s3, 3, 1, frozenset({3}))],
        7,
        weights=[7, 9],
    )
    assert out.nodes == (0, 1, 2, 3)
    assert set(out.edges) == {(0, 1, 4), (0, 2, 7), (1, 3, 9)}
    assert out.assign == (0, 1, 2, 3)


def test_combine_i_node_collision():
    t_large = _tree([0], [], [0, 0])
    dup = _tree([0], [], [0, 0])
    with pytest.raises(InternalError):
        combine_type_i(t_large, [(dup, 0, 0, frozenset({1}))], 1)


def test_combine_ii_single_branch():
    t_small = _tree([1, 2], [(1, 2, 4)], [2, 1, 2])
    t_large = _tree([0], [], [0, 0, 0])
    out = combine_type_ii(t_large, t_small, 2, {1: 0})
    assert out.nodes == (0, 1)
    assert out.edges == ((0, 1, 4),)
    assert out.assign == (0, 1, 0)


def test_combine_ii_two_branches():
    # removed node 9 bridges two leaves onto a 2-node main tree
    t_small = _tree([3, 4, 9], [(3, 9, 2), (4, 9, 5)], [9, 9, 3, 4, 9])
    t_large = _tree([0, 1], [(0, 1, 6)], [0, 1, 0, 1, 1])
    out = combine_type_ii(t_large, t_small, 9, {3: 0, 4: 1})
    assert out.nodes == (0, 1, 3, 4)
    assert set(out.edges) == {(0, 1, 6), (0, 3, 2), (1, 4, 5)}
    assert out.assign == (0, 1, 3, 4, 1)


def test_combine_ii_missing_node():
    t_small = _tree([1, 2], [(1, 2, 4)], [2, 1, 2])
    t_large = _tree([0], [], [0, 0, 0])
    with pytest.raises(InvalidArgumentError):
        combine_type_ii(t_large, t_small, 7, {})
    with pytest.raises(InvalidArgumentError):
        combine_type_ii(t_large, t_small, 2, {})
