"""Tests for demand-respecting expander decomposition."""

from fractions import Fraction

import numpy as np
import pytest

from ghcut.errors import InvalidArgumentError
from ghcut.expander import (
    certify_cluster,
    certify_cluster_report,
    expander_decompose,
    indicator_demand,
    reduce_demand_to_standard,
    trim_boundary_linked,
)
from ghcut.graph import Graph
from ghcut.metrics import Metrics

from util_graphs import (
    clique,
    path_graph,
    random_connected,
    two_cliques_bridge,
    two_triangles_bridge,
)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n, 1) for i in range(n)])


def is_partition(g, clusters):
    seen = sorted(v for c in clusters for v in c)
    return seen == list(range(g.n))


class TestReduction:
    def test_triangle_all_ones(self):
        g = clique(3)
        lg, phi2 = reduce_demand_to_standard(g, [1, 1, 1], Fraction(1, 10))
        assert lg.loops.tolist() == [1, 1, 1]
        assert phi2 == Fraction(1, 10)

    def test_degree_demand_doubles_phi(self):
        # d = weighted degrees makes D = 2W, so loops are ceil(deg / 2)
        g = path_graph([1, 1, 1])
        degs = g.weighted_degrees().tolist()
        lg, phi2 = reduce_demand_to_standard(g, degs, Fraction(1, 4))
        assert lg.loops.tolist() == [(x + 1) // 2 for x in degs]
        assert phi2 == Fraction(1, 2)

    def test_single_demand_vertex(self):
        g = path_graph([1, 1, 1])
        lg, phi2 = reduce_demand_to_standard(g, [0, 1, 0, 0], Fraction(1, 2))
        assert lg.loops.tolist() == [0, g.total_weight(), 0, 0]
        assert phi2 == Fraction(1, 2) / g.total_weight()
        assert lg.total_volume() == lg.volumes().sum()

    def test_rejects(self):
        g = clique(3)
        with pytest.raises(InvalidArgumentError):
            reduce_demand_to_standard(g, [0, 0, 0], Fraction(1, 2))
        with pytest.raises(InvalidArgumentError):
            reduce_demand_to_standard(g, [1, -1, 1], Fraction(1, 2))
        with pytest.raises(InvalidArgumentError):
            reduce_demand_to_standard(g, [1, 1], Fraction(1, 2))


class TestDecompose:
    def test_triangle_single_cluster(self):
        g = clique(3)
        dec = expander_decompose(g, [1, 1, 1], Fraction(1, 10))
        assert dec.clusters == ((0, 1, 2),)
        assert dec.intercluster_weight == 0

    def test_bridged_cliques_split_at_bridge(self):
        g = two_cliques_bridge(5)
        dec = expander_decompose(g, [1] * 10, Fraction(3, 10))
        assert dec.clusters == ((0, 1, 2, 3, 4), (5, 6, 7, 8, 9))
        assert dec.intercluster_weight == 1

    def test_demand_placement_moves_cut(self):
        g = path_graph([1, 1, 1])
        dec = expander_decompose(g, [1, 0, 0, 1], 1)
        assert dec.clusters == ((0, 1), (2, 3))
        assert dec.intercluster_weight == 1

    def test_zero_demand_side_is_absorbed(self):
        # demand only on one triangle: the other side merges into it
        edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1),
                 (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)]
        g = Graph.from_edges(6, edges)
        dec = expander_decompose(g, [1, 1, 1, 0, 0, 0], Fraction(1, 2))
        assert dec.clusters == ((0, 1, 2, 3, 4, 5),)
        assert dec.intercluster_weight == 0

    def test_edgeless_graph_gives_singletons(self):
        g = Graph.from_edges(4, [])
        dec = expander_decompose(g, [1, 1, 1, 1], Fraction(1, 2))
        assert dec.clusters == ((0,), (1,), (2,), (3,))

    def test_rejects(self):
        g = clique(3)
        with pytest.raises(InvalidArgumentError):
            expander_decompose(g, [1, 1, 1], 0)
        with pytest.raises(InvalidArgumentError):
            expander_decompose(g, [1, 1, 1], Fraction(3, 2))
        with pytest.raises(InvalidArgumentError):
            expander_decompose(g, [0, 0, 0], Fraction(1, 2))

    def test_deterministic(self):
        g = cycle(40)
        d = [1] * 40
        a = expander_decompose(g, d, Fraction(1, 4))
        b = expander_decompose(g, d, Fraction(1, 4))
        assert a == b

    def test_every_cluster_certifies(self):
        for seed in range(8):
            g = random_connected(30, 25, wmax=4, seed=seed)
            d = indicator_demand(g, range(0, g.n, 2))
            dec = expander_decompose(g, d, Fraction(1, 5))
            assert is_partition(g, dec.clusters)
            for c in dec.clusters:
                assert certify_cluster(g, c, d, Fraction(1, 5)), c

    def test_intercluster_bound(self):
        for seed in range(6):
            g = random_connected(40, 50, wmax=3, seed=100 + seed)
            d = [1] * g.n
            dec = expander_decompose(g, d, Fraction(1, 6))
            bound = dec.q_factor * Fraction(1, 6) * sum(d)
            assert dec.intercluster_weight <= bound

    def test_metrics_recorded(self):
        m = Metrics()
        g = two_cliques_bridge(5)
        expander_decompose(g, [1] * 10, Fraction(3, 10), metrics=m)
        stats = m.as_dict()
        assert stats["extra"]["expander_decompose_calls"] == 1
        assert m.expander_calls >= 1


class TestCertify:
    def test_path_is_expander_for_small_phi(self):
        g = path_graph([1, 1])
        rep = certify_cluster_report(g, [0, 1, 2], [1, 1, 1], Fraction(3, 5))
        assert rep.ok and rep.exact and rep.method == "exhaustive"

    def test_exhaustive_refutation_with_witness(self):
        g = two_cliques_bridge(5)
        rep = certify_cluster_report(g, range(10), [1] * 10, Fraction(3, 10))
        assert not rep.ok and rep.exact
        assert rep.witness == (0, 1, 2, 3, 4)

    def test_flow_certificate_on_large_cycle(self):
        g = cycle(40)
        rep = certify_cluster_report(g, range(40), [1] * 40, Fraction(1, 20))
        assert rep.ok and rep.exact and rep.method == "flow"

    def test_large_cycle_refuted_by_witness(self):
        g = cycle(40)
        rep = certify_cluster_report(g, range(40), [1] * 40, Fraction(1, 4))
        assert not rep.ok and rep.exact
        assert rep.witness is not None
        side = np.asarray(sorted(rep.witness))
        d = np.ones(40, dtype=np.int64)
        mv = min(int(d[side].sum()), 40 - int(d[side].sum()))
        assert g.cut_weight(side.tolist()) * 4 < mv

    def test_singleton_and_vacuous(self):
        g = clique(4)
        assert certify_cluster(g, [2], [1] * 4, Fraction(1, 2))
        assert certify_cluster(g, [0, 1], [1, 0, 1, 1], Fraction(1, 2))

    def test_subcluster_uses_induced_edges_only(self):
        # the bridge endpoints alone form a fine cluster of the whole graph,
        # but their induced graph is a single edge judged on its own
        g = two_triangles_bridge()
        assert certify_cluster(g, [2, 3], [1] * 6, 1)
        assert not certify_cluster(g, [1, 4], [1] * 6, Fraction(1, 2))


class TestTrim:
    def test_already_feasible_is_unchanged(self):
        g = two_cliques_bridge(5)
        d = [1] * 10
        dec = expander_decompose(g, d, Fraction(3, 10))
        out = trim_boundary_linked(g, dec, d, Fraction(3, 10))
        assert out.clusters == dec.clusters
        assert out.intercluster_weight == dec.intercluster_weight

    def test_idempotent_on_cycle(self):
        g = cycle(40)
        d = [1] * 40
        dec = expander_decompose(g, d, Fraction(1, 4))
        once = trim_boundary_linked(g, dec, d, Fraction(1, 4))
        twice = trim_boundary_linked(g, once, d, Fraction(1, 4))
        assert is_partition(g, once.clusters)
        assert once.clusters == twice.clusters

    def test_random_graphs_stay_partitions(self):
        for seed in range(5):
            g = random_connected(25, 30, wmax=3, seed=400 + seed)
            d = [1] * g.n
            dec = expander_decompose(g, d, Fraction(1, 5))
            out = trim_boundary_linked(g, dec, d, Fraction(1, 5))
            assert is_partition(g, out.clusters)
            assert out.demand_total == g.n

    def test_rejects_non_partition(self):
        g = clique(3)
        dec = expander_decompose(g, [1, 1, 1], Fraction(1, 2))
        bad = dec.__class__(
            clusters=((0, 1),),
            phi=dec.phi,
            q_factor=dec.q_factor,
            intercluster_weight=0,
            demand_total=3,
        )
        with pytest.raises(InvalidArgumentError):
            trim_boundary_linked(g, bad, [1, 1, 1], Fraction(1, 2))
