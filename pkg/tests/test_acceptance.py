"""Acceptance sweep: ten delivery criteria at their stated tolerances.

One test per criterion, in order; each prints a single
``[criterion NN] PASS`` line (visible with ``-s``) and enforces its stated
runtime budget.  Criteria 1-3 log recursion depths that criterion 4 audits,
so the file is meant to run as a whole; criterion 4 also builds a small
corpus of its own to stay meaningful standalone.

The exhaustive catalog starts at two vertices: single-vertex graphs admit
only the singleton terminal set, which has no pairs to check.
"""

import io
import json
import time
from fractions import Fraction

import numpy as np

from ghcut.approx import approx_config, approx_gh_tree
from ghcut.bench import bench_rows, fit_relative_residual, loglog_slope
from ghcut.cli import main
from ghcut.expander import (
    _boundary_per_vertex,
    _cluster_flow_feasible,
    certify_cluster_report,
    expander_decompose,
    trim_boundary_linked,
)
from ghcut.ghtree import gh_tree
from ghcut.graph import parse_graph_text
from ghcut.hitmiss import construct_family, verify_family
from ghcut.isolating import isolating_cuts
from ghcut.maxflow import max_flow
from ghcut.metrics import Metrics
from ghcut.oracles import _brute_best_side, classic_gomory_hu
from ghcut.params import shrink_depth_bound
from ghcut.steps import cut_threshold, detect_large_cc
from ghcut.tree import tree_to_text, verify_gh_tree

from util_graphs import (
    atlas_connected,
    random_connected,
    random_terminals,
    two_cliques_bridge,
)

# (kind, terminal count, observed depth, configured bound) from every build
DEPTH_LOG: list[tuple[str, int, int, int]] = []


def _pass(num: int, msg: str) -> None:
    print(f"[criterion {num:02d}] PASS: {msg}")


def _brute_table(g) -> dict[tuple[int, int], int]:
    """All-pairs connectivity by enumerating every cut side (n <= 16)."""
    n = g.n
    nm = 1 << (n - 1)
    masks = np.arange(nm, dtype=np.uint32)
    bits = np.zeros((nm, n), dtype=bool)
    for v in range(1, n):
        bits[:, v] = (masks >> (v - 1)) & 1
    w = np.zeros(nm, dtype=np.int64)
    for u, v, ww in g.edge_list():
        w += np.where(bits[:, u] ^ bits[:, v], ww, 0)
    table = {}
    for s in range(n):
        for t in range(s + 1, n):
            sep = bits[:, s] != bits[:, t]
            table[(s, t)] = int(w[sep].min())
    return table


def _built_and_verified_exact(g, u, table) -> None:
    m = Metrics()
    tree = gh_tree(g, u, metrics=m)
    rep = verify_gh_tree(
        g, u, tree, 0,
        connectivity_fn=lambda gg, s, t: table[(min(s, t), max(s, t))],
    )
    assert rep.ok, rep.failures
    k = len(set(u))
    DEPTH_LOG.append(("exact", k, m.max_depth, shrink_depth_bound(k)))


def test_criterion_01_exactness_small_exhaustive():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    builds = 0
    for g in atlas_connected(2, 7):
        table = _brute_table(g)
        for _ in range(3):
            k = int(rng.integers(2, g.n + 1))
            u = sorted(int(v) for v in rng.choice(g.n, size=k, replace=False))
            _built_and_verified_exact(g, u, table)
            builds += 1
    for n in range(8, 13):
        for i in range(500):
            g = random_connected(
                n, int(rng.integers(0, 3 * n)), wmax=1, seed=100000 + 1000 * n + i
            )
            table = _brute_table(g)
            for _ in range(3):
                k = int(rng.integers(2, n + 1))
                u = sorted(int(v) for v in rng.choice(n, size=k, replace=False))
                _built_and_verified_exact(g, u, table)
                builds += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 600, f"criterion 1 exceeded its 10 minute budget: {elapsed:.0f}s"
    _pass(1, f"{builds} builds verified against exhaustive cuts in {elapsed:.0f}s")


def test_criterion_02_exactness_medium():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    pair_checks = 0
    for i in range(50):
        if i < 35:
            n = int(rng.integers(20, 121))
        elif i < 45:
            n = int(rng.integers(121, 171))
        else:
            n = int(rng.integers(171, 201))
        extra = int(rng.integers(0, min(3 * n, 2000 - n + 1)))
        g = random_connected(n, extra, wmax=1, seed=200000 + i)
        assert g.m <= 2000
        k = min(n, int(rng.integers(8, 33)))
        u = random_terminals(n, k, seed=200500 + i)
        m = Metrics()
        mine = gh_tree(g, u, metrics=m)
        ref = classic_gomory_hu(g, u)
        pairs = [(u[a], u[b]) for a in range(len(u)) for b in range(a + 1, len(u))]
        if len(pairs) > 1000:
            idx = rng.choice(len(pairs), size=1000, replace=False)
            pairs = [pairs[int(j)] for j in sorted(idx)]
        for s, t in pairs:
            assert mine.path_min_edge(s, t)[0] == ref.path_min_edge(s, t)[0]
            pair_checks += 1
        DEPTH_LOG.append(("exact", k, m.max_depth, shrink_depth_bound(k)))
    elapsed = time.perf_counter() - t0
    assert elapsed < 600, f"criterion 2 exceeded its 10 minute budget: {elapsed:.0f}s"
    _pass(2, f"{pair_checks} pair values matched the classic recursion in {elapsed:.0f}s")


def test_criterion_03_approximation_sandwich():
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    tolerances = (Fraction(1, 10), Fraction(1, 2), Fraction(1))
    pair_checks = 0
    for i in range(50):
        n = int(rng.integers(8, 61))
        g = random_connected(
            n, int(rng.integers(n // 2, 2 * n)), wmax=100, seed=300000 + i
        )
        k = min(n, int(rng.integers(8, 25)))
        u = random_terminals(n, k, seed=300500 + i)
        lam = {}
        for a in range(len(u)):
            for b in range(a + 1, len(u)):
                lam[(u[a], u[b])] = max_flow(g, u[a], u[b]).value
        for eps in tolerances:
            m = Metrics()
            tree = approx_gh_tree(g, u, eps, metrics=m)
            for (s, t), lv in lam.items():
                reported = tree.path_min_edge(s, t)[0]
                assert lv <= reported, f"pair ({s},{t}) under-reported"
                assert Fraction(reported) <= (1 + eps) * lv, (
                    f"pair ({s},{t}) above (1+{eps}) * {lv}"
                )
                pair_checks += 1
            cap = approx_config(eps, len(u), g.total_weight()).depth_cap
            DEPTH_LOG.append(("approx", len(u), m.max_depth, cap))
    elapsed = time.perf_counter() - t0
    assert elapsed < 600, f"criterion 3 exceeded its 10 minute budget: {elapsed:.0f}s"
    _pass(3, f"{pair_checks} sandwiches held across eps in {{0.1, 0.5, 1.0}} in {elapsed:.0f}s")


def test_criterion_04_recursion_depth():
    # a dedicated sweep so the audit is meaningful even standalone
    rng = np.random.default_rng(104)
    for i in range(12):
        n = int(rng.integers(10, 81))
        g = random_connected(n, int(rng.integers(n // 2, 2 * n)), wmax=9, seed=400000 + i)
        k = min(n, int(rng.integers(2, 33)))
        u = random_terminals(n, k, seed=400500 + i)
        m = Metrics()
        gh_tree(g, u, metrics=m)
        DEPTH_LOG.append(("exact", k, m.max_depth, shrink_depth_bound(k)))
        if i % 3 == 0:
            eps = Fraction(1, 4)
            ma = Metrics()
            approx_gh_tree(g, u, eps, metrics=ma)
            cap = approx_config(eps, k, g.total_weight()).depth_cap
            DEPTH_LOG.append(("approx", k, ma.max_depth, cap))
    violations = [e for e in DEPTH_LOG if e[2] > e[3]]
    assert not violations, violations[:5]
    kinds = {e[0] for e in DEPTH_LOG}
    assert kinds == {"exact", "approx"}
    worst = {
        kind: max(e[2] for e in DEPTH_LOG if e[0] == kind) for kind in sorted(kinds)
    }
    _pass(4, f"{len(DEPTH_LOG)} builds within depth bounds; deepest per kind {worst}")


def test_criterion_05_reduction_tightness():
    t0 = time.perf_counter()
    sizes = (1000, 3000, 10000, 30000)
    summary = []
    for family in ("bridged-clique", "random-regular"):
        rows = bench_rows(family, sizes, seed=7)
        ms = [r.m for r in rows]
        ratios = [r.ratio for r in rows]
        residual = fit_relative_residual(ms, ratios, degree=3)
        slope = loglog_slope(ms, ratios)
        assert residual < 0.20, f"{family}: fit residual {residual:.3f}"
        assert slope < 0.15, f"{family}: log-log slope {slope:.3f}"
        summary.append(f"{family} slope {slope:+.3f} residual {residual:.1e}")
    elapsed = time.perf_counter() - t0
    assert elapsed < 1800, f"criterion 5 exceeded its 30 minute budget: {elapsed:.0f}s"
    _pass(5, "; ".join(summary) + f" in {elapsed:.0f}s")


def test_criterion_06_isolating_cuts_exact():
    t0 = time.perf_counter()
    rng = np.random.default_rng(106)
    checks = 0
    for i in range(300):
        n = int(rng.integers(4, 13))
        g = random_connected(n, int(rng.integers(0, 2 * n)), wmax=6, seed=600000 + i)
        ngroups = int(rng.integers(2, 5))
        perm = [int(v) for v in rng.permutation(n)]
        sizes = [1 + int(rng.integers(0, 2)) for _ in range(ngroups)]
        if sum(sizes) > n:
            sizes = [1] * ngroups
        groups, pos = [], 0
        for s in sizes:
            groups.append(sorted(perm[pos:pos + s]))
            pos += s
        res = isolating_cuts(g, groups)
        for gi, grp in enumerate(groups):
            rest = [v for gj, other in enumerate(groups) if gj != gi for v in other]
            bw, bside = _brute_best_side(g, grp, rest)
            assert res.weights[gi] == bw, (i, gi)
            assert res.sides[gi] == bside, (i, gi)
            checks += 1
    elapsed = time.perf_counter() - t0
    _pass(6, f"{checks} group cuts matched brute values and minimal sides in {elapsed:.0f}s")


def test_criterion_07_hit_and_miss():
    t0 = time.perf_counter()
    combos = 0
    for n in range(1, 65):
        for a in range(1, 5):
            for b in range(1, 3):
                if a < b:
                    continue
                assert verify_family(construct_family(n, a, b)), (n, a, b)
                combos += 1
    ratios = {}
    for exp in range(4, 17):
        n = 2 ** exp
        fam = construct_family(n, 2, 1)
        ratios[n] = fam.size / exp
    rng = np.random.default_rng(107)
    for n in sorted(int(v) for v in rng.integers(16, 65537, size=200)):
        fam = construct_family(n, 2, 1)
        ratios[n] = fam.size / np.log2(n)
    bound = 40
    worst = max(ratios.values())
    assert worst <= bound, f"|H|/log2(N) reached {worst:.1f}"
    elapsed = time.perf_counter() - t0
    _pass(
        7,
        f"{combos} exhaustive (N,a,b) combos; size ratio <= {worst:.1f} "
        f"over {len(ratios)} ground sizes in {elapsed:.0f}s",
    )


def test_criterion_08_expander_decomposition():
    t0 = time.perf_counter()
    rng = np.random.default_rng(108)
    instances = 0
    exhaustive = 0
    trims = 0
    while instances < 200:
        if instances % 5 < 3:
            n = int(rng.integers(4, 17))
            g = random_connected(n, int(rng.integers(0, 2 * n)), wmax=4,
                                 seed=800000 + instances)
        elif instances % 5 == 3:
            k = int(rng.integers(3, 9))
            g = two_cliques_bridge(k)
            n = g.n
        else:
            n = int(rng.integers(17, 301))
            g = random_connected(n, int(rng.integers(n // 4, 3 * n)), wmax=4,
                                 seed=800000 + instances)
        d = [1] * n if instances % 2 == 0 else [int(x) for x in g.weighted_degrees()]
        phi = Fraction(1, int(rng.integers(3, 9)))
        dec = expander_decompose(g, d, phi)
        assert dec.intercluster_weight <= dec.q_factor * phi * sum(d)
        for c in dec.clusters:
            rep = certify_cluster_report(g, list(c), d, phi)
            assert rep.ok, (instances, c)
            if rep.method == "exhaustive":
                exhaustive += 1
        if instances % 4 == 0:
            trimmed = trim_boundary_linked(g, dec, d, phi)
            b = _boundary_per_vertex(g, [sorted(c) for c in trimmed.clusters])
            dv = np.asarray(d)
            for c in trimmed.clusters:
                ok, _ = _cluster_flow_feasible(
                    g, sorted(c), b, dv, phi, trimmed.q_factor, None
                )
                assert ok, (instances, c)
            trims += 1
        instances += 1
    elapsed = time.perf_counter() - t0
    assert exhaustive > 0
    _pass(
        8,
        f"{instances} decompositions certified ({exhaustive} exhaustive clusters, "
        f"{trims} trim feasibility audits) in {elapsed:.0f}s",
    )


def test_criterion_09_threshold_census_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(109)
    checks = 0

    def census_from(lam_of):
        def below(r, tau, vertices):
            return frozenset(v for v in vertices if v != r and lam_of(r, v) < tau)
        return below

    for g in atlas_connected(2, 7):
        table = _brute_table(g)
        lam = lambda a, b: table[(min(a, b), max(a, b))]
        below = census_from(lam)
        top = max(table.values())
        everyone = list(range(g.n))
        for _ in range(2):
            r = int(rng.integers(0, g.n))
            tau = int(rng.integers(1, top + 3))
            assert cut_threshold(g, r, tau) == below(r, tau, everyone)
            classes = {}
            for v in everyone:
                cls = frozenset(
                    x for x in everyone if x == v or lam(v, x) >= tau
                )
                classes[cls] = None
            large = [c for c in classes if 4 * len(c) >= 3 * g.n]
            want = large[0] if large else frozenset()
            assert detect_large_cc(g, everyone, tau) == want
            checks += 1

    for i in range(200):
        n = int(rng.integers(10, 61))
        g = random_connected(n, int(rng.integers(n // 2, 2 * n)), wmax=7,
                             seed=900000 + i)
        r = int(rng.integers(0, n))
        lam_cache = {}

        def lam(a, b):
            key = (min(a, b), max(a, b))
            if key not in lam_cache:
                lam_cache[key] = max_flow(g, key[0], key[1]).value
            return lam_cache[key]

        top = max(lam(r, v) for v in range(n) if v != r)
        tau = int(rng.integers(1, top + 3))
        below = census_from(lam)
        assert cut_threshold(g, r, tau) == below(r, tau, range(n))
        u = random_terminals(n, min(n, 12), seed=900500 + i)
        classes = {}
        for v in u:
            classes[frozenset(x for x in u if x == v or lam(v, x) >= tau)] = None
        large = [c for c in classes if 4 * len(c) >= 3 * len(u)]
        want = large[0] if large else frozenset()
        assert detect_large_cc(g, u, tau) == want
        checks += 1
    elapsed = time.perf_counter() - t0
    _pass(9, f"{checks} (G, r, tau) instances matched the flow census in {elapsed:.0f}s")


def test_criterion_10_determinism():
    t0 = time.perf_counter()
    graph_text = (
        "p ghcut 8 12\n"
        "e 1 2 4\ne 2 3 1\ne 3 4 5\ne 4 1 2\ne 1 5 3\ne 5 6 2\n"
        "e 6 7 7\ne 7 8 1\ne 8 5 2\ne 2 6 1\ne 3 7 2\ne 4 8 6\n"
        "t 1 3 5 7 8\n"
    )

    def library_pass():
        g, terms = parse_graph_text(graph_text)
        exact = tree_to_text(gh_tree(g, terms))
        approx = tree_to_text(approx_gh_tree(g, terms, Fraction(1, 2)))
        return exact + approx

    assert library_pass() == library_pass()

    def cli_pass(tmp, argv):
        out, err = io.StringIO(), io.StringIO()
        code = main(argv, out, err)
        assert code == 0
        records = [json.loads(l) for l in err.getvalue().splitlines() if l.startswith("{")]
        for rec in records:
            rec.pop("wall_seconds")
        return out.getvalue(), records

    import tempfile, os
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "g.gr")
        with open(path, "w") as fh:
            fh.write(graph_text)
        for argv in (
            ["tree", path],
            ["approx", path, "--epsilon", "1/2"],
            ["ed", path, "--phi", "1/4"],
            ["bench", "--family", "bridged-clique", "--sizes", "500", "--no-timing"],
        ):
            assert cli_pass(tmp, argv) == cli_pass(tmp, argv), argv
    elapsed = time.perf_counter() - t0
    _pass(10, f"library and command outputs byte-identical across reruns in {elapsed:.0f}s")
