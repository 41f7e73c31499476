"""Deterministic benchmark families and reduction-size scaling studies.

Each family fixes a small base multigraph and reaches a requested edge-entry
count by replicating base edges as parallel entries, so a size sweep varies m
while holding the combinatorial structure (and the terminal set) fixed.  The
quantity under study is the ratio of total flow/decomposition instance edges
to m, which should stay flat as m grows; ``fit_relative_residual`` and
``loglog_slope`` quantify that on a finished sweep.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .ghtree import gh_tree
from .graph import Graph
from .metrics import Metrics

FAMILIES = ("bridged-clique", "random-regular", "expander", "tree")

DEFAULT_SIZES = (1000, 3000, 10000, 30000)

# terminals per benchmark instance; small enough that desk-scale sweeps
# finish quickly, large enough to exercise the recursion
_TERMINAL_COUNT = 16

TABLE_COLUMNS = (
    "family",
    "n",
    "m",
    "terminals",
    "maxflow_calls",
    "expander_calls",
    "instance_edges",
    "ratio",
    "max_depth",
    "seconds",
)


@dataclass(frozen=True)
class BenchRow:
    family: str
    n: int
    m: int
    terminals: int
    maxflow_calls: int
    expander_calls: int
    instance_edges: int
    ratio: float
    max_depth: int
    seconds: float


def _clique_chain_base() -> tuple[int, list[tuple[int, int, int]]]:
    """Five 14-cliques in a chain joined by single bridge edges."""
    cliques, size = 5, 14
    edges = []
    for c in range(cliques):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j, 1))
        if c + 1 < cliques:
            edges.append((base + size - 1, base + size, 1))
    return cliques * size, edges


def _matching_edges(rng: np.random.Generator, n: int) -> list[tuple[int, int, int]]:
    perm = rng.permutation(n)
    return [(int(perm[2 * i]), int(perm[2 * i + 1]), 1) for i in range(n // 2)]


def _random_regular_base(rng: np.random.Generator) -> tuple[int, list[tuple[int, int, int]]]:
    """Cycle plus 12 random perfect matchings: a 14-regular multigraph."""
    n = 60
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    for _ in range(12):
        edges.extend(_matching_edges(rng, n))
    return n, edges


def _expander_base(rng: np.random.Generator) -> tuple[int, list[tuple[int, int, int]]]:
    """Cycle plus two random matchings: sparse with no small sparse cuts."""
    n = 200
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    for _ in range(2):
        edges.extend(_matching_edges(rng, n))
    return n, edges


def _tree_base(rng: np.random.Generator) -> tuple[int, list[tuple[int, int, int]]]:
    """Random recursive tree: every non-root attaches to an earlier vertex."""
    n = 400
    edges = [(int(rng.integers(0, v)), v, 1) for v in range(1, n)]
    return n, edges


def _base_instance(
    family: str, seed: int
) -> tuple[int, list[tuple[int, int, int]], tuple[int, ...]]:
    if family not in FAMILIES:
        raise InvalidArgumentError(
            f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}"
        )
    rng = np.random.default_rng([seed, FAMILIES.index(family)])
    if family == "bridged-clique":
        n, edges = _clique_chain_base()
    elif family == "random-regular":
        n, edges = _random_regular_base(rng)
    elif family == "expander":
        n, edges = _expander_base(rng)
    else:
        n, edges = _tree_base(rng)
    k = min(n, _TERMINAL_COUNT)
    terminals = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
    return n, edges, terminals


def benchmark_instance(
    family: str, m: int, seed: int
) -> tuple[Graph, tuple[int, ...]]:
    """Build the family's base graph scaled to exactly ``m`` edge entries.

    Each base edge is replicated ``m // m0`` times, with the remainder spread
    over the first ``m % m0`` edges, so the multigraph keeps the base shape
    while its entry count (and total weight) grows linearly.
    """
    n, base, terminals = _base_instance(family, seed)
    m0 = len(base)
    if m < m0:
        raise InvalidArgumentError(
            f"family {family!r} needs at least {m0} edge entries, got {m}"
        )
    mult, rem = divmod(m, m0)
    entries: list[tuple[int, int, int]] = []
    for i, e in enumerate(base):
        entries.extend([e] * (mult + (1 if i < rem else 0)))
    return Graph.from_edges(n, entries), terminals


def bench_rows(family: str, sizes, seed: int) -> list[BenchRow]:
    """Run the exact tree build at each size and collect scaling counters."""
    rows = []
    for m in sizes:
        g, terminals = benchmark_instance(family, int(m), seed)
        metrics = Metrics()
        t0 = time.perf_counter()
        gh_tree(g, terminals, metrics=metrics)
        dt = time.perf_counter() - t0
        edges = metrics.total_instance_edges
        rows.append(
            BenchRow(
                family=family,
                n=g.n,
                m=g.m,
                terminals=len(terminals),
                maxflow_calls=metrics.maxflow_calls,
                expander_calls=metrics.expander_calls,
                instance_edges=edges,
                ratio=edges / g.m,
                max_depth=metrics.max_depth,
                seconds=dt,
            )
        )
    return rows


def format_table(rows: list[BenchRow], timing: bool = True) -> str:
    """Fixed-column text table; drop the timing column for byte comparisons."""
    cols = TABLE_COLUMNS if timing else TABLE_COLUMNS[:-1]

    def cell(row: BenchRow, name: str) -> str:
        val = getattr(row, name)
        if name == "ratio":
            return f"{val:.4f}"
        if name == "seconds":
            return f"{val:.3f}"
        return str(val)

    table = [list(cols)] + [[cell(r, c) for c in cols] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    out = []
    for line in table:
        out.append("  ".join(s.rjust(w) for s, w in zip(line, widths)))
    return "\n".join(out)


def fit_relative_residual(ms, ratios, degree: int = 3) -> float:
    """Largest relative miss of a low-degree polynomial in log m.

    A small value certifies the ratio is explained by a polylog curve rather
    than a polynomial in m itself.
    """
    if degree < 0 or degree > 6:
        raise InvalidArgumentError("fit degree must lie in 0..6")
    x = np.log(np.asarray(ms, dtype=float))
    y = np.asarray(ratios, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise InvalidArgumentError("need at least two (m, ratio) samples")
    if np.any(y <= 0) or np.any(x <= 0):
        raise InvalidArgumentError("sizes and ratios must be positive")
    deg = min(degree, len(x) - 1)
    poly = np.polynomial.Polynomial.fit(x, y, deg)
    fit = poly(x)
    return float(np.max(np.abs(fit - y) / y))


def loglog_slope(ms, ratios) -> float:
    """Least-squares slope of log(ratio) against log(m).

    Near zero for a flat or polylog ratio; a clearly positive value would
    mean the reduction's total instance size grows superlinearly in m.
    """
    x = np.log(np.asarray(ms, dtype=float))
    y = np.asarray(ratios, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise InvalidArgumentError("need at least two (m, ratio) samples")
    if np.any(y <= 0):
        raise InvalidArgumentError("ratios must be positive")
    line = np.polynomial.Polynomial.fit(x, np.log(y), 1).convert()
    return float(line.coef[1]) if len(line.coef) > 1 else 0.0
