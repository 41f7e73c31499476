"""Simultaneous vertex-minimal minimum cuts isolating terminal groups.

Given disjoint groups, the procedure finds for each group the vertex-minimal
minimum cut separating it from the union of the others, using one
set-to-set flow per bit of the group index plus one local flow per group on
a graph whose exterior is contracted to a point.  Minimal sides "uncross"
with every bit cut, so each group's minimal cut survives inside its region
and local computation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InternalError, InvalidArgumentError
from .graph import Graph
from .maxflow import max_flow, max_flow_multi
from .metrics import Metrics


@dataclass(frozen=True)
class IsolatingCutsResult:
    """Per input group: its isolating cut side and the cut's weight."""

    sides: tuple[frozenset[int], ...]
    weights: tuple[int, ...]


def _validated_groups(g: Graph, groups: Sequence[Iterable[int]]) -> list[list[int]]:
    gs = [sorted(set(int(v) for v in grp)) for grp in groups]
    if len(gs) < 2:
        raise InvalidArgumentError("need at least two groups")
    seen: set[int] = set()
    for grp in gs:
        if not grp:
            raise InvalidArgumentError("groups must be nonempty")
        for v in grp:
            if not (0 <= v < g.n):
                raise InvalidArgumentError("group vertex out of range")
            if v in seen:
                raise InvalidArgumentError("groups overlap")
            seen.add(v)
    return gs


def _local_minimal_cut(
    g: Graph, region: set[int], group: list[int], metrics: Metrics | None
) -> tuple[frozenset[int], int]:
    """Minimal cut separating ``group`` from everything outside ``region``."""
    exterior = sorted(set(range(g.n)) - region)
    if not exterior:
        raise InternalError("isolating region covers the whole graph")
    g2, amap = g.contract([exterior])
    sink = amap[exterior[0]]
    srcs = sorted({amap[v] for v in group})
    if len(srcs) == 1:
        r = max_flow(g2, srcs[0], sink, metrics)
    else:
        r = max_flow_multi(g2, srcs, [sink], metrics)
    side = frozenset(v for v in region if amap[v] in r.source_side)
    return side, r.value


def isolating_cuts(
    g: Graph, groups: Sequence[Iterable[int]], metrics: Metrics | None = None
) -> IsolatingCutsResult:
    """Vertex-minimal minimum cut around each group, all computed together.

    Returns sides aligned with the input group order.  Sides are pairwise
    disjoint, each contains its group and excludes all others.
    """
    gs = _validated_groups(g, groups)
    h = len(gs)
    if metrics is not None:
        metrics.bump("isolating_calls")

    if h == 2 and len(gs[0]) == 1 and len(gs[1]) == 1:
        # two pair flows give both minimal sides directly
        a, b = gs[0][0], gs[1][0]
        ra = max_flow(g, a, b, metrics)
        rb = max_flow(g, b, a, metrics)
        sides = (ra.source_side, rb.source_side)
        weights = (ra.value, rb.value)
    elif h == 2:
        r = max_flow_multi(g, gs[1], gs[0], metrics)
        side1 = r.source_side
        side0, w0 = _local_minimal_cut(g, set(range(g.n)) - side1, gs[0], metrics)
        sides = (side0, side1)
        weights = (w0, r.value)
    else:
        bits = (h - 1).bit_length()
        bit_sides: list[frozenset[int]] = []
        for j in range(bits):
            srcs = sorted(v for i, grp in enumerate(gs) if (i >> j) & 1 for v in grp)
            snks = sorted(
                v for i, grp in enumerate(gs) if not (i >> j) & 1 for v in grp
            )
            bit_sides.append(max_flow_multi(g, srcs, snks, metrics).source_side)
        sides_l: list[frozenset[int]] = []
        weights_l: list[int] = []
        for i, grp in enumerate(gs):
            region = set(range(g.n))
            for j in range(bits):
                if (i >> j) & 1:
                    region &= bit_sides[j]
                else:
                    region -= bit_sides[j]
            side, w = _local_minimal_cut(g, region, grp, metrics)
            sides_l.append(side)
            weights_l.append(w)
        sides = tuple(sides_l)
        weights = tuple(weights_l)

    all_groups = {v for grp in gs for v in grp}
    taken: set[int] = set()
    for i, (side, grp) in enumerate(zip(sides, gs)):
        if not set(grp) <= side:
            raise InternalError("isolating side lost its own group")
        if (side & all_groups) - set(grp):
            raise InternalError("isolating side touches a foreign group")
        if side & taken:
            raise InternalError("isolating sides overlap")
        taken |= side
    return IsolatingCutsResult(tuple(sides), tuple(weights))
