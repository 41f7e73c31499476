"""Exact cut-equivalent tree construction by recursive decomposition.

``gh_tree`` builds a tree over a terminal set such that the minimum edge on
any terminal-to-terminal tree path reports the pair's connectivity exactly,
and the assignment preimage of either side of that edge is a cut of exactly
the edge's weight.  Each recursion level finds the largest threshold whose
connectivity class keeps at least three quarters of the terminals, then
either splits off maximal branch cuts (when the class covers almost all
terminals) or contracts the class core and solves the small remainder first.
Subinstances live on contracted graphs; their trees are translated back into
parent labels and stitched together by the two combine routines.

Recursion invariants checked at runtime: every child call drops the terminal
count by at least a 1/16 fraction (1/8 for the main child of a branch-cut
split), and the depth never exceeds the bound implied by that shrink rate.
"""

from __future__ import annotations

from .errors import InternalError, InvalidArgumentError
from .graph import Graph
from .metrics import Metrics
from .params import shrink_depth_bound
from .steps import decomp, find_tau_star
from .tree import SteinerGHTree


def _singleton_tree(g: Graph, t: int) -> SteinerGHTree:
    return SteinerGHTree((t,), (), (t,) * g.n)


def _lift(
    child: SteinerGHTree, new_of_old, label_of: dict[int, int], n: int
) -> SteinerGHTree:
    """Translate a subcall's tree into parent vertex labels.

    ``new_of_old`` maps parent vertices to subcall vertices and ``label_of``
    maps every subcall node to its parent label.  The lifted assignment is
    total: vertices inside a contracted block inherit the block vertex's
    assignment.
    """
    nodes = tuple(sorted(label_of[v] for v in child.nodes))
    edges = []
    for a, b, w in child.edges:
        la, lb = label_of[a], label_of[b]
        edges.append((min(la, lb), max(la, lb), w))
    assign = tuple(label_of[child.assign[new_of_old[x]]] for x in range(n))
    return SteinerGHTree(nodes, tuple(sorted(edges)), assign)


def combine_type_i(
    t_large: SteinerGHTree,
    subtrees,
    tau: int,
    weights=None,
) -> SteinerGHTree:
    """Graft side subtrees onto the main tree, one bridging edge per side.

    ``subtrees`` holds tuples ``(t_v, x_v, y_v, side)`` in a shared vertex
    space: ``x_v`` is the node of ``t_v`` standing in for everything outside
    ``side``, ``y_v`` the node of ``t_large`` standing in for ``side``, and
    ``side`` the vertices whose assignment follows ``t_v``.  Bridging edges
    weigh ``tau`` unless ``weights`` overrides them per subtree.  With no
    subtrees the main tree passes through unchanged.
    """
    subtrees = list(subtrees)
    if weights is not None and len(weights) != len(subtrees):
        raise InvalidArgumentError("need exactly one weight per subtree")
    if not subtrees:
        return t_large
    n = len(t_large.assign)
    nodes = set(t_large.nodes)
    edges = list(t_large.edges)
    assign = list(t_large.assign)
    for i, (t_v, x_v, y_v, side) in enumerate(subtrees):
        if len(t_v.assign) != n:
            raise InvalidArgumentError("subtree assignment length mismatch")
        if x_v not in t_v.nodes:
            raise InvalidArgumentError("bridge endpoint missing from its subtree")
        if y_v not in t_large.nodes:
            raise InvalidArgumentError("bridge anchor missing from the main tree")
        if nodes & set(t_v.nodes):
            raise InternalError("node collision while combining trees")
        nodes |= set(t_v.nodes)
        edges.extend(t_v.edges)
        w = tau if weights is None else weights[i]
        edges.append((min(x_v, y_v), max(x_v, y_v), int(w)))
        for x in side:
            assign[x] = t_v.assign[x]
    return SteinerGHTree(tuple(sorted(nodes)), tuple(sorted(edges)), tuple(assign))


def combine_type_ii(
    t_large: SteinerGHTree,
    t_small: SteinerGHTree,
    c: int,
    anchors: dict[int, int],
) -> SteinerGHTree:
    """Splice the small tree into the main tree at the removed node ``c``.

    ``anchors`` maps each neighbor of ``c`` in the small tree to the main
    tree node absorbing that branch; the original edge weights carry over.
    Vertices assigned to ``c`` follow the main tree, all others keep their
    small-tree node.
    """
    if c not in t_small.nodes:
        raise InvalidArgumentError("removal node missing from the small tree")
    if len(t_small.assign) != len(t_large.assign):
        raise InvalidArgumentError("assignment length mismatch")
    neighbors = {a if b == c else b for a, b, _ in t_small.edges if c in (a, b)}
    if set(anchors) != neighbors:
        raise InvalidArgumentError("anchors must cover exactly the removed node's neighbors")
    small_nodes = set(t_small.nodes) - {c}
    if small_nodes & set(t_large.nodes):
        raise InternalError("node collision while combining trees")
    edges = list(t_large.edges)
    for a, b, w in t_small.edges:
        if c in (a, b):
            v = b if a == c else a
            y = anchors[v]
            if y not in t_large.nodes:
                raise InvalidArgumentError("bridge anchor missing from the main tree")
            edges.append((min(v, y), max(v, y), w))
        else:
            edges.append((a, b, w))
    assign = tuple(
        t_large.assign[x] if t_small.assign[x] == c else t_small.assign[x]
        for x in range(len(t_large.assign))
    )
    nodes = tuple(sorted(small_nodes | set(t_large.nodes)))
    return SteinerGHTree(nodes, tuple(sorted(edges)), assign)


def gh_tree(g: Graph, u, metrics: Metrics | None = None) -> SteinerGHTree:
    """Cut-equivalent tree over terminals ``u`` of a connected graph.

    Exact for arbitrary positive integer weights: every tree edge weight is
    the connectivity of the terminal pairs it separates, and its assignment
    preimage is a minimum cut of exactly that weight.
    """
    uu = tuple(sorted(set(int(t) for t in u)))
    if not uu:
        raise InvalidArgumentError("terminal set must be nonempty")
    if uu[0] < 0 or uu[-1] >= g.n:
        raise InvalidArgumentError("terminal set contains an out-of-range vertex")
    if not g.is_connected():
        raise InvalidArgumentError("tree construction needs a connected graph")
    return _build(g, uu, metrics, 1, shrink_depth_bound(len(uu)))


def _build(
    g: Graph, u: tuple[int, ...], metrics: Metrics | None, depth: int, bound: int
) -> SteinerGHTree:
    if metrics is not None:
        metrics.record_node(depth)
    if depth > bound:
        raise InternalError("recursion exceeded its depth bound")
    if depth > 1 and not g.is_connected():
        raise InternalError("contracted instance lost connectivity")
    if len(u) == 1:
        return _singleton_tree(g, u[0])
    tau, c_star = find_tau_star(g, u, metrics)
    cu = tuple(sorted(set(u) & c_star))

    def rec(g2, u2, d):
        return _build(g2, u2, metrics, d, bound)

    if 16 * len(cu) >= 15 * len(u):
        return _split_by_cuts(g, u, cu, tau, metrics, depth, rec)
    return _split_by_core(g, u, cu, c_star, metrics, depth, rec)


def _child_tree(g, u_imgs, terminals, new_of_old, rec, depth):
    """Recurse on a contracted instance and lift the result to parent labels."""
    child = rec(g, u_imgs, depth)
    label_of = {new_of_old[t]: t for t in terminals}
    return _lift(child, new_of_old, label_of, len(new_of_old))


def _split_by_cuts(g, u, cu, tau, metrics, depth, rec, collection=None):
    """Branch on disjoint minimum cuts inside the dominant class.

    ``collection`` overrides the cut family (same-weight branch cuts by
    default); overriding callers attach each subtree at its own cut weight.
    """
    r = min(cu)
    own_weights = collection is not None
    sides = collection if own_weights else decomp(g, cu, r, tau, u=u, metrics=metrics)
    if not sides:
        raise InternalError("branch decomposition returned no cuts")
    uset = set(u)
    covered: set[int] = set()
    for cut in sides:
        su = cut.side & uset
        if not own_weights and (not su or 16 * len(su) > 15 * len(u)):
            raise InternalError("branch cut keeps a bad terminal share")
        covered |= su

    u_large = tuple(t for t in u if t not in covered)
    if own_weights:
        if len(u_large) >= len(u):
            raise InternalError("threshold cuts made no terminal progress")
    elif 8 * len(u_large) > 7 * len(u):
        raise InternalError("main child kept more than 7/8 of the terminals")
    g_large, map_l = g.contract([sorted(cut.side) for cut in sides])
    t_large = _child_tree(
        g_large,
        tuple(sorted(map_l[t] for t in u_large)),
        u_large,
        map_l,
        rec,
        depth + 1,
    )

    subtrees = []
    weights = []
    all_v = range(g.n)
    for cut in sides:
        side_terms = sorted(cut.side & uset)
        if not side_terms:
            continue
        g_v, map_v = g.contract([sorted(set(all_v) - cut.side)])
        t_v = _child_tree(
            g_v,
            tuple(sorted(map_v[t] for t in side_terms)),
            side_terms,
            map_v,
            rec,
            depth + 1,
        )
        x_v = t_v.assign[r]
        y_v = t_large.assign[min(cut.side)]
        subtrees.append((t_v, x_v, y_v, cut.side))
        weights.append(cut.weight)
    return combine_type_i(t_large, subtrees, tau, weights if own_weights else None)


def _split_by_core(g, u, cu, c_star, metrics, depth, rec):
    """Contract the dominant class, solve the remainder, splice the core back."""
    core = sorted(c_star)
    c_label = core[0]
    gs, map_s = g.contract([core])
    outside = [t for t in u if t not in c_star]
    u_small_imgs = tuple(sorted({map_s[t] for t in outside} | {map_s[c_label]}))
    if 16 * len(u_small_imgs) > 15 * len(u):
        raise InternalError("small child kept more than 15/16 of the terminals")
    label_of = {map_s[t]: t for t in outside}
    label_of[map_s[c_label]] = c_label
    t_small = _lift(rec(gs, u_small_imgs, depth + 1), map_s, label_of, g.n)

    adj = t_small.adjacency()
    children = sorted(v for v, _ in adj[c_label])
    blocks = []
    for v in children:
        branch = t_small.side_of_edge(v, c_label)
        blocks.append(sorted(x for x in range(g.n) if t_small.assign[x] in branch))
    g_large, map_l = g.contract(blocks)
    t_large = _child_tree(
        g_large,
        tuple(sorted(map_l[t] for t in cu)),
        cu,
        map_l,
        rec,
        depth + 1,
    )
    anchors = {v: t_large.assign[block[0]] for v, block in zip(children, blocks)}
    return combine_type_ii(t_large, t_small, c_label, anchors)
