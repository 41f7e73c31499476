"""Command-line front end: tree builds, decompositions, verification, benchmarks.

Commands operate on the text formats defined in :mod:`ghcut.graph` and
:mod:`ghcut.tree`.  Every run threads one explicit metrics registry through
the library and emits it as a line-delimited JSON record, so batch runs can
be compared field by field; the only nondeterministic field is wall time.

Exit codes: 0 success, 1 verification failure, 2 bad input (parse or
argument errors, reported with line numbers where available).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Callable, TextIO

from .approx import approx_gh_tree
from .bench import DEFAULT_SIZES, FAMILIES, bench_rows, format_table
from .errors import InvalidArgumentError, ParseError
from .expander import expander_decompose
from .ghtree import gh_tree
from .graph import Graph, parse_graph_text
from .metrics import Metrics
from .oracles import brute_force_mincut
from .params import as_fraction
from .tree import SteinerGHTree, parse_tree_text, tree_to_text, verify_gh_tree

# brute-force verification enumerates all 2^(n-1) sides per pair
_BRUTE_VERIFY_LIMIT = 18


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InvalidArgumentError(f"cannot read {path}: {e.strerror}") from None


def _parse_vertex_list(spec: str, n: int, what: str) -> list[int]:
    """Comma or space separated 1-based ids, returned 0-based and sorted."""
    try:
        vals = [int(tok) for tok in spec.replace(",", " ").split()]
    except ValueError:
        raise InvalidArgumentError(f"{what} must be a list of integers") from None
    if not vals:
        raise InvalidArgumentError(f"{what} list is empty")
    out = sorted(set(v - 1 for v in vals))
    if out[0] < 0 or out[-1] >= n:
        raise InvalidArgumentError(f"{what} ids must lie in 1..{n}")
    return out


def _resolve_terminals(g: Graph, file_terminals: list[int], flag: str | None) -> list[int]:
    if flag is not None:
        return _parse_vertex_list(flag, g.n, "terminal")
    if file_terminals:
        return list(file_terminals)
    return list(range(g.n))


def _metrics_record(
    command: str,
    g: Graph,
    metrics: Metrics,
    wall: float,
    **extra_fields,
) -> str:
    rec = dict(metrics.as_dict())
    rec["record"] = "ghcut-metrics"
    rec["command"] = command
    rec["n"] = g.n
    rec["m"] = g.m
    rec["maxflow_instance_vertices"] = (
        metrics.maxflow_instance_size - metrics.maxflow_instance_edges
    )
    rec["expander_instance_vertices"] = (
        metrics.expander_instance_size - metrics.expander_instance_edges
    )
    rec["edges_to_m_ratio"] = (
        round(metrics.total_instance_edges / g.m, 6) if g.m > 0 else 0.0
    )
    rec["wall_seconds"] = round(wall, 6)
    rec.update(extra_fields)
    return json.dumps(rec, sort_keys=True)


def _emit_document(text: str, output: str | None, out: TextIO) -> None:
    if output is None or output == "-":
        out.write(text)
    else:
        Path(output).write_text(text)


def _emit_record(record: str, args, out: TextIO, err: TextIO) -> None:
    # the record goes wherever the tree text does not, unless a path is given
    if args.metrics_out:
        with open(args.metrics_out, "a") as fh:
            fh.write(record + "\n")
    elif args.output and args.output != "-":
        out.write(record + "\n")
    else:
        err.write(record + "\n")


def _brute_connectivity(g: Graph, s: int, t: int) -> int:
    return brute_force_mincut(g, s, t)[0]


def _check_tree(
    g: Graph,
    terminals: list[int],
    tree: SteinerGHTree,
    eps,
    mode: str,
    vmetrics: Metrics,
) -> list[str]:
    if mode == "off":
        return []
    if mode == "brute":
        if g.n > _BRUTE_VERIFY_LIMIT:
            raise InvalidArgumentError(
                f"brute verification is limited to {_BRUTE_VERIFY_LIMIT} vertices"
            )
        report = verify_gh_tree(
            g, terminals, tree, eps, connectivity_fn=_brute_connectivity
        )
    else:
        report = verify_gh_tree(g, terminals, tree, eps, metrics=vmetrics)
    vmetrics.bump("verify_pairs", report.pairs_checked)
    vmetrics.bump("verify_edges", report.edges_checked)
    return list(report.failures)


def _build_forest(
    g: Graph,
    terminals: list[int],
    builder: Callable[[Graph, list[int], Metrics], SteinerGHTree],
    metrics: Metrics,
) -> list[tuple[list[int], Graph | None, list[int], SteinerGHTree | None]]:
    """One (component, subgraph, local terminals, tree) entry per component.

    Terminal-free components carry no tree; a connected input yields a single
    entry whose subgraph is the input itself.
    """
    comps = g.components()
    if len(comps) == 1:
        return [(comps[0], g, terminals, builder(g, terminals, metrics))]
    term_set = set(terminals)
    blocks = []
    for comp in comps:
        local = [i for i, v in enumerate(comp) if v in term_set]
        if not local:
            blocks.append((comp, None, [], None))
            continue
        sub, _ = g.induced(comp)
        blocks.append((comp, sub, local, builder(sub, local, metrics)))
    return blocks


def _forest_text(blocks) -> str:
    """Single tree document, or a marked multi-block forest when disconnected.

    Cross-component connectivity is 0 by definition; rather than faking it
    with 0-weight tree edges, each component gets its own standalone block in
    local 1-based numbering, with the original ids recorded in a comment.
    """
    if len(blocks) == 1:
        return tree_to_text(blocks[0][3])
    parts = [
        f"c disconnected input: {len(blocks)} components; "
        "cross-component connectivity is 0"
    ]
    for i, (comp, sub, _, tree) in enumerate(blocks, start=1):
        ids = " ".join(str(v + 1) for v in comp)
        if tree is None:
            parts.append(f"c component {i}: vertices {ids} (no terminals, skipped)")
            continue
        parts.append(f"c component {i}: vertices {ids} renumbered 1..{sub.n}")
        parts.append(tree_to_text(tree).rstrip("\n"))
    return "\n".join(parts) + "\n"


def _run_tree_command(args, out: TextIO, err: TextIO, eps, builder, command: str) -> int:
    g, file_terms = parse_graph_text(_read_text(args.input))
    terminals = _resolve_terminals(g, file_terms, args.terminals)
    metrics = Metrics()
    vmetrics = Metrics()
    t0 = time.perf_counter()
    blocks = _build_forest(g, terminals, builder, metrics)
    failures: list[str] = []
    for comp, sub, local, tree in blocks:
        if tree is None:
            continue
        for f in _check_tree(sub, local, tree, eps, args.verify, vmetrics):
            where = "" if len(blocks) == 1 else f"component {comp[0] + 1}: "
            failures.append(where + f)
    wall = time.perf_counter() - t0
    _emit_document(_forest_text(blocks), args.output, out)
    record = _metrics_record(
        command,
        g,
        metrics,
        wall,
        components=len(blocks),
        terminals=len(terminals),
        verify_maxflow_calls=vmetrics.maxflow_calls,
        verify_pairs=vmetrics.extra.get("verify_pairs", 0),
        verify_edges=vmetrics.extra.get("verify_edges", 0),
        **({"epsilon": str(eps)} if command == "approx" else {}),
    )
    _emit_record(record, args, out, err)
    if failures:
        for f in failures:
            err.write(f"verification failed: {f}\n")
        return 1
    return 0


def _cmd_tree(args, out: TextIO, err: TextIO) -> int:
    return _run_tree_command(
        args, out, err, 0, lambda g, u, m: gh_tree(g, u, metrics=m), "tree"
    )


def _cmd_approx(args, out: TextIO, err: TextIO) -> int:
    eps = as_fraction(args.epsilon)
    return _run_tree_command(
        args,
        out,
        err,
        eps,
        lambda g, u, m: approx_gh_tree(g, u, eps, metrics=m),
        "approx",
    )


def _cmd_ed(args, out: TextIO, err: TextIO) -> int:
    g, _ = parse_graph_text(_read_text(args.input))
    if args.demand == "uniform":
        demand = [1] * g.n
    elif args.demand == "degree":
        demand = [int(x) for x in g.weighted_degrees()]
    else:
        try:
            demand = [int(tok) for tok in args.demand.replace(",", " ").split()]
        except ValueError:
            raise InvalidArgumentError(
                "demand must be 'uniform', 'degree', or a per-vertex integer list"
            ) from None
        if len(demand) != g.n:
            raise InvalidArgumentError(
                f"demand list has {len(demand)} entries for {g.n} vertices"
            )
    phi = as_fraction(args.phi)
    metrics = Metrics()
    t0 = time.perf_counter()
    dec = expander_decompose(g, demand, phi, metrics=metrics)
    wall = time.perf_counter() - t0
    lines = [f"clusters {len(dec.clusters)}"]
    for i, cluster in enumerate(sorted(dec.clusters, key=min), start=1):
        ids = " ".join(str(v + 1) for v in sorted(cluster))
        lines.append(f"cluster {i}: {ids}")
    lines.append(f"intercluster {dec.intercluster_weight}")
    _emit_document("\n".join(lines) + "\n", args.output, out)
    record = _metrics_record(
        "ed",
        g,
        metrics,
        wall,
        clusters=len(dec.clusters),
        intercluster_weight=dec.intercluster_weight,
        phi=str(phi),
    )
    _emit_record(record, args, out, err)
    return 0


def _cmd_verify(args, out: TextIO, err: TextIO) -> int:
    g, _ = parse_graph_text(_read_text(args.graph))
    tree = parse_tree_text(_read_text(args.tree))
    eps = as_fraction(args.epsilon)
    report = verify_gh_tree(g, tree.nodes, tree, eps)
    if report.ok:
        out.write(
            f"ok: {report.pairs_checked} pairs and "
            f"{report.edges_checked} edges checked\n"
        )
        return 0
    for f in report.failures:
        err.write(f"verification failed: {f}\n")
    return 1


def _cmd_bench(args, out: TextIO, err: TextIO) -> int:
    try:
        sizes = [int(tok) for tok in args.sizes.replace(",", " ").split()]
    except ValueError:
        raise InvalidArgumentError("sizes must be a comma-separated integer list") from None
    if not sizes:
        raise InvalidArgumentError("sizes list is empty")
    rows = bench_rows(args.family, sizes, args.seed)
    out.write(format_table(rows, timing=not args.no_timing) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ghcut",
        description="cut-equivalent trees, expander decompositions, and their verification",
    )
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="N",
        help="upper bound on worker parallelism; output order is fixed regardless",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_tree_args(sp):
        sp.add_argument("input", help="graph file in the 'p ghcut' text format")
        sp.add_argument("-o", "--output", help="tree file destination ('-' for stdout)")
        sp.add_argument(
            "--terminals",
            help="comma-separated 1-based terminal ids (default: file 't' lines, else all)",
        )
        sp.add_argument(
            "--verify",
            choices=("oracle", "brute", "off"),
            default="oracle",
            help="check the result with flow queries, exhaustive cuts, or not at all",
        )
        sp.add_argument(
            "--metrics-out",
            metavar="PATH",
            help="append the metrics record to PATH instead of a standard stream",
        )

    sp = sub.add_parser("tree", help="exact cut-equivalent tree on the terminals")
    add_tree_args(sp)
    sp.set_defaults(func=_cmd_tree)

    sp = sub.add_parser("approx", help="(1+eps)-approximate cut-equivalent tree")
    add_tree_args(sp)
    sp.add_argument("--epsilon", required=True, help="tolerance in (0, 1], e.g. 0.1")
    sp.set_defaults(func=_cmd_approx)

    sp = sub.add_parser("ed", help="expander decomposition of the input graph")
    sp.add_argument("input", help="graph file in the 'p ghcut' text format")
    sp.add_argument("-o", "--output", help="cluster listing destination ('-' for stdout)")
    sp.add_argument("--phi", required=True, help="conductance target in (0, 1]")
    sp.add_argument(
        "--demand",
        default="uniform",
        help="'uniform', 'degree', or a comma-separated per-vertex list",
    )
    sp.add_argument("--metrics-out", metavar="PATH", help="append the metrics record to PATH")
    sp.set_defaults(func=_cmd_ed)

    sp = sub.add_parser("verify", help="check a tree file against a graph file")
    sp.add_argument("graph")
    sp.add_argument("tree")
    sp.add_argument("--epsilon", default=0, help="tolerance the tree claims (default 0)")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("bench", help="deterministic scaling benchmark")
    sp.add_argument("--family", choices=FAMILIES, default="bridged-clique")
    sp.add_argument(
        "--sizes",
        default=",".join(str(s) for s in DEFAULT_SIZES),
        help="comma-separated edge-entry counts",
    )
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument(
        "--no-timing",
        action="store_true",
        help="omit the seconds column for byte-stable output",
    )
    sp.set_defaults(func=_cmd_bench)
    return p


def main(argv=None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    if args.threads < 1:
        err.write("error: --threads must be at least 1\n")
        return 2
    try:
        return args.func(args, out, err)
    except ParseError as e:
        err.write(f"error: {e}\n")
        return 2
    except InvalidArgumentError as e:
        err.write(f"error: {e}\n")
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
