"""Cut-equivalent trees on undirected graphs via flows and expander routines.

Public surface: graph and tree types with their text formats, the exact and
approximate tree builders, expander decomposition, verification, and the
Metrics registry threaded through all of them.
"""

from .approx import ApproxConfig, approx_config, approx_gh_tree, lambda_u
from .bench import (
    DEFAULT_SIZES,
    FAMILIES,
    BenchRow,
    bench_rows,
    benchmark_instance,
    fit_relative_residual,
    format_table,
    loglog_slope,
)
from .errors import GHCutError, InternalError, InvalidArgumentError, ParseError
from .expander import (
    Decomposition,
    certify_cluster,
    expander_decompose,
    trim_boundary_linked,
)
from .ghtree import gh_tree
from .graph import Graph, graph_to_text, parse_graph_text
from .hitmiss import HitMissFamily, construct_family, verify_family
from .isolating import IsolatingCutsResult, isolating_cuts
from .maxflow import FlowResult, connectivity, max_flow, max_flow_multi
from .metrics import Metrics
from .steps import cut_threshold, detect_large_cc, find_tau_star
from .tree import (
    SteinerGHTree,
    VerifyReport,
    parse_tree_text,
    tree_to_text,
    verify_gh_tree,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxConfig",
    "BenchRow",
    "DEFAULT_SIZES",
    "Decomposition",
    "FAMILIES",
    "FlowResult",
    "GHCutError",
    "Graph",
    "InternalError",
    "InvalidArgumentError",
    "Metrics",
    "ParseError",
    "SteinerGHTree",
    "VerifyReport",
    "approx_config",
    "approx_gh_tree",
    "bench_rows",
    "benchmark_instance",
    "certify_cluster",
    "connectivity",
    "cut_threshold",
    "detect_large_cc",
    "expander_decompose",
    "find_tau_star",
    "fit_relative_residual",
    "format_table",
    "HitMissFamily",
    "IsolatingCutsResult",
    "construct_family",
    "gh_tree",
    "graph_to_text",
    "isolating_cuts",
    "verify_family",
    "lambda_u",
    "loglog_slope",
    "max_flow",
    "max_flow_multi",
    "parse_graph_text",
    "parse_tree_text",
    "tree_to_text",
    "verify_gh_tree",
]
