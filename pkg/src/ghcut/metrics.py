"""Instrumentation counters for flow and decomposition work.

A ``Metrics`` object is threaded explicitly through the solver entry points;
when ``None`` is passed everywhere the accounting costs nothing.  Counters
track *instance sizes* (vertices + edges of each subproblem handed to a flow
or decomposition routine), which is the quantity the near-linear-work claims
are stated in, plus plain invocation counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Metrics:
    maxflow_calls: int = 0
    maxflow_instance_size: int = 0
    maxflow_instance_edges: int = 0
    expander_calls: int = 0
    expander_instance_size: int = 0
    expander_instance_edges: int = 0
    recursion_nodes: int = 0
    max_depth: int = 0
    extra: dict[str, int] = field(default_factory=dict)

    def record_maxflow(self, n: int, m: int) -> None:
        self.maxflow_calls += 1
        self.maxflow_instance_size += n + m
        self.maxflow_instance_edges += m

    def record_expander(self, n: int, m: int) -> None:
        self.expander_calls += 1
        self.expander_instance_size += n + m
        self.expander_instance_edges += m

    def record_node(self, depth: int) -> None:
        self.recursion_nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth

    def bump(self, key: str, amount: int = 1) -> None:
        self.extra[key] = self.extra.get(key, 0) + amount

    @property
    def total_instance_size(self) -> int:
        return self.maxflow_instance_size + self.expander_instance_size

    @property
    def total_instance_edges(self) -> int:
        return self.maxflow_instance_edges + self.expander_instance_edges

    def as_dict(self) -> dict:
        d = {
            "maxflow_calls": self.maxflow_calls,
            "maxflow_instance_size": self.maxflow_instance_size,
            "maxflow_instance_edges": self.maxflow_instance_edges,
            "expander_calls": self.expander_calls,
            "expander_instance_size": self.expander_instance_size,
            "expander_instance_edges": self.expander_instance_edges,
            "recursion_nodes": self.recursion_nodes,
            "max_depth": self.max_depth,
            "total_instance_size": self.total_instance_size,
            "total_instance_edges": self.total_instance_edges,
        }
        if self.extra:
            d["extra"] = dict(sorted(self.extra.items()))
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)
