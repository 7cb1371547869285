"""Directed flow networks with integral capacities and a max-flow solver."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable

from .errors import SchemaError


@dataclass(frozen=True)
class FlowNetwork:
    """A directed graph with integral edge capacities, a source, and a sink."""

    nodes: tuple[Hashable, ...]
    edges: tuple[tuple[Hashable, Hashable, int], ...]
    source: Hashable
    sink: Hashable

    def __post_init__(self):
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise SchemaError("flow network lists a node twice")
        if self.source == self.sink:
            raise SchemaError("source and sink must differ")
        if self.source not in node_set or self.sink not in node_set:
            raise SchemaError("source and sink must be nodes")
        for u, v, cap in self.edges:
            if u not in node_set or v not in node_set:
                raise SchemaError("edge endpoint is not a node")
            if v == self.source:
                raise SchemaError("no edge may enter the source")
            if u == self.sink:
                raise SchemaError("no edge may leave the sink")
            if not isinstance(cap, int) or cap < 0:
                raise SchemaError("capacities must be non-negative integers")


def max_flow_assignment(
    network: FlowNetwork,
) -> tuple[int, dict[tuple[Hashable, Hashable], int]]:
    """Maximum flow value plus per-edge flow, found with shortest augmenting
    paths (breadth-first, ties broken by edge creation order)."""
    residual: dict[tuple[Hashable, Hashable], int] = {}
    adjacency: dict[Hashable, list[Hashable]] = {u: [] for u in network.nodes}
    capacity: dict[tuple[Hashable, Hashable], int] = {}
    for u, v, cap in network.edges:
        capacity[(u, v)] = capacity.get((u, v), 0) + cap
        if v not in adjacency[u]:
            adjacency[u].append(v)
        if u not in adjacency[v]:
            adjacency[v].append(u)
        residual[(u, v)] = residual.get((u, v), 0) + cap
        residual.setdefault((v, u), 0)

    total = 0
    while True:
        parent: dict[Hashable, Hashable] = {network.source: network.source}
        queue = deque([network.source])
        while queue and network.sink not in parent:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in parent and residual.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if network.sink not in parent:
            break
        path = []
        node = network.sink
        while node != network.source:
            path.append((parent[node], node))
            node = parent[node]
        bottleneck = min(residual[(u, v)] for u, v in path)
        for u, v in path:
            residual[(u, v)] -= bottleneck
            residual[(v, u)] += bottleneck
        total += bottleneck

    flows = {
        (u, v): cap - residual[(u, v)]
        for (u, v), cap in capacity.items()
        if cap - residual[(u, v)] > 0
    }
    return total, flows


def max_flow(network: FlowNetwork) -> int:
    """Exact integral maximum flow value."""
    return max_flow_assignment(network)[0]
