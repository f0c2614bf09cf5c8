"""Problem instances for the encoding corpus."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class GraphInstance:
    """A graph with directed edges, plus the extras some problems need.

    ``partition`` maps index pairs ``(i, j)`` to disjoint node sets covering
    ``nodes`` (Minmax Clique); ``k`` is the clique bound or pebble count.
    """

    nodes: tuple
    edges: frozenset = frozenset()
    partition: dict = field(default_factory=dict)
    k: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        declared = set(self.nodes)
        if len(declared) != len(self.nodes):
            raise ValueError("duplicate node")
        for a, b in self.edges:
            if a not in declared or b not in declared:
                raise ValueError(f"edge ({a}, {b}) references an undeclared node")

    def validate_partition(self) -> None:
        seen: set = set()
        for cell, members in self.partition.items():
            for node in members:
                if node in seen:
                    raise ValueError(f"partition cells overlap on {node}")
                if node not in self.nodes:
                    raise ValueError(f"partition cell {cell} holds undeclared node {node}")
                seen.add(node)
        if seen != set(self.nodes):
            raise ValueError("partition does not cover every node")

    @property
    def index_sets(self) -> tuple[list, list]:
        rows = sorted({i for i, _ in self.partition})
        cols = sorted({j for _, j in self.partition})
        return rows, cols

    def with_k(self, k: int) -> "GraphInstance":
        return GraphInstance(self.nodes, self.edges, dict(self.partition), k)


@dataclass(frozen=True)
class SetSystemInstance:
    """A universe ``U``, a collection of subsets of ``U``, and a bound ``k``."""

    universe: tuple
    collection: tuple
    k: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "collection", tuple(frozenset(s) for s in self.collection))
        members = set(self.universe)
        for s in self.collection:
            if not s <= members:
                raise ValueError(f"set {sorted(s)} is not a subset of the universe")

    def with_k(self, k: int) -> "SetSystemInstance":
        return SetSystemInstance(self.universe, self.collection, k)
