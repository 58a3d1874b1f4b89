# 2026-10-19 | v0.3.0 | Multi-hypergraph used for query structure and NAE structure
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

import networkx as nx


def vertex_key(v):
    return (type(v).__name__, v)


@dataclass(frozen=True)
class Hypergraph:
    """
    Multi-hypergraph: a vertex set and a multiset of hyperedges. Singleton
    and repeated edges are allowed.
    """

    vertices: tuple
    edges: tuple[frozenset, ...]

    def __post_init__(self):
        known = set(self.vertices)
        for edge in self.edges:
            if not edge <= known:
                raise ValueError(f"edge {sorted(edge, key=vertex_key)} is not within the vertex set")

    @classmethod
    def of(cls, edges: Iterable[Iterable[Hashable]], vertices: Iterable[Hashable] = ()) -> "Hypergraph":
        edges = tuple(frozenset(e) for e in edges)
        pool = set(vertices)
        for e in edges:
            pool |= e
        return cls(tuple(sorted(pool, key=vertex_key)), edges)

    def __len__(self) -> int:
        return len(self.vertices)

    def incident(self, v) -> list[int]:
        return [i for i, e in enumerate(self.edges) if v in e]

    def restrict(self, subset: Iterable[Hashable]) -> "Hypergraph":
        """Induced hypergraph H[B]: edges intersected with B, empty ones dropped."""
        subset = frozenset(subset)
        edges = tuple(e & subset for e in self.edges if e & subset)
        return Hypergraph(tuple(v for v in self.vertices if v in subset), edges)

    def add_edges(self, edges: Iterable[Iterable[Hashable]]) -> "Hypergraph":
        return Hypergraph.of(self.edges + tuple(frozenset(e) for e in edges), self.vertices)

    def neighbours(self, v) -> frozenset:
        out = set()
        for e in self.edges:
            if v in e:
                out |= e
        out.discard(v)
        return frozenset(out)

    def primal_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            members = sorted(e, key=vertex_key)
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    graph.add_edge(a, b)
        return graph

    def distinct_edges(self) -> list[frozenset]:
        return list(dict.fromkeys(self.edges))

    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.edges)
