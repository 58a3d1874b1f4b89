# 2026-10-19 | v0.3.0 | Tree decompositions <-> vertex orderings
"""
decomposition.py

Tree decompositions labelled by σ positions: the node created when v_j is
eliminated keeps label j, so "earliest bag" means smallest label.

This module:
- Builds a TD from an ordering (bags J_j, parent = latest σ vertex of J_j - v_j)
- Contracts bags contained in a neighbour with the same witness status
- Validates tree shape, coverage, running intersection and the F-connex witness
- Turns a (possibly amended) TD back into an F-first ordering
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import networkx as nx

from core.errors import PlanError
from core.hypergraph import Hypergraph, vertex_key
from planner.ordering import VertexOrdering, elimination_sequence


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Mapping[int, frozenset]
    parent: Mapping[int, int | None]
    witness: frozenset = field(default_factory=frozenset)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.bags))

    @property
    def root(self) -> int | None:
        roots = [t for t in self.nodes if self.parent[t] is None]
        return roots[0] if roots else None

    def __len__(self) -> int:
        return len(self.bags)

    def children(self, node: int) -> list[int]:
        return [t for t in self.nodes if self.parent[t] == node]

    def tree(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from((t, p) for t, p in self.parent.items() if p is not None)
        return graph

    def vertices(self) -> frozenset:
        return frozenset().union(*self.bags.values()) if self.bags else frozenset()

    def with_bags(self, bags: Mapping[int, Iterable]) -> "TreeDecomposition":
        merged = dict(self.bags)
        merged.update({t: frozenset(b) for t, b in bags.items()})
        return TreeDecomposition(merged, self.parent, self.witness)

    def path(self, a: int, b: int) -> list[int]:
        return nx.shortest_path(self.tree(), a, b)

    def check(self, H: Hypergraph, free: Iterable = ()) -> None:
        """Raise PlanError naming the first violated property."""
        free = frozenset(free)
        tree = self.tree()
        if len(tree) and not nx.is_tree(tree):
            raise PlanError("decomposition is not a tree")
        for edge in H.edges:
            if not any(edge <= bag for bag in self.bags.values()):
                raise PlanError(f"hyperedge {sorted(edge, key=vertex_key)} is in no bag")
        for v in self.vertices() | frozenset(H.vertices):
            holders = [t for t, bag in self.bags.items() if v in bag]
            if not holders:
                raise PlanError(f"vertex {v} is in no bag")
            if not nx.is_connected(tree.subgraph(holders)):
                raise PlanError(f"bags holding {v} are not connected")
        if free:
            union = frozenset().union(*(self.bags[t] for t in self.witness)) if self.witness else frozenset()
            if union != free:
                raise PlanError(f"witness bags cover {sorted(union, key=vertex_key)}, not the free variables")
            if not nx.is_connected(tree.subgraph(self.witness)):
                raise PlanError("witness bags are not connected")

    def is_valid(self, H: Hypergraph, free: Iterable = ()) -> bool:
        try:
            self.check(H, free)
        except PlanError:
            return False
        return True

    def lines(self) -> list[str]:
        out = []
        for t in self.nodes:
            bag = ", ".join(str(v) for v in sorted(self.bags[t], key=vertex_key))
            mark = "*" if t in self.witness else " "
            out.append(f"{mark}bag {t}: {{{bag}}} parent={self.parent[t]}")
        return out


def _contract(bags: dict, parent: dict, witness: set) -> None:
    """Drop bags contained in a parent or child with the same witness status."""
    changed = True
    while changed:
        changed = False
        for t in sorted(bags):
            p = parent[t]
            if p is None or (t in witness) != (p in witness):
                continue
            if bags[t] <= bags[p]:
                for child, cp in list(parent.items()):
                    if cp == t:
                        parent[child] = p
                del bags[t], parent[t]
                witness.discard(t)
                changed = True
                break
            if bags[p] <= bags[t]:
                for child, cp in list(parent.items()):
                    if cp == p and child != t:
                        parent[child] = t
                parent[t] = parent[p]
                del bags[p], parent[p]
                witness.discard(p)
                changed = True
                break


def ordering_to_tree_decomposition(H: Hypergraph, sigma: VertexOrdering) -> TreeDecomposition:
    position = {v: j for j, v in enumerate(sigma.sequence)}
    bags: dict[int, frozenset] = {}
    parent: dict[int, int | None] = {}
    for step in elimination_sequence(H, sigma):
        bags[step.position] = step.bag
        rest = step.bag - {step.vertex}
        parent[step.position] = max(position[v] for v in rest) if rest else None

    # One tree: every other component root hangs off the earliest root.
    roots = sorted(t for t, p in parent.items() if p is None)
    for t in roots[1:]:
        parent[t] = roots[0]

    witness = {j for j in bags if j < len(sigma.free)}
    _contract(bags, parent, witness)
    return TreeDecomposition(bags, parent, frozenset(witness))


def tree_decomposition_to_ordering(td: TreeDecomposition, free: Iterable = (),
                                   key: Callable | None = None) -> VertexOrdering:
    """
    Post-order traversal from a witness root: each node eliminates the
    vertices it does not share with its parent, cheapest first by `key`.
    Bound vertices are eliminated before free ones.
    """
    free = frozenset(free)
    key = key or vertex_key
    if not td.bags:
        return VertexOrdering((), free)
    root = min(td.witness) if td.witness else td.root
    rooted = nx.dfs_tree(td.tree(), root)

    eliminated: list = []
    done: set = set()
    for node in nx.dfs_postorder_nodes(rooted, root):
        parents = list(rooted.predecessors(node))
        shared = td.bags[parents[0]] if parents else frozenset()
        local = sorted((v for v in td.bags[node] if v not in shared and v not in done), key=key)
        eliminated.extend(local)
        done.update(local)

    order = [v for v in eliminated if v not in free] + [v for v in eliminated if v in free]
    return VertexOrdering(tuple(reversed(order)), free)
