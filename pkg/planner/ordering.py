# 2026-10-19 | v0.3.0 | Vertex orderings and induced widths
"""
ordering.py

Vertex orderings σ = (v_1, ..., v_n). Elimination runs backwards: v_n is
eliminated first, so an F-first ordering keeps the free variables for last.

This module:
- Replays the elimination hypergraph sequence of an ordering
- Computes the induced fractional width max_j ρ*_H(J_j)
- Finds an optimal F-first ordering by dynamic programming over subsets
- Falls back to min-fill above ORDERING_DP_CAP (flagged heuristic)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from config import ORDERING_DP_CAP
from core.errors import PlanError, PlanningBudgetExceeded
from core.hypergraph import Hypergraph, vertex_key
from planner.simplex import BagCover, WidthEstimate, fractional_edge_cover

log = logging.getLogger(__name__)

CoverFn = Callable[[Hypergraph, frozenset], BagCover]


@dataclass(frozen=True)
class VertexOrdering:
    sequence: tuple
    free: frozenset = frozenset()
    heuristic: bool = False

    def __post_init__(self):
        if len(set(self.sequence)) != len(self.sequence):
            raise PlanError(f"ordering {self.sequence} repeats a vertex")
        prefix = set(self.sequence[: len(self.free)])
        if self.free and prefix != set(self.free):
            raise PlanError(f"ordering {self.sequence} does not list {sorted(self.free, key=vertex_key)} first")

    def __len__(self) -> int:
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def position(self, v) -> int:
        return self.sequence.index(v)

    def check(self, H: Hypergraph) -> None:
        if set(self.sequence) != set(H.vertices) or len(self.sequence) != len(H.vertices):
            raise PlanError(f"ordering {self.sequence} is not a permutation of {H.vertices}")

    def elimination_order(self) -> tuple:
        return tuple(reversed(self.sequence))


@dataclass(frozen=True)
class EliminationStep:
    """Eliminating `vertex` (σ position `position`) from `hypergraph` creates bag J."""

    position: int
    vertex: object
    bag: frozenset
    hypergraph: Hypergraph


def elimination_sequence(H: Hypergraph, sigma: VertexOrdering) -> list[EliminationStep]:
    """Steps for v_n, v_{n-1}, ..., v_1 in that order."""
    sigma.check(H)
    vertices = list(H.vertices)
    edges = list(H.edges)
    steps = []
    for position in range(len(sigma) - 1, -1, -1):
        v = sigma.sequence[position]
        current = Hypergraph(tuple(vertices), tuple(edges))
        boundary = [e for e in edges if v in e]
        bag = frozenset({v}).union(*boundary)
        steps.append(EliminationStep(position, v, bag, current))
        edges = [e for e in edges if v not in e]
        rest = bag - {v}
        if rest:
            edges.append(rest)
        vertices.remove(v)
    return steps


def induced_fhtw(H: Hypergraph, sigma: VertexOrdering, cover: CoverFn = fractional_edge_cover) -> WidthEstimate:
    covers: dict[frozenset, BagCover] = {}
    for step in elimination_sequence(H, sigma):
        if step.bag not in covers:
            covers[step.bag] = cover(H, step.bag)
    if not covers:
        return WidthEstimate(Fraction(0))
    bags = tuple(covers.values())
    return WidthEstimate(max(b.value for b in bags), bags)


# -------------------------------------------------
# Optimal ordering (subset DP)
# -------------------------------------------------

def _adjacency(H: Hypergraph) -> list[int]:
    index = {v: i for i, v in enumerate(H.vertices)}
    adj = [0] * len(H.vertices)
    for edge in H.edges:
        mask = 0
        for v in edge:
            mask |= 1 << index[v]
        for v in edge:
            adj[index[v]] |= mask & ~(1 << index[v])
    return adj


def _bag_mask(adj: list[int], eliminated: int, v: int) -> int:
    """v plus every non-eliminated vertex reachable from v through eliminated ones."""
    bag = 1 << v
    seen = 1 << v
    stack = [v]
    while stack:
        u = stack.pop()
        fresh = adj[u] & ~seen
        seen |= fresh
        while fresh:
            low = fresh & -fresh
            w = low.bit_length() - 1
            fresh ^= low
            if eliminated >> w & 1:
                stack.append(w)
            else:
                bag |= low
    return bag


def optimal_ordering(H: Hypergraph, free: Iterable = (), cap: int = ORDERING_DP_CAP,
                     cover: CoverFn = fractional_edge_cover) -> tuple[VertexOrdering, WidthEstimate]:
    """
    fhtw_F(H) = min over F-first orderings of the induced width. States are
    sets of eliminated vertices; non-free vertices go first.
    """
    free = frozenset(free)
    n = len(H.vertices)
    if n > cap:
        raise PlanningBudgetExceeded(f"{n} vertices exceeds the ordering DP cap {cap}")
    if n == 0:
        return VertexOrdering((), free), WidthEstimate(Fraction(0))

    vertices = H.vertices
    adj = _adjacency(H)
    full = (1 << n) - 1
    bound_mask = sum(1 << i for i, v in enumerate(vertices) if v not in free)

    covers: dict[int, BagCover] = {}

    def rho(mask: int) -> Fraction:
        if mask not in covers:
            covers[mask] = cover(H, frozenset(vertices[i] for i in range(n) if mask >> i & 1))
        return covers[mask].value

    best: dict[int, Fraction] = {0: Fraction(0)}
    choice: dict[int, tuple[int, int]] = {}
    for mask in range(full + 1):
        if mask not in best:
            continue
        width = best[mask]
        allowed = bound_mask & ~mask if (mask & bound_mask) != bound_mask else full & ~mask
        for v in range(n):
            if not allowed >> v & 1:
                continue
            bag = _bag_mask(adj, mask, v)
            cand = max(width, rho(bag))
            nxt = mask | (1 << v)
            if nxt not in best or cand < best[nxt]:
                best[nxt] = cand
                choice[nxt] = (mask, v)

    eliminated = []
    mask = full
    while mask:
        prev, v = choice[mask]
        eliminated.append(vertices[v])
        mask = prev
    # `eliminated` is collected last-to-first, which is already σ order.
    sigma = VertexOrdering(tuple(eliminated), free)
    return sigma, induced_fhtw(H, sigma, cover)


def min_fill_ordering(H: Hypergraph, free: Iterable = ()) -> VertexOrdering:
    """Greedy min-fill elimination, non-free vertices first; ties by degree then name."""
    free = frozenset(free)
    graph = H.primal_graph()
    eliminated = []
    while graph.number_of_nodes():
        pool = [v for v in graph.nodes if v not in free] or list(graph.nodes)

        def fill(v):
            nbrs = list(graph.neighbors(v))
            missing = sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1:] if not graph.has_edge(a, b))
            return missing, len(nbrs), vertex_key(v)

        v = min(pool, key=fill)
        nbrs = list(graph.neighbors(v))
        graph.add_edges_from((a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1:])
        graph.remove_node(v)
        eliminated.append(v)
    return VertexOrdering(tuple(reversed(eliminated)), free, heuristic=True)


def plan_ordering(H: Hypergraph, free: Iterable = (), cap: int = ORDERING_DP_CAP,
                  cover: CoverFn = fractional_edge_cover) -> tuple[VertexOrdering, WidthEstimate]:
    """optimal_ordering, or min-fill with a warning when the DP cap is hit."""
    try:
        return optimal_ordering(H, free, cap, cover)
    except PlanningBudgetExceeded:
        log.warning("[Planner] %d vertices > ORDERING_DP_CAP=%d, using min-fill ordering", len(H), cap)
        sigma = min_fill_ordering(H, free)
        return sigma, induced_fhtw(H, sigma, cover)

