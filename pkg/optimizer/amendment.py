# 2026-10-19 | v0.3.0 | Greedy color amendment of a tree decomposition
"""
amendment.py

Turns a tree decomposition of H into one of H′:

1. C_i joins every bag holding X_i (free: X_i determines it)
2. each uncovered color edge C_S joins one bag already meeting C_S, the
   one whose choice raises the objective least, where the objective is the
   largest count of undetermined color variables over all bags
3. running intersection is restored by adding C_i along tree paths

Ties are broken by the number of added entries, then the bag label.
"""

from __future__ import annotations

import logging

import networkx as nx

from core.errors import PlanError
from core.hypergraph import vertex_key
from optimizer.color_join import ColorJoinIR
from planner.decomposition import TreeDecomposition, ordering_to_tree_decomposition, tree_decomposition_to_ordering
from planner.ordering import VertexOrdering

log = logging.getLogger(__name__)


def objective(bags: dict, cj: ColorJoinIR) -> int:
    return max((len(cj.free_colors(bag)) for bag in bags.values()), default=0)


def repair_running_intersection(bags: dict, tree: nx.Graph, variables) -> dict:
    """Add each variable to every bag on the paths joining its holders."""
    bags = dict(bags)
    for v in variables:
        holders = sorted(t for t, bag in bags.items() if v in bag)
        for t in holders[1:]:
            for node in nx.shortest_path(tree, holders[0], t):
                if v not in bags[node]:
                    bags[node] = bags[node] | {v}
    return bags


def color_amendment(td: TreeDecomposition, cj: ColorJoinIR) -> TreeDecomposition:
    tree = td.tree()
    bags = {t: frozenset(bag) for t, bag in td.bags.items()}
    for x, col in cj.colors.items():
        for t, bag in bags.items():
            if x in bag:
                bags[t] = bag | {col}

    for edge in cj.nae_edges:
        S = frozenset(edge)
        if any(S <= bag for bag in bags.values()):
            continue
        best = None
        for t in sorted(bags):
            if not S & bags[t]:
                continue
            trial = dict(bags)
            trial[t] = trial[t] | S
            trial = repair_running_intersection(trial, tree, S)
            added = sum(len(trial[u] - bags[u]) for u in bags)
            score = (objective(trial, cj), added, t)
            if best is None or score < best[0]:
                best = (score, trial)
        if best is None:
            raise PlanError(f"color edge {sorted(S)} meets no bag")
        log.debug("[Amendment] %s -> bag %d (objective %d, +%d entries)",
                  sorted(S), best[0][2], best[0][0], best[0][1])
        bags = best[1]

    amended = TreeDecomposition(bags, td.parent, td.witness)
    amended.check(cj.hypergraph)
    return amended


def _color_first_key(cj: ColorJoinIR):
    return lambda v: (0 if cj.is_color(v) else 1, vertex_key(v))


def amended_ordering(cj: ColorJoinIR, sigma: VertexOrdering) -> tuple[TreeDecomposition, VertexOrdering]:
    """σ of H -> amended TD of H′ -> F-first ordering π of H′ (colors leave a node first)."""
    td = ordering_to_tree_decomposition(cj.body, sigma)
    amended = color_amendment(td, cj)
    pi = tree_decomposition_to_ordering(amended, cj.free, key=_color_first_key(cj))
    pi.check(cj.hypergraph)
    return amended, pi


def colors_first_ordering(cj: ColorJoinIR, sigma: VertexOrdering) -> VertexOrdering:
    """Colors placed right after the free prefix of σ, so they are eliminated last."""
    k = len(sigma.free)
    colors = tuple(cj.colors.values())
    return VertexOrdering(sigma.sequence[:k] + colors + sigma.sequence[k:], sigma.free)
