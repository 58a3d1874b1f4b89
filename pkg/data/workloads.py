# 2026-10-19 | v0.3.0 | Synthetic databases and queries
"""
workloads.py

Generators for the walk / simple-path / induced-path queries over random
graphs, and for the worked C query over growing instances (bench).

All generators are deterministic in their seed.
"""

from __future__ import annotations

import networkx as nx
import numpy as np

from core.database import Database


# =====================================================
# GRAPHS
# =====================================================

def random_graph(n: int, edges: int, seed: int, directed: bool = True, max_degree: int | None = None) -> nx.Graph:
    """G(n, m) graph; with `max_degree`, edges at saturated endpoints are dropped in edge order."""
    graph = nx.gnm_random_graph(n, edges, seed=seed, directed=directed)
    if max_degree is not None:
        for u, v in sorted(graph.edges()):
            if graph.degree(u) > max_degree or graph.degree(v) > max_degree:
                graph.remove_edge(u, v)
    return graph


def edge_rows(graph: nx.Graph) -> list[tuple[int, int]]:
    """Directed edge list; an undirected graph contributes both directions."""
    rows = set(graph.edges())
    if not graph.is_directed():
        rows |= {(v, u) for u, v in rows}
    return sorted(rows)


def graph_database(graph: nx.Graph) -> Database:
    return Database.from_id_relations({"E": (("src", "dst"), edge_rows(graph))}, graph.number_of_nodes())


# =====================================================
# QUERIES
# =====================================================

def _chain(k: int) -> list[str]:
    return [f"E(X{i}, X{i + 1})" for i in range(1, k + 1)]


def _distinct(k: int) -> list[str]:
    return [f"X{i} != X{j}" for i in range(1, k + 2) for j in range(i + 1, k + 2)]


def walk_query(k: int) -> str:
    """Endpoints of walks with k edges."""
    return f"W(X1, X{k + 1}) :- " + ", ".join(_chain(k)) + "."


def path_query(k: int) -> str:
    """Endpoints of simple paths with k edges."""
    return f"P(X1, X{k + 1}) :- " + ", ".join(_chain(k) + _distinct(k)) + "."


def induced_path_query(k: int) -> str:
    """Endpoints of induced paths with k edges (E symmetric)."""
    gaps = [f"!E(X{i}, X{j})" for i in range(1, k + 2) for j in range(i + 2, k + 2)]
    return f"I(X1, X{k + 1}) :- " + ", ".join(_chain(k) + gaps + _distinct(k)) + "."


C_QUERY = "C() :- R(X, Y), S(Y, Z), !T(X, Z)."


def c_query_instance(N: int, seed: int, hubs: int = 4) -> Database:
    """
    |R| = |S| = N through `hubs` middle values, so R ⋈ S has about N²/hubs
    tuples; T(X, Z) is the union of two matchings (column degree 2).
    """
    rng = np.random.default_rng(seed)
    xs = np.arange(N)
    R = np.column_stack([xs, rng.integers(0, hubs, N)])
    S = np.column_stack([rng.integers(0, hubs, N), rng.permutation(N)])
    shift = rng.permutation(N)
    T = np.concatenate([np.column_stack([xs, shift]), np.column_stack([xs, np.roll(shift, 1)])])
    return Database.from_id_relations({
        "R": (("x", "y"), R.tolist()),
        "S": (("y", "z"), S.tolist()),
        "T": (("x", "z"), T.tolist()),
    }, N)


WORKLOADS = {
    "walk": walk_query,
    "path": path_query,
    "induced": induced_path_query,
}
