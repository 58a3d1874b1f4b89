# 2026-10-19 | v0.3.0 | Chromatic quantities of an NAE structure
"""
chromatic.py

The NAE conjunction of a disjunct is a hypergraph G=(U,A); a coloring is
proper when no hyperedge is monochromatic.

This module:
- Enumerates quotient images (partitions of U that keep every hyperedge split)
- Counts proper colorings exactly (frontier DP, optionally weighted)
- Computes c, P(G,c), θ(p) and the structure-aware starting p
- Builds the NaeStructure of a disjunct, including its dense value index

Does NOT:
- Build color families (see families.py)
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx
import numpy as np

from config import CHROMATIC_MAX_COLORS, CHROMATIC_MAX_VERTICES, QUOTIENT_CAP, THETA_REFINE_GRID
from core.database import Database
from core.errors import (
    ChromaticBudgetExceeded,
    InvalidDistribution,
    QuotientBudgetExceeded,
    RangeRestrictionError,
)
from core.hypergraph import Hypergraph
from query.ir import QueryIR

log = logging.getLogger(__name__)


# =====================================================
# QUOTIENT IMAGES
# =====================================================

@dataclass(frozen=True)
class Quotient:
    """`labels[i]` is the block of G.vertices[i]; `image` lives on blocks 0..m-1."""

    labels: tuple[int, ...]
    image: Hypergraph

    @property
    def blocks(self) -> int:
        return len(self.image.vertices)


def set_partitions(n: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n, blocks numbered by first appearance."""
    if n == 0:
        yield ()
        return
    limit = n if max_blocks is None else max_blocks
    labels = [0] * n

    def grow(i: int, used: int):
        if i == n:
            yield tuple(labels)
            return
        for b in range(min(used + 1, limit)):
            labels[i] = b
            yield from grow(i + 1, max(used, b + 1))

    yield from grow(1, 1) if limit >= 1 else iter(())


def quotient_images(G: Hypergraph, max_blocks: int | None = None, cap: int = QUOTIENT_CAP) -> list[Quotient]:
    """
    Every partition of U in which no hyperedge falls inside a single block,
    with its image hypergraph. `max_blocks` keeps only images an N-coloring
    can realize.
    """
    n = len(G.vertices)
    if n > cap:
        raise QuotientBudgetExceeded(f"|U|={n} exceeds QUOTIENT_CAP={cap}")
    index = {v: i for i, v in enumerate(G.vertices)}
    edges = [tuple(index[v] for v in e) for e in G.distinct_edges()]

    out = []
    for labels in set_partitions(n, max_blocks):
        images = [frozenset(labels[i] for i in e) for e in edges]
        if any(len(img) < 2 for img in images):
            continue
        blocks = max(labels) + 1 if labels else 0
        out.append(Quotient(labels, Hypergraph.of(images, range(blocks))))
    return out


# =====================================================
# COLORING SUMS
# =====================================================

def coloring_sum(G: Hypergraph, weights: Sequence):
    """
    Σ over proper colorings g : U -> [len(weights)] of ∏_v weights[g(v)].
    Unit weights give the number of proper colorings. Vertices are colored in
    order; only those with a pending hyperedge stay in the DP state.
    """
    n = len(G.vertices)
    index = {v: i for i, v in enumerate(G.vertices)}
    edges = [sorted(index[v] for v in e) for e in G.distinct_edges()]
    closing: list[list[list[int]]] = [[] for _ in range(n)]
    last_use = list(range(n))
    for e in edges:
        closing[e[-1]].append(e)
        for u in e:
            last_use[u] = max(last_use[u], e[-1])

    colors = [(x, w) for x, w in enumerate(weights) if w != 0]
    frontier: list[int] = []
    states: dict[tuple, object] = {(): 1}
    for i in range(n):
        slots = frontier + [i]
        slot = {v: k for k, v in enumerate(slots)}
        keep = [k for k, v in enumerate(slots) if last_use[v] > i]
        nxt: dict[tuple, object] = {}
        for key, value in states.items():
            for x, w in colors:
                full = key + (x,)
                if any(len({full[slot[u]] for u in e}) < 2 for e in closing[i]):
                    continue
                reduced = tuple(full[k] for k in keep)
                nxt[reduced] = nxt.get(reduced, 0) + value * w
        states = nxt
        frontier = [slots[k] for k in keep]
    return sum(states.values(), 0)


def proper_mask(colorings: np.ndarray, edges: Iterable[Sequence[int]]) -> np.ndarray:
    """Row mask of the (m, |U|) coloring matrix: True where no edge is monochromatic."""
    colorings = np.asarray(colorings)
    mask = np.ones(len(colorings), dtype=bool)
    for e in edges:
        cols = colorings[:, list(e)]
        mask &= ~(cols == cols[:, :1]).all(axis=1)
    return mask


def edge_columns(G: Hypergraph) -> list[list[int]]:
    index = {v: i for i, v in enumerate(G.vertices)}
    return [[index[v] for v in sorted(e, key=index.__getitem__)] for e in G.distinct_edges()]


def proper_colorings(G: Hypergraph, colors: int, budget: int) -> np.ndarray:
    """All proper colorings as rows over G.vertices (lexicographic), if colors^|U| ≤ budget."""
    n = len(G.vertices)
    if colors ** n > budget:
        raise ChromaticBudgetExceeded(f"{colors}^{n} colorings exceeds the budget {budget}")
    grid = np.indices((colors,) * n, dtype=np.int64).reshape(n, -1).T
    return grid[proper_mask(grid, edge_columns(G))]


# =====================================================
# CHROMATIC QUANTITIES
# =====================================================

def chromatic_polynomial(G: Hypergraph, c: int, max_vertices: int = CHROMATIC_MAX_VERTICES,
                         max_colors: int = CHROMATIC_MAX_COLORS) -> int:
    """P(G,c): number of colorings with every hyperedge using ≥ 2 colors."""
    if len(G.vertices) > max_vertices or c > max_colors:
        raise ChromaticBudgetExceeded(
            f"P(G,{c}) with |U|={len(G.vertices)} is over the enumeration caps "
            f"({max_vertices} vertices, {max_colors} colors)")
    return int(coloring_sum(G, [1] * c))


def partition_chromatic_polynomial(G: Hypergraph, x: int, cap: int = QUOTIENT_CAP) -> int:
    """
    P(G,x) for any x: each proper coloring is a quotient partition with its
    blocks colored injectively, so P(G,x) = Σ_π x(x-1)...(x-|π|+1).
    """
    return sum(math.perm(x, q.blocks) for q in quotient_images(G, cap=cap))


def chromatic_number(G: Hypergraph) -> int:
    for k in range(1, len(G.vertices) + 1):
        if coloring_sum(G, [1] * k):
            return k
    return max(len(G.vertices), 1)


def fallback_colors(G: Hypergraph, N: int | None = None) -> int:
    """Colors that always suffice: an image has at most min(|U|, N) blocks."""
    n = len(G.vertices)
    return max(min(n, N) if N else n, 1)


@dataclass(frozen=True)
class ColorCount:
    c: int
    exact: bool


def color_count(G: Hypergraph, N: int | None = None, cap: int = QUOTIENT_CAP) -> ColorCount:
    """c = max chromatic number over the (realizable) quotient images; min(|U|, N) above the cap."""
    try:
        images = quotient_images(G, N, cap)
    except QuotientBudgetExceeded:
        fallback = fallback_colors(G, N)
        log.warning("[Chromatic] |U|=%d > QUOTIENT_CAP=%d, falling back to c=%d", len(G.vertices), cap, fallback)
        return ColorCount(fallback, False)
    c = max((chromatic_number(q.image) for q in images), default=1)
    return ColorCount(c, True)


# =====================================================
# θ(p)
# =====================================================

def as_distribution(p: Iterable, c: int) -> tuple[Fraction, ...]:
    try:
        probs = tuple(Fraction(x) for x in p)
    except (TypeError, ValueError) as exc:
        raise InvalidDistribution(f"p is not a vector of rationals: {exc}") from None
    if len(probs) != c:
        raise InvalidDistribution(f"p has {len(probs)} entries for {c} colors")
    if any(x < 0 for x in probs):
        raise InvalidDistribution("p has a negative entry")
    if sum(probs) != 1:
        raise InvalidDistribution(f"p sums to {sum(probs)}, not 1")
    return probs


def uniform(c: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, c) for _ in range(c))


def theta(G: Hypergraph, c: int, p: Iterable, N: int | None = None, cap: int = QUOTIENT_CAP,
          images: Sequence[Quotient] | None = None) -> Fraction:
    """
    θ(p) = min over images h(G) of the probability that an i.i.d. p-random
    coloring of h(G) is proper.
    """
    probs = as_distribution(p, c)
    if images is None:
        images = quotient_images(G, N, cap)
    return min((Fraction(coloring_sum(q.image, probs)) for q in images), default=Fraction(0))


def complete_multipartite_parts(G: Hypergraph) -> list[tuple] | None:
    """Parts of G when G is K_μ (ℓ ≥ 2, binary edges), largest first; otherwise None."""
    if not G.edges or not G.is_graph():
        return None
    graph = G.primal_graph()
    parts = [tuple(sorted(comp, key=G.vertices.index)) for comp in nx.connected_components(nx.complement(graph))]
    if len(parts) < 2:
        return None
    for part in parts:
        if any(graph.has_edge(a, b) for i, a in enumerate(part) for b in part[i + 1:]):
            return None
    parts.sort(key=lambda part: (-len(part), G.vertices.index(part[0])))
    return parts


@dataclass(frozen=True)
class ThetaBound:
    p: tuple[Fraction, ...]
    bound: Fraction
    mu: tuple[int, ...] | None = None


def theta_star_lower(G: Hypergraph, N: int | None = None, cap: int = QUOTIENT_CAP) -> ThetaBound:
    """
    Starting distribution and a guaranteed lower bound on θ for it.

    K_μ: p_i = μ_i/‖μ‖ with bound FP(μ)·∏ p_i^{μ_i}, FP(μ) counting the
    permutations that fix μ. Otherwise uniform p with bound 1/c^{|U|}: every
    realizable image has a proper c-coloring of mass at least c^{-|U|}.
    """
    parts = complete_multipartite_parts(G)
    if parts is not None:
        mu = tuple(len(part) for part in parts)
        total = sum(mu)
        p = tuple(Fraction(m, total) for m in mu)
        fixed = math.prod(math.factorial(k) for k in Counter(mu).values())
        bound = fixed * math.prod((pi ** m for pi, m in zip(p, mu)), start=Fraction(1))
        return ThetaBound(p, bound, mu)
    c = color_count(G, N, cap).c
    return ThetaBound(uniform(c), Fraction(1, c ** len(G.vertices)))


def refine_distribution(G: Hypergraph, c: int, p0: Iterable, grid: int = THETA_REFINE_GRID,
                        N: int | None = None, cap: int = QUOTIENT_CAP) -> tuple[tuple[Fraction, ...], Fraction]:
    """Coordinate descent: move 1/grid of mass between two colors while θ strictly improves."""
    images = quotient_images(G, N, cap)
    p = list(as_distribution(p0, c))
    best = theta(G, c, p, images=images)
    step = Fraction(1, grid)
    improved = True
    while improved:
        improved = False
        for i in range(c):
            for j in range(c):
                if i == j or p[j] < step:
                    continue
                cand = list(p)
                cand[i] += step
                cand[j] -= step
                value = theta(G, c, cand, images=images)
                if value > best:
                    p, best, improved = cand, value, True
    log.debug("[Chromatic] refined p=%s theta=%s", p, best)
    return tuple(p), best


# =====================================================
# NAE STRUCTURE OF A DISJUNCT
# =====================================================

@dataclass(frozen=True)
class NaeStructure:
    """
    G over the NAE variables, N = size of the union of their active domains,
    `dense` mapping each value id of that union to its index in [N].
    """

    G: Hypergraph
    N: int
    c: int
    exact: bool
    quotients: tuple[Quotient, ...]
    dense: Mapping[int, int] = field(repr=False)

    @property
    def U(self) -> tuple:
        return self.G.vertices

    def index(self, values: Iterable[int]) -> np.ndarray:
        return np.fromiter((self.dense[int(v)] for v in values), dtype=np.int64)


def variable_values(ir: QueryIR, db: Database, var: str) -> np.ndarray:
    """Values `var` can take: intersection over the positive atoms mentioning it."""
    values = None
    for atom in ir.positive_atoms:
        for pos, v in enumerate(atom.variables):
            if v != var:
                continue
            col = np.unique(db.relation(atom.relation).column(pos))
            values = col if values is None else np.intersect1d(values, col, assume_unique=True)
    if values is None:
        raise RangeRestrictionError(var)
    return values


def nae_structure(ir: QueryIR, db: Database, cap: int = QUOTIENT_CAP) -> NaeStructure:
    G = Hypergraph.of(ir.nae_atoms)
    pools = [variable_values(ir, db, v) for v in G.vertices]
    union = np.unique(np.concatenate(pools)) if pools else np.zeros(0, dtype=np.int64)
    return structure_of(G, {int(v): i for i, v in enumerate(union)}, cap)


def structure_of(G: Hypergraph, dense: Mapping[int, int] | int, cap: int = QUOTIENT_CAP) -> NaeStructure:
    """`dense` maps value ids to [N]; an int N stands for the identity on [N]."""
    if isinstance(dense, int):
        dense = {i: i for i in range(dense)}
    N = len(dense)
    try:
        quotients = tuple(quotient_images(G, N, cap))
        c = max((chromatic_number(q.image) for q in quotients), default=1)
        exact = True
    except QuotientBudgetExceeded:
        c = fallback_colors(G, N)
        log.warning("[Chromatic] |U|=%d > QUOTIENT_CAP=%d, falling back to c=%d", len(G.vertices), cap, c)
        quotients, exact = (), False
    log.debug("[Chromatic] |U|=%d |A|=%d N=%d c=%d", len(G.vertices), len(G.edges), N, c)
    return NaeStructure(G, N, c, exact, quotients, dense)
