# 2026-10-19 | v0.3.0 | Exact fractional edge covers
"""
simplex.py

Fractional edge cover number ρ*_H(B) over exact rationals.

This module:
- Solves the vertex-packing LP  max Σ y_v  s.t. Σ_{v∈e∩B} y_v ≤ 1
  (the dual of the cover LP) with a dense tableau and Bland's rule
- Reads the optimal cover weights off the slack reduced costs
- Returns a certificate that can be replayed without tolerance
- Does NOT use floating point anywhere
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from core.errors import InfeasibleCover, PlanError
from core.hypergraph import Hypergraph, vertex_key

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class BagCover:
    """ρ*_H(bag) and the edge weights that achieve it."""

    bag: frozenset
    value: Fraction
    weights: tuple[tuple[frozenset, Fraction], ...]

    def verify(self) -> bool:
        if any(w < 0 for _, w in self.weights):
            return False
        if sum((w for _, w in self.weights), ZERO) != self.value:
            return False
        for v in self.bag:
            if sum((w for e, w in self.weights if v in e), ZERO) < ONE:
                return False
        return True


@dataclass(frozen=True)
class WidthEstimate:
    value: Fraction
    bags: tuple[BagCover, ...] = ()

    @property
    def certificate(self) -> dict[frozenset, tuple]:
        return {b.bag: b.weights for b in self.bags}

    def verify(self) -> bool:
        if not self.bags:
            return self.value == 0
        return all(b.verify() for b in self.bags) and self.value == max(b.value for b in self.bags)


def _pivot(tableau: list[list[Fraction]], row: int, col: int) -> None:
    pivot_row = tableau[row]
    p = pivot_row[col]
    pivot_row[:] = [x / p for x in pivot_row]
    for i, other in enumerate(tableau):
        if i == row or other[col] == 0:
            continue
        factor = other[col]
        other[:] = [a - factor * b for a, b in zip(other, pivot_row)]


def solve_packing(edges: list[frozenset], vertices: list) -> tuple[Fraction, list[Fraction]]:
    """
    Maximize Σ y_v subject to one ≤ 1 row per edge. Returns the optimum and
    the optimal dual prices (one per edge), i.e. the fractional edge cover.
    """
    n, m = len(vertices), len(edges)
    col_of = {v: j for j, v in enumerate(vertices)}

    # Row i: [a_i0 .. a_i(n-1) | slack_0 .. slack_(m-1) | rhs]
    tableau = []
    for i, edge in enumerate(edges):
        row = [ZERO] * (n + m + 1)
        for v in edge:
            row[col_of[v]] = ONE
        row[n + i] = ONE
        row[-1] = ONE
        tableau.append(row)
    # Reduced costs; the last cell holds -z.
    objective = [ONE] * n + [ZERO] * m + [ZERO]
    tableau.append(objective)
    basis = [n + i for i in range(m)]

    while True:
        entering = next((j for j in range(n + m) if objective[j] > 0), None)
        if entering is None:
            break
        best, leaving = None, None
        for i in range(m):
            a = tableau[i][entering]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            raise PlanError("vertex packing LP is unbounded; an uncovered vertex slipped through")
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering

    value = -objective[-1]
    weights = [-objective[n + i] for i in range(m)]
    return value, weights


def fractional_edge_cover(H: Hypergraph, bag: Iterable) -> BagCover:
    """ρ*_H(B): optimum of the cover LP restricted to H[B]."""
    bag = frozenset(bag)
    if not bag:
        return BagCover(bag, ZERO, ())

    # One column per distinct restricted edge; the first original edge represents it.
    restricted: dict[frozenset, frozenset] = {}
    for edge in H.edges:
        part = edge & bag
        if part and part not in restricted:
            restricted[part] = edge
    covered = frozenset().union(*restricted) if restricted else frozenset()
    for v in sorted(bag, key=vertex_key):
        if v not in covered:
            raise InfeasibleCover(v)

    parts = list(restricted)
    vertices = sorted(bag, key=vertex_key)
    value, weights = solve_packing(parts, vertices)
    certificate = tuple((restricted[p], w) for p, w in zip(parts, weights) if w != 0)
    return BagCover(bag, value, certificate)
