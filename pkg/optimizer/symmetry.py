# 2026-10-19 | v0.3.0 | Forbidden-spectrum symmetry pruning of intermediate factors
"""
symmetry.py

An intermediate factor over I ∪ K (inputs I, color variables K) may hold
many color tuples c_K for the same x_I that behave identically on the
color variables L still to come. Only one representative per class is
kept (the lexicographically least) and the values of the class are summed
into it.

Two tuples fall in one class when, for every pending color edge S meeting
K, the pattern of c_K on S ∩ K is the same: either not all equal, or all
equal to the same color. For edges with one vertex outside K this is the
forbidden spectrum of that vertex. Color variables still read by another
pending factor are pinned and keep their exact values.
"""

from __future__ import annotations

import logging
from typing import Iterable, Mapping, Sequence

from core.factor import Factor
from optimizer.color_join import ColorJoinIR

log = logging.getLogger(__name__)

MIXED = None


def forbidden_spectrum(assignment: Mapping[str, int], K: Iterable[str], L: Iterable[str],
                       A: Iterable[Sequence[str]]) -> dict[str, frozenset]:
    """
    Color x is forbidden for C_i ∈ L iff some edge S ∋ C_i has S - {C_i} ⊆ K
    and c_K colors all of S - {C_i} with x.
    """
    K = frozenset(K)
    spectrum: dict[str, set] = {v: set() for v in L}
    for edge in A:
        edge = frozenset(edge)
        for v in edge & spectrum.keys():
            rest = edge - {v}
            if rest and rest <= K:
                seen = {assignment[u] for u in rest}
                if len(seen) == 1:
                    spectrum[v].add(next(iter(seen)))
    return {v: frozenset(s) for v, s in spectrum.items()}


def _pattern(assignment: Mapping[str, int], part: Iterable[str]):
    seen = {assignment[u] for u in part}
    return next(iter(seen)) if len(seen) == 1 else MIXED


def class_key(assignment: Mapping[str, int], K: frozenset, L: frozenset, A: Sequence[frozenset]) -> tuple:
    """Forbidden spectrum of L plus the pattern of every edge with no single L vertex."""
    spectrum = forbidden_spectrum(assignment, K, L, A)
    wide = tuple(_pattern(assignment, edge & K) for edge in A
                 if edge & K and edge <= K | L and len(edge & L) != 1)
    return tuple(sorted((v, tuple(sorted(s))) for v, s in spectrum.items())), wide


def symmetric_prune(intermediate: Factor, K: Iterable[str], L: Iterable[str], A: Iterable[Sequence[str]],
                    pinned: Iterable[str] = ()) -> Factor:
    pinned = frozenset(pinned)
    K = frozenset(K) - pinned
    # Pinned variables keep exact values, so for the class key they sit with L.
    L = frozenset(L) | pinned
    relevant = [frozenset(e) for e in A if frozenset(e) & K and frozenset(e) <= K | L]
    exact = [i for i, v in enumerate(intermediate.schema) if v not in K]
    loose = [i for i, v in enumerate(intermediate.schema) if v in K]
    if not loose:
        return intermediate

    semiring = intermediate.semiring
    classes: dict[tuple, tuple] = {}
    for key, value in sorted(intermediate.entries.items()):
        assignment = {intermediate.schema[i]: key[i] for i in range(len(key))}
        label = (tuple(key[i] for i in exact), class_key(assignment, K, L, relevant))
        if label in classes:
            rep, acc = classes[label]
            classes[label] = (rep, semiring.plus(acc, value))
        else:
            classes[label] = (key, value)
    if len(classes) < len(intermediate):
        log.debug("[Symmetry] %d -> %d tuples over %s", len(intermediate), len(classes), intermediate.schema)
    return Factor.build(intermediate.schema, dict(classes.values()), semiring)


class SymmetryPruner:
    """InsideOut step hook applying symmetric_prune to every intermediate factor."""

    def __init__(self, cj: ColorJoinIR):
        self.cj = cj
        self.edges = [frozenset(e) for e in cj.nae_edges]
        self.pruned = 0

    def __call__(self, v, result: Factor, factors: list) -> Factor:
        K = frozenset(u for u in result.schema if self.cj.is_color(u))
        if not K:
            return result
        present = set(result.schema).union(*(f.schema for f in factors))
        colors = frozenset(u for u in present if self.cj.is_color(u))
        pending = [e for e in self.edges if e <= colors]
        pinned = K & frozenset().union(*(f.schema for f in factors)) if factors else frozenset()
        pruned = symmetric_prune(result, K, colors - K, pending, pinned)
        self.pruned += len(result) - len(pruned)
        return pruned
