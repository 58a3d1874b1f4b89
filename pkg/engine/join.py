# 2026-10-19 | v0.3.0 | Generic multiway join over hash tries
"""
join.py

Variable-at-a-time join (generic join). Every table is a trie keyed in the
global variable order; at each depth the candidates of the smallest
participating trie are looked up in the others. Predicates act as
filters: they are tested as soon as their last variable is bound and
never generate values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from core.errors import PlanError
from core.factor import Factor, PredicateFactor


@dataclass(frozen=True, eq=False)
class JoinTable:
    """A trie over `schema` (already in join order). `weighted` leaves hold semiring values."""

    schema: tuple[str, ...]
    trie: Any
    weighted: bool = True


def build_trie(entries, positions: Sequence[int], weighted: bool, one=True):
    """Nested dicts following `positions`; leaves hold the entry value (or `one`)."""
    if not positions:
        if not entries:
            return None
        return next(iter(entries.values())) if weighted else one
    root: dict = {}
    last = len(positions) - 1
    for key, value in entries.items():
        node = root
        for depth, p in enumerate(positions):
            v = key[p]
            if depth == last:
                node[v] = value if weighted else one
            else:
                node = node.setdefault(v, {})
    return root


@dataclass
class TrieCache:
    """(factor, order) -> trie; factors are immutable so ids are safe while held."""

    tries: dict = field(default_factory=dict)
    hits: int = 0

    def table(self, factor: Factor, order: dict[str, int], weighted: bool) -> JoinTable:
        schema = tuple(sorted(factor.schema, key=order.__getitem__))
        key = (id(factor), schema, weighted)
        if key in self.tries:
            self.hits += 1
            return self.tries[key][1]
        positions = [factor.schema.index(v) for v in schema]
        table = JoinTable(schema, build_trie(factor.entries, positions, weighted, factor.semiring.one), weighted)
        self.tries[key] = (factor, table)
        return table


def generic_join(variables: Sequence[str], tables: Sequence[JoinTable],
                 predicates: Sequence[PredicateFactor] = ()) -> Iterator[tuple[tuple, list]]:
    """
    Yields (assignment over `variables`, leaf values of the weighted tables).
    Every variable must appear in at least one table.
    """
    variables = tuple(variables)
    depth_of = {v: d for d, v in enumerate(variables)}
    n = len(variables)

    # Zero-arity tables: a missing leaf empties the join.
    live = []
    constants = []
    for t in tables:
        if not t.schema:
            if t.trie is None:
                return
            if t.weighted:
                constants.append(t.trie)
        else:
            live.append(t)

    at_depth: list[list[int]] = [[] for _ in range(n)]
    for i, t in enumerate(live):
        for v in t.schema:
            at_depth[depth_of[v]].append(i)
    for d, tabs in enumerate(at_depth):
        if not tabs:
            raise PlanError(f"variable {variables[d]} is not generated by any table")

    checks: list[list[tuple[PredicateFactor, list[int]]]] = [[] for _ in range(n)]
    for pred in predicates:
        idx = [depth_of[v] for v in pred.schema]
        checks[max(idx)].append((pred, idx))

    weighted = [i for i, t in enumerate(live) if t.weighted]
    assignment = [None] * n

    def expand(d: int, nodes: list):
        if d == n:
            yield tuple(assignment), constants + [nodes[i] for i in weighted]
            return
        tabs = at_depth[d]
        if any(nodes[i] is None or not nodes[i] for i in tabs):
            return
        lead = min(tabs, key=lambda i: len(nodes[i]))
        others = [i for i in tabs if i != lead]
        for value in nodes[lead]:
            if any(value not in nodes[i] for i in others):
                continue
            assignment[d] = value
            if any(not pred.holds(tuple(assignment[k] for k in idx)) for pred, idx in checks[d]):
                continue
            child = list(nodes)
            for i in tabs:
                child[i] = nodes[i][value]
            yield from expand(d + 1, child)

    yield from expand(0, [t.trie for t in live])
