# 2026-10-19 | v0.3.0 | Column degree and greedy matching decomposition
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.database import Relation


def column_degree(rel: Relation) -> int:
    """Largest number of tuples sharing one value in one column (0 when empty)."""
    if len(rel) == 0 or rel.arity == 0:
        return 0
    return max(int(np.unique(rel.column(i), return_counts=True)[1].max()) for i in range(rel.arity))


def is_matching(rel: Relation) -> bool:
    return column_degree(rel) <= 1


@dataclass(frozen=True)
class Matching:
    """A relation whose distinct tuples differ in every coordinate."""

    relation: Relation

    def __post_init__(self):
        if not is_matching(self.relation):
            raise ValueError(f"{self.relation.name} is not a matching")

    @property
    def name(self) -> str:
        return self.relation.name

    def __len__(self) -> int:
        return len(self.relation)

    def pivot_of(self, column: int) -> dict[int, tuple]:
        """value at `column` -> the unique tuple holding it."""
        return {row[column]: row for row in self.relation.rows()}


def matching_decompose(rel: Relation) -> list[Matching]:
    """
    Greedy edge colouring: tuples in sorted order go to the lowest-index
    matching with no coordinate conflict. At most k(ℓ-1)+1 matchings.
    """
    used: list[list[set]] = []
    members: list[list[tuple]] = []
    for row in rel.rows():
        for index, columns in enumerate(used):
            if all(v not in columns[i] for i, v in enumerate(row)):
                break
        else:
            index = len(used)
            used.append([set() for _ in range(rel.arity)])
            members.append([])
        for i, v in enumerate(row):
            used[index][i].add(v)
        members[index].append(row)
    return [
        Matching(Relation.from_rows(f"{rel.name}#m{i}", rel.schema, rows))
        for i, rows in enumerate(members)
    ]
