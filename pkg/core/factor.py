# 2026-10-19 | v0.3.0 | Sparse factors and virtual predicate factors
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from core.database import Relation
from core.errors import EmptyProjection
from core.semiring import Semiring


@dataclass(frozen=True, eq=False)
class Factor:
    """
    A schema plus a finite map from tuples to semiring values. Zero is
    implicit outside the support and never stored.
    """

    schema: tuple[str, ...]
    entries: Mapping[tuple, Any]
    semiring: Semiring

    @classmethod
    def build(cls, schema: Sequence[str], entries: Mapping[tuple, Any] | Iterable[tuple[tuple, Any]],
              semiring: Semiring) -> "Factor":
        items = entries.items() if isinstance(entries, Mapping) else entries
        kept = {tuple(k): v for k, v in items if not semiring.is_zero(v)}
        return cls(tuple(schema), kept, semiring)

    @classmethod
    def from_relation(cls, relation: Relation, variables: Sequence[str], semiring: Semiring,
                      value: Any = None) -> "Factor":
        if len(variables) != relation.arity:
            raise ValueError(f"{relation.name}: {len(variables)} variables for arity {relation.arity}")
        one = semiring.one if value is None else value
        if semiring.is_zero(one):
            return cls(tuple(variables), {}, semiring)
        return cls(tuple(variables), {row: one for row in relation.rows()}, semiring)

    @classmethod
    def unit(cls, semiring: Semiring) -> "Factor":
        return cls((), {(): semiring.one}, semiring)

    def __len__(self) -> int:
        return len(self.entries)

    def value(self, key: tuple):
        return self.entries.get(tuple(key), self.semiring.zero)

    def support(self) -> set[tuple]:
        return set(self.entries)

    def reorder(self, schema: Sequence[str]) -> "Factor":
        schema = tuple(schema)
        if schema == self.schema:
            return self
        pos = [self.schema.index(v) for v in schema]
        return Factor(schema, {tuple(k[p] for p in pos): v for k, v in self.entries.items()}, self.semiring)

    def map_values(self, fn: Callable[[Any], Any], semiring: Semiring) -> "Factor":
        return Factor.build(self.schema, ((k, fn(v)) for k, v in self.entries.items()), semiring)


@dataclass(frozen=True, eq=False)
class PredicateFactor:
    """
    Virtual 0/1 factor: a membership test evaluated once every variable of
    its scope is bound. Never materialized and never used to generate
    values.
    """

    schema: tuple[str, ...]
    test: Callable[[tuple], bool] = field(repr=False)
    label: str = "predicate"

    def holds(self, key: tuple) -> bool:
        return bool(self.test(tuple(key)))


def nae_predicate(variables: Sequence[str], label: str = "NAE") -> PredicateFactor:
    return PredicateFactor(tuple(variables), lambda key: len(set(key)) > 1, label)


def absence_predicate(relation: Relation, variables: Sequence[str]) -> PredicateFactor:
    present = relation.as_set()
    return PredicateFactor(tuple(variables), lambda key: key not in present, f"!{relation.name}")


def indicator_projection(f: Factor, onto: Iterable[str]) -> Factor:
    """Existential projection of `f` onto `onto`, every kept value one."""
    onto = set(onto)
    keep = [i for i, v in enumerate(f.schema) if v in onto]
    if not keep:
        raise EmptyProjection(f"factor over {f.schema} shares no variable with {sorted(onto)}")
    one = f.semiring.one
    entries = {tuple(k[i] for i in keep): one for k in f.entries}
    return Factor(tuple(f.schema[i] for i in keep), entries, f.semiring)
