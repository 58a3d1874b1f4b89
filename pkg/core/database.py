# 2026-10-19 | v0.3.0 | Dictionary-encoded relations and database
"""
database.py

In-memory database of dictionary-encoded relations.

This module:
- Encodes raw string tables into dense integer ids (first-seen order per column)
- Keeps relations duplicate-free and sorted lexicographically
- Merges column dictionaries into shared variable domains once a query binds them
- Resolves active domains of bound variables
- Does NOT evaluate queries
- Does NOT persist anything
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from core.errors import IngestError, UnknownRelation, UnknownVariable

ColumnRef = tuple[str, int]


def _sorted_unique(tuples: np.ndarray, arity: int) -> np.ndarray:
    if arity == 0:
        return np.zeros((1 if len(tuples) else 0, 0), dtype=np.int64)
    if len(tuples) == 0:
        return np.zeros((0, arity), dtype=np.int64)
    return np.unique(np.asarray(tuples, dtype=np.int64).reshape(-1, arity), axis=0)


# =====================================================
# DICTIONARY
# =====================================================

@dataclass(frozen=True, eq=False)
class Dictionary:
    """Bidirectional value <-> id map of one domain."""

    name: str
    values: tuple[str, ...]
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.values)})

    def __len__(self) -> int:
        return len(self.values)

    def encode(self, value: str) -> int:
        return self._index[value]

    def decode(self, ident: int) -> str:
        return self.values[ident]


# =====================================================
# RELATION
# =====================================================

@dataclass(frozen=True, eq=False)
class Relation:
    name: str
    schema: tuple[str, ...]
    tuples: np.ndarray

    @classmethod
    def from_rows(cls, name: str, schema: Sequence[str], rows) -> "Relation":
        arity = len(schema)
        array = np.asarray(rows if isinstance(rows, np.ndarray) else list(rows), dtype=np.int64)
        if arity:
            array = array.reshape(-1, arity)
        return cls(name, tuple(schema), _sorted_unique(array, arity))

    def __post_init__(self):
        self.tuples.setflags(write=False)

    def __len__(self) -> int:
        return int(self.tuples.shape[0])

    @property
    def arity(self) -> int:
        return len(self.schema)

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.tuples]

    def as_set(self) -> frozenset:
        return frozenset(self.rows())

    def column(self, position: int) -> np.ndarray:
        return self.tuples[:, position]

    def rename(self, name: str | None = None, schema: Sequence[str] | None = None) -> "Relation":
        return Relation(name or self.name, tuple(schema or self.schema), self.tuples)

    def project(self, positions: Sequence[int], name: str | None = None,
                schema: Sequence[str] | None = None) -> "Relation":
        positions = list(positions)
        sub = self.tuples[:, positions] if positions else np.zeros((len(self), 0), dtype=np.int64)
        new_schema = tuple(schema) if schema is not None else tuple(self.schema[p] for p in positions)
        return Relation(name or self.name, new_schema, _sorted_unique(sub, len(positions)))

    def select_equal(self, groups: Sequence[Sequence[int]]) -> "Relation":
        """Keep tuples whose positions agree inside every group."""
        mask = np.ones(len(self), dtype=bool)
        for group in groups:
            first = group[0]
            for other in group[1:]:
                mask &= self.tuples[:, first] == self.tuples[:, other]
        return Relation(self.name, self.schema, self.tuples[mask])


# =====================================================
# DATABASE
# =====================================================

@dataclass(frozen=True, eq=False)
class Database:
    relations: Mapping[str, Relation]
    dictionaries: Mapping[str, Dictionary]
    column_domains: Mapping[ColumnRef, str]
    variables: Mapping[str, tuple[ColumnRef, ...]] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return max((len(r) for r in self.relations.values()), default=0)

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise UnknownRelation(f"relation {name} is not in the database") from None

    def domain(self, ref: ColumnRef) -> Dictionary:
        return self.dictionaries[self.column_domains[ref]]

    def variable_domain(self, var: str) -> Dictionary:
        refs = self.variables.get(var)
        if not refs:
            raise UnknownVariable(f"variable {var} is not bound to any column")
        return self.domain(refs[0])

    def decode(self, var: str, ident: int) -> str:
        return self.variable_domain(var).decode(ident)

    # -------------------------------------------------
    # Derived databases
    # -------------------------------------------------

    def with_relations(self, relations: Iterable[Relation],
                       domains: Mapping[ColumnRef, str] | None = None) -> "Database":
        rels = dict(self.relations)
        cols = dict(self.column_domains)
        for rel in relations:
            rels[rel.name] = rel
        cols.update(domains or {})
        return Database(rels, self.dictionaries, cols, self.variables)

    def with_variables(self, variables: Mapping[str, Iterable[ColumnRef]]) -> "Database":
        merged = dict(self.variables)
        for var, refs in variables.items():
            merged[var] = tuple(dict.fromkeys(tuple(merged.get(var, ())) + tuple(refs)))
        return Database(self.relations, self.dictionaries, self.column_domains, merged)

    def unify_domains(self, groups: Iterable[Iterable[ColumnRef]]) -> "Database":
        """
        Merge the dictionaries of every group of columns into one shared
        domain and re-encode the affected relations. Overlapping groups are
        merged transitively.
        """
        parent: dict[str, str] = {}

        def find(d):
            parent.setdefault(d, d)
            while parent[d] != d:
                parent[d] = parent[parent[d]]
                d = parent[d]
            return d

        for group in groups:
            names = [self.column_domains[ref] for ref in group]
            for other in names[1:]:
                ra, rb = find(names[0]), find(other)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

        classes: dict[str, list[str]] = {}
        for d in self.dictionaries:
            classes.setdefault(find(d), []).append(d)
        if all(len(members) == 1 for members in classes.values()):
            return self

        dictionaries = dict(self.dictionaries)
        remap: dict[str, tuple[str, np.ndarray]] = {}
        for root, members in classes.items():
            if len(members) == 1:
                continue
            merged = pd.unique(pd.Series(
                [v for d in members for v in self.dictionaries[d].values], dtype=object))
            name = "+".join(members)
            dictionaries[name] = Dictionary(name, tuple(merged))
            index = pd.Index(merged)
            for d in members:
                remap[d] = (name, index.get_indexer(list(self.dictionaries[d].values)).astype(np.int64))
                del dictionaries[d]

        column_domains = dict(self.column_domains)
        relations = dict(self.relations)
        for rel in self.relations.values():
            touched = False
            cols = rel.tuples.copy()
            for pos in range(rel.arity):
                ref = (rel.name, pos)
                old = self.column_domains.get(ref)
                if old in remap:
                    new_name, table = remap[old]
                    column_domains[ref] = new_name
                    if len(cols):
                        cols[:, pos] = table[cols[:, pos]]
                    touched = True
            if touched:
                relations[rel.name] = Relation(rel.name, rel.schema, _sorted_unique(cols, rel.arity))
        return Database(relations, dictionaries, column_domains, self.variables)

    # -------------------------------------------------
    # Constructors
    # -------------------------------------------------

    @classmethod
    def from_id_relations(cls, tables: Mapping[str, tuple[Sequence[str], Iterable[Sequence[int]]]],
                          domain_size: int | None = None) -> "Database":
        """
        Build a database whose tuples are already ids of one shared domain
        ("id"), value i <-> id i. Handy for generated workloads and tests.
        """
        relations = {}
        largest = -1
        for name, (schema, rows) in tables.items():
            rel = Relation.from_rows(name, schema, list(rows))
            relations[name] = rel
            if len(rel) and rel.arity:
                largest = max(largest, int(rel.tuples.max()))
        size = max(domain_size or 0, largest + 1)
        dictionary = Dictionary("id", tuple(str(i) for i in range(size)))
        columns = {(name, pos): "id" for name, rel in relations.items() for pos in range(rel.arity)}
        return cls(relations, {"id": dictionary}, columns)


# =====================================================
# OPERATIONS
# =====================================================

def encode_database(tables: Iterable[tuple[str, Sequence[str], Iterable[Sequence[str]]]]) -> Database:
    """
    Dictionary-encode raw tables. Every column starts with its own domain
    `<table>.<position>`; ids follow first-seen order. Duplicate rows
    collapse.
    """
    relations = {}
    dictionaries = {}
    column_domains = {}
    for name, columns, rows in tables:
        arity = len(columns)
        rows = [tuple(r) for r in rows]
        for index, row in enumerate(rows):
            if len(row) != arity:
                raise IngestError(name, index, f"expected {arity} values, found {len(row)}")
        codes = np.zeros((len(rows), arity), dtype=np.int64)
        for pos in range(arity):
            values = [str(row[pos]) for row in rows]
            ids, uniques = pd.factorize(pd.Series(values, dtype=object), sort=False)
            domain = f"{name}.{pos}"
            dictionaries[domain] = Dictionary(domain, tuple(str(u) for u in uniques))
            column_domains[(name, pos)] = domain
            codes[:, pos] = ids
        relations[name] = Relation(name, tuple(columns), _sorted_unique(codes, arity))
    return Database(relations, dictionaries, column_domains)


def active_domain(db: Database, var: str) -> frozenset[int]:
    """Union of the ids in every column the variable is bound to."""
    refs = db.variables.get(var)
    if not refs:
        raise UnknownVariable(f"variable {var} is not bound to any column")
    values: set[int] = set()
    for rel_name, pos in refs:
        values.update(int(v) for v in np.unique(db.relation(rel_name).column(pos)))
    return frozenset(values)


def decode_rows(db: Database, variables: Sequence[str], rows: Iterable[Sequence[int]]) -> list[tuple[str, ...]]:
    dictionaries = [db.variable_domain(v) for v in variables]
    return [tuple(d.decode(int(i)) for d, i in zip(dictionaries, row)) for row in rows]
