# 2026-10-19 | v0.3.0 | Query intermediate representation
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable


@dataclass(frozen=True)
class Atom:
    relation: str
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(self.variables)})"


@dataclass(frozen=True)
class DomainDecl:
    """`dom(X, R.col)`: column written 1-based or by name; position is 0-based once resolved."""

    relation: str
    column: str
    position: int | None = None

    def __str__(self) -> str:
        return f"{self.relation}.{self.column}"


@dataclass(frozen=True)
class SingletonFilter:
    variable: str
    name: str
    predicate: Callable[[int], bool] = field(compare=False, repr=False)


@dataclass(frozen=True)
class QueryIR:
    """
    free_vars        F, in head order
    positive_atoms   R_S(X_S)
    negated_atoms    ¬R_S(X_S), stored relations only
    nae_atoms        NAE(X_S), arity ≥ 2 (binary = disequality)
    singleton_filters unary predicates attached by rewriting passes
    domain_decls     (variable, DomainDecl) pairs
    """

    name: str = "Q"
    free_vars: tuple[str, ...] = ()
    positive_atoms: tuple[Atom, ...] = ()
    negated_atoms: tuple[Atom, ...] = ()
    nae_atoms: tuple[tuple[str, ...], ...] = ()
    singleton_filters: tuple[SingletonFilter, ...] = ()
    domain_decls: tuple[tuple[str, DomainDecl], ...] = ()

    def replace(self, **changes) -> "QueryIR":
        return replace(self, **changes)

    @property
    def domains(self) -> dict[str, DomainDecl]:
        return dict(self.domain_decls)

    def variables(self) -> tuple[str, ...]:
        """All variables, in order of first appearance."""
        seen: dict[str, None] = dict.fromkeys(self.free_vars)
        for atom in self.positive_atoms + self.negated_atoms:
            seen.update(dict.fromkeys(atom.variables))
        for nae in self.nae_atoms:
            seen.update(dict.fromkeys(nae))
        for var, _ in self.domain_decls:
            seen[var] = None
        for flt in self.singleton_filters:
            seen[flt.variable] = None
        return tuple(seen)

    def bound_variables(self) -> tuple[str, ...]:
        free = set(self.free_vars)
        return tuple(v for v in self.variables() if v not in free)

    def nae_variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for nae in self.nae_atoms:
            seen.update(dict.fromkeys(nae))
        return tuple(seen)

    def guarded_variables(self) -> set[str]:
        out = {v for atom in self.positive_atoms for v in atom.variables}
        out.update(var for var, _ in self.domain_decls)
        return out

    @property
    def is_positive(self) -> bool:
        return not self.negated_atoms and not self.nae_atoms
