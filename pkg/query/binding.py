# 2026-10-19 | v0.3.0 | Query validation and database binding
"""
binding.py

validate_query  arity, relation existence, dom columns, range restriction
bind_query      one shared id space per group of compared columns, hidden
                relations for dom declarations and repeated-variable atoms,
                variable -> column registry on the database
"""

from __future__ import annotations

from dataclasses import dataclass

from core.database import ColumnRef, Database, Relation
from core.errors import ArityMismatch, RangeRestrictionError, UnknownRelation
from query.ir import Atom, DomainDecl, QueryIR


@dataclass(frozen=True, eq=False)
class BoundQuery:
    """
    `ir` has only distinct variables per atom and its dom declarations
    turned into positive atoms over hidden `__D_<X>` relations; `database`
    has every compared column in one shared domain.
    """

    source: QueryIR
    ir: QueryIR
    database: Database


def _resolve_column(rel: Relation, decl: DomainDecl) -> int:
    column = decl.column
    if column.isdigit():
        position = int(column) - 1
        if not 0 <= position < rel.arity:
            raise ArityMismatch(f"dom column {decl} outside 1..{rel.arity}")
        return position
    if column not in rel.schema:
        raise ArityMismatch(f"relation {rel.name} has no column named {column}")
    return rel.schema.index(column)


def validate_query(ir: QueryIR, db: Database) -> QueryIR:
    for atom in ir.positive_atoms + ir.negated_atoms:
        if atom.relation not in db.relations:
            raise UnknownRelation(f"relation {atom.relation} is not in the database")
        arity = db.relations[atom.relation].arity
        if arity != len(atom.variables):
            raise ArityMismatch(f"{atom}: relation {atom.relation} has arity {arity}")

    decls = []
    for var, decl in ir.domain_decls:
        if decl.relation not in db.relations:
            raise UnknownRelation(f"relation {decl.relation} is not in the database")
        position = _resolve_column(db.relations[decl.relation], decl)
        decls.append((var, DomainDecl(decl.relation, decl.column, position)))

    guarded = ir.guarded_variables()
    for var in ir.variables():
        if var not in guarded:
            raise RangeRestrictionError(var)
    return ir.replace(domain_decls=tuple(decls))


# -------------------------------------------------
# Atom normalization
# -------------------------------------------------

def _distinct_atom(atom: Atom, rel: Relation, hidden_name: str) -> tuple[Atom, Relation, list[int]]:
    """
    R(X, Y, X) -> selection t0 = t2, projected to (X, Y). Returns the new
    atom, the relation it reads and the original positions it keeps.
    """
    groups: dict[str, list[int]] = {}
    for pos, var in enumerate(atom.variables):
        groups.setdefault(var, []).append(pos)
    if all(len(g) == 1 for g in groups.values()):
        return atom, rel, list(range(rel.arity))
    selected = rel.select_equal([g for g in groups.values() if len(g) > 1])
    keep = [g[0] for g in groups.values()]
    projected = selected.project(keep, name=hidden_name, schema=[rel.schema[p] for p in keep])
    return Atom(hidden_name, tuple(groups)), projected, keep


def bind_query(ir: QueryIR, db: Database) -> BoundQuery:
    ir = validate_query(ir, db)

    # Union-find over variables; each class shares one id space.
    parent: dict[str, str] = {v: v for v in ir.variables()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for nae in ir.nae_atoms:
        for other in nae[1:]:
            union(nae[0], other)

    refs_by_var: dict[str, list[ColumnRef]] = {v: [] for v in parent}
    for atom in ir.positive_atoms + ir.negated_atoms:
        for pos, var in enumerate(atom.variables):
            refs_by_var[var].append((atom.relation, pos))
    for var, decl in ir.domain_decls:
        refs_by_var[var].append((decl.relation, decl.position))

    classes: dict[str, list[ColumnRef]] = {}
    for var, refs in refs_by_var.items():
        classes.setdefault(find(var), []).extend(refs)
    db = db.unify_domains([refs for refs in classes.values() if len(refs) > 1])

    hidden: list[Relation] = []
    hidden_domains: dict[ColumnRef, str] = {}

    def normalize(atoms, prefix):
        out = []
        for index, atom in enumerate(atoms):
            rel = db.relation(atom.relation)
            new_atom, new_rel, keep = _distinct_atom(atom, rel, f"__{prefix}_{atom.relation}_{index}")
            if new_rel is not rel:
                hidden.append(new_rel)
                for new_pos, old_pos in enumerate(keep):
                    hidden_domains[(new_rel.name, new_pos)] = db.column_domains[(rel.name, old_pos)]
            out.append(new_atom)
        return tuple(out)

    positive = normalize(ir.positive_atoms, "S")
    negated = normalize(ir.negated_atoms, "N")

    dom_atoms = []
    for var, decl in ir.domain_decls:
        source = db.relation(decl.relation)
        name = f"__D_{var}"
        hidden.append(source.project([decl.position], name=name, schema=[var]))
        hidden_domains[(name, 0)] = db.column_domains[(decl.relation, decl.position)]
        dom_atoms.append(Atom(name, (var,)))

    db = db.with_relations(hidden, hidden_domains)
    bound_ir = ir.replace(
        positive_atoms=positive + tuple(dom_atoms),
        negated_atoms=negated,
        domain_decls=(),
    )
    registry: dict[str, list[ColumnRef]] = {}
    for atom in bound_ir.positive_atoms:
        for pos, var in enumerate(atom.variables):
            registry.setdefault(var, []).append((atom.relation, pos))
    return BoundQuery(ir, bound_ir, db.with_variables(registry))
