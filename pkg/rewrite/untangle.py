# 2026-10-19 | v0.3.0 | Negated bounded-degree atoms -> NAE-form disjuncts
"""
untangle.py

¬R(X_S) with R = M_1 ⊎ ... ⊎ M_m (matchings) becomes ⋀_m ¬M_m, and each
¬M over pivot ℓ becomes |S| branches:

    W_i(X_i)                                   for i ≠ ℓ, W_i = Dom(X_i) ∖ π_i M
    ⋀_{j≠ℓ} M_ℓj(Y_j, X_j) ∧ NAE(X_ℓ, Y_j...)   M_ℓj = π_{ℓ,j} M

Distributing the branch choices gives the disjuncts.

This module:
- Registers the generated relations in the database (hidden `__` names)
- Keeps the branch bookkeeping for `rewrite` output
- Offers a padded mode: sentinel pivots fold the W branches into the
  NAE branch, so each matching contributes one branch
- Does NOT evaluate anything
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import prod

import numpy as np

from core.database import ColumnRef, Database, Dictionary, Relation, active_domain
from core.errors import DisjunctBudgetExceeded, RangeRestrictionError, UnknownVariable
from query.ir import Atom, QueryIR
from rewrite.matching import Matching, column_degree, matching_decompose

log = logging.getLogger(__name__)

UNTANGLE_BRANCH = "branch"
UNTANGLE_PADDED = "padded"


@dataclass(frozen=True)
class Branch:
    positive_atoms: tuple[Atom, ...] = ()
    nae_atoms: tuple[tuple[str, ...], ...] = ()
    label: str = ""


@dataclass(frozen=True)
class RewriteFragment:
    """Everything generated for one matching of one negated atom."""

    label: str
    atom: Atom
    matching: Matching
    pivot: str
    w_relations: dict = field(default_factory=dict)
    m_relations: dict = field(default_factory=dict)
    fresh: dict = field(default_factory=dict)
    branches: tuple[Branch, ...] = ()


@dataclass(frozen=True, eq=False)
class UntangledQuery:
    disjuncts: tuple[QueryIR, ...]
    database: Database
    fragments: tuple[RewriteFragment, ...]
    bound: int
    mode: str = UNTANGLE_BRANCH

    @property
    def B(self) -> int:
        return len(self.disjuncts)

    def fresh_variables(self, index: int) -> tuple[str, ...]:
        """Y variables introduced into disjunct `index`, in creation order."""
        source = set(self.disjuncts[index].variables())
        return tuple(y for frag in self.fragments for y in frag.fresh.values() if y in source)


def untangle_bound(degrees: list[tuple[int, int]]) -> int:
    """∏_S |S|^{|S|(deg_S - 1) + 1} over (arity, degree) pairs of non-empty negated atoms."""
    return prod(k ** (k * (ell - 1) + 1) for k, ell in degrees if ell > 0)


def _domain_ids(db: Database, var: str) -> np.ndarray:
    try:
        return np.array(sorted(active_domain(db, var)), dtype=np.int64)
    except UnknownVariable:
        raise RangeRestrictionError(var) from None


def negate_matching(M: Matching, atom: Atom, pivot: str, db: Database, label: str,
                    mode: str = UNTANGLE_BRANCH) -> tuple[RewriteFragment, list[Relation], dict[ColumnRef, str], dict]:
    """
    Returns the fragment, the relations to register, their column domains
    and any new dictionaries (padded mode only).
    """
    rel = M.relation
    variables = atom.variables
    ell = variables.index(pivot)
    source_domains = [db.column_domains[(atom.relation, i)] for i in range(rel.arity)]

    relations: list[Relation] = []
    domains: dict[ColumnRef, str] = {}
    dictionaries: dict[str, Dictionary] = {}

    missing = {}
    for i, var in enumerate(variables):
        if i != ell or rel.arity == 1:
            dom = _domain_ids(db, var)
            missing[i] = dom[~np.isin(dom, rel.column(i))]

    w_relations = {}
    if mode != UNTANGLE_PADDED or rel.arity == 1:
        for i, values in missing.items():
            w = Relation.from_rows(f"__W_{label}_{i}", (variables[i],), values.reshape(-1, 1))
            w_relations[i] = w
            relations.append(w)
            domains[(w.name, 0)] = source_domains[i]

    if rel.arity == 1:
        branch = Branch((Atom(w_relations[0].name, (pivot,)),), (), f"{label}:W0")
        return RewriteFragment(label, atom, M, pivot, w_relations, {}, {}, (branch,)), relations, domains, dictionaries

    pivot_domain = source_domains[ell]
    if mode == UNTANGLE_PADDED:
        base = db.dictionaries[pivot_domain]
        sentinels = tuple(f"⊥{label}_{j}" for j in range(rel.arity) if j != ell)
        padded_name = f"{pivot_domain}+⊥{label}"
        dictionaries[padded_name] = Dictionary(padded_name, tuple(base.values) + sentinels)
        pivot_domain = padded_name

    m_relations, fresh = {}, {}
    sentinel = len(db.dictionaries[source_domains[ell]])
    for j, var in enumerate(variables):
        if j == ell:
            continue
        y = f"_Y{label}_{j}"
        rows = rel.tuples[:, [ell, j]]
        if mode == UNTANGLE_PADDED:
            w = missing[j]
            rows = np.vstack([rows, np.column_stack([np.full(len(w), sentinel, dtype=np.int64), w])])
            sentinel += 1
        m = Relation.from_rows(f"__M_{label}_{ell}_{j}", (y, var), rows)
        m_relations[j] = m
        fresh[j] = y
        relations.append(m)
        domains[(m.name, 0)] = pivot_domain
        domains[(m.name, 1)] = source_domains[j]
    nae_branch = Branch(
        tuple(Atom(m.name, (fresh[j], variables[j])) for j, m in m_relations.items()),
        ((pivot,) + tuple(fresh.values()),),
        f"{label}:NAE",
    )
    w_branches = tuple(Branch((Atom(w.name, (variables[i],)),), (), f"{label}:W{i}") for i, w in w_relations.items())
    fragment = RewriteFragment(label, atom, M, pivot, w_relations, m_relations, fresh, w_branches + (nae_branch,))
    return fragment, relations, domains, dictionaries


def untangle_query(ir: QueryIR, db: Database, mode: str = UNTANGLE_BRANCH,
                   cap: int | None = None) -> UntangledQuery:
    """
    `ir` must be bound (distinct variables per atom, shared domains). The
    pivot of every negated atom is its first variable. With `cap`, more
    disjuncts than that raise DisjunctBudgetExceeded before any is built.
    """
    if not ir.negated_atoms:
        return UntangledQuery((ir,), db, (), 1, mode)

    fragments: list[RewriteFragment] = []
    relations: list[Relation] = []
    domains: dict[ColumnRef, str] = {}
    dictionaries: dict[str, Dictionary] = {}
    degrees = []
    for a, atom in enumerate(ir.negated_atoms):
        rel = db.relation(atom.relation)
        if len(rel) == 0:
            log.debug("[Untangle] !%s is over an empty relation, dropped", atom)
            continue
        degrees.append((rel.arity, column_degree(rel)))
        matchings = matching_decompose(rel)
        log.debug("[Untangle] !%s: degree %d, %d matchings", atom, degrees[-1][1], len(matchings))
        for m, matching in enumerate(matchings):
            label = f"{atom.relation}{a}m{m}"
            fragment, rels, doms, dicts = negate_matching(matching, atom, atom.variables[0], db, label, mode)
            fragments.append(fragment)
            relations.extend(rels)
            domains.update(doms)
            dictionaries.update(dicts)

    if dictionaries:
        db = Database(db.relations, {**db.dictionaries, **dictionaries}, db.column_domains, db.variables)
    db = db.with_relations(relations, domains)
    db = db.with_variables({y: [(frag.m_relations[j].name, 0)] for frag in fragments for j, y in frag.fresh.items()})

    count = prod(len(frag.branches) for frag in fragments)
    if cap is not None and count > cap:
        raise DisjunctBudgetExceeded(f"untangling yields {count} disjuncts > DISJUNCT_CAP={cap}")

    base = ir.replace(negated_atoms=())
    disjuncts = []
    for choice in itertools.product(*(frag.branches for frag in fragments)):
        disjuncts.append(base.replace(
            positive_atoms=base.positive_atoms + tuple(a for b in choice for a in b.positive_atoms),
            nae_atoms=base.nae_atoms + tuple(n for b in choice for n in b.nae_atoms),
        ))
    bound = untangle_bound(degrees)
    log.info("[Untangle] %d negated atoms -> B=%d disjuncts (bound %d, mode %s)",
             len(ir.negated_atoms), len(disjuncts), bound, mode)
    return UntangledQuery(tuple(disjuncts), db, tuple(fragments), bound, mode)
