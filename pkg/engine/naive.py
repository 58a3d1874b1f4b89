# 2026-10-19 | v0.3.0 | Reference evaluator
"""
naive.py

Nested-loop index join over the positive atoms, then every other atom
(negation, NAE, singleton filters) checked directly on the full assignment.
This is the quadratic route: it materializes the whole body join before
projecting. Used as the test oracle and the `naive` strategy.
"""

from __future__ import annotations

from config import NAIVE_BUDGET
from core.database import Database
from core.errors import NaiveBudgetExceeded, RangeRestrictionError
from query.ir import QueryIR


def _atom_order(ir: QueryIR) -> list:
    """Greedy: next atom shares the most already-bound variables (ties by position)."""
    remaining = list(ir.positive_atoms)
    bound: set = set()
    order = []
    while remaining:
        atom = max(remaining, key=lambda a: (len(bound.intersection(a.variables)), -remaining.index(a)))
        remaining.remove(atom)
        order.append(atom)
        bound.update(atom.variables)
    return order


def naive_eval(ir: QueryIR, db: Database, budget: int = NAIVE_BUDGET) -> set[tuple]:
    atoms = _atom_order(ir)
    covered = {v for a in atoms for v in a.variables}
    for var in ir.variables():
        if var not in covered:
            raise RangeRestrictionError(var)

    negated = [(a.variables, db.relation(a.relation).as_set()) for a in ir.negated_atoms]
    filters = [(f.variable, f.predicate) for f in ir.singleton_filters]

    # Per atom: positions of variables bound by earlier atoms -> index on those columns.
    plans = []
    bound: list = []
    for atom in atoms:
        rows = db.relation(atom.relation).rows()
        key_pos = [i for i, v in enumerate(atom.variables) if v in bound]
        index: dict[tuple, list] = {}
        for row in rows:
            index.setdefault(tuple(row[i] for i in key_pos), []).append(row)
        plans.append((atom.variables, [atom.variables[i] for i in key_pos], index))
        bound.extend(v for v in atom.variables if v not in bound)

    answers: set[tuple] = set()
    work = 0
    assignment: dict = {}

    def accept() -> bool:
        for variables, present in negated:
            if tuple(assignment[v] for v in variables) in present:
                return False
        for nae in ir.nae_atoms:
            if len({assignment[v] for v in nae}) < 2:
                return False
        return all(pred(assignment[v]) for v, pred in filters)

    def extend(depth: int):
        nonlocal work
        if depth == len(plans):
            if accept():
                answers.add(tuple(assignment[v] for v in ir.free_vars))
            return
        variables, key_vars, index = plans[depth]
        for row in index.get(tuple(assignment[v] for v in key_vars), ()):
            work += 1
            if work > budget:
                raise NaiveBudgetExceeded(f"naive evaluation passed {budget} steps")
            local: dict = {}
            if any(local.setdefault(v, x) != x or assignment.get(v, x) != x for v, x in zip(variables, row)):
                continue
            added = [v for v in local if v not in assignment]
            assignment.update(local)
            extend(depth + 1)
            for v in added:
                del assignment[v]

    extend(0)
    return answers
