# 2026-10-19 | v0.3.0 | InsideOut variable elimination over a semiring
"""
insideout.py

Eliminates the bound variables of an F-first ordering from last to first.
Each step joins the factors that mention the variable, filtered by the
indicator projections of every other factor meeting the step's bag, and
sums the variable out. What remains is joined over the free variables.

Predicates (NAE, negation-as-absence, singleton filters) ride along as
filters and are consumed by the first step whose bag contains them.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, Sequence

from core.database import Database
from core.errors import PlanError
from core.factor import Factor, PredicateFactor, indicator_projection, nae_predicate
from core.semiring import BOOLEAN, Semiring
from engine.join import TrieCache, generic_join
from planner.ordering import VertexOrdering
from query.ir import QueryIR

log = logging.getLogger(__name__)

StepHook = Callable[[str, Factor, list], Factor]


def eliminate_variable(factors: Sequence[Factor], v: str, semiring: Semiring,
                       predicates: Sequence[PredicateFactor] = (), order: dict[str, int] | None = None,
                       cache: TrieCache | None = None) -> Factor:
    """
    ψ(x_{J-v}) = ⊕_{x_v} ⊗_{f ∈ ∂(v)} f, evaluated only on tuples that
    survive every indicator projection onto J.
    """
    boundary = [f for f in factors if v in f.schema]
    if not boundary:
        raise PlanError(f"variable {v} occurs in no factor")
    bag = set().union(*(f.schema for f in boundary))
    own = [p for p in predicates if v in p.schema]
    for p in own:
        bag.update(p.schema)

    cache = cache or TrieCache()
    order = order or {}
    rank = {u: (1, 0) if u == v else (0, order.get(u, 0)) for u in bag}
    variables = sorted(bag, key=lambda u: (rank[u], u))
    position = {u: i for i, u in enumerate(variables)}

    tables = [cache.table(f, position, weighted=True) for f in boundary]
    for f in factors:
        if v not in f.schema and bag.intersection(f.schema):
            tables.append(cache.table(indicator_projection(f, bag), position, weighted=False))

    out: dict[tuple, object] = {}
    for assignment, values in generic_join(variables, tables, own):
        key = assignment[:-1]
        value = semiring.product(values)
        if key in out:
            out[key] = semiring.plus(out[key], value)
        else:
            out[key] = value
    return Factor.build(tuple(variables[:-1]), out, semiring)


def join_free(factors: Sequence[Factor], free: Sequence[str], semiring: Semiring,
              predicates: Sequence[PredicateFactor] = (), cache: TrieCache | None = None) -> Factor:
    """Product of the remaining factors, listed over the free variables."""
    free = tuple(free)
    position = {v: i for i, v in enumerate(free)}
    cache = cache or TrieCache()
    tables = [cache.table(f, position, weighted=True) for f in factors]
    out = {}
    for assignment, values in generic_join(free, tables, predicates):
        out[assignment] = semiring.product(values)
    return Factor.build(free, out, semiring)


def insideout_factors(factors: Iterable[Factor], predicates: Iterable[PredicateFactor], sigma: VertexOrdering,
                      free: Sequence[str], semiring: Semiring, on_step: StepHook | None = None) -> Factor:
    free = tuple(free)
    if set(sigma.sequence[: len(free)]) != set(free):
        raise PlanError(f"ordering {sigma.sequence} is not free-first for {free}")
    factors = list(factors)
    predicates = list(predicates)
    order = {v: i for i, v in enumerate(sigma.sequence)}
    cache = TrieCache()

    for v in reversed(sigma.sequence[len(free):]):
        if not any(v in f.schema for f in factors):
            if any(v in p.schema for p in predicates):
                raise PlanError(f"variable {v} is only constrained by predicates")
            continue
        result = eliminate_variable(factors, v, semiring, predicates, order, cache)
        factors = [f for f in factors if v not in f.schema]
        predicates = [p for p in predicates if v not in p.schema]
        if on_step is not None:
            result = on_step(v, result, factors)
        log.debug("[InsideOut] eliminated %s -> %d entries over %s", v, len(result), result.schema)
        if len(result) == 0:
            return Factor(free, {}, semiring)
        factors.append(result)

    stray = {v for f in factors for v in f.schema} - set(free)
    if stray:
        raise PlanError(f"ordering leaves {sorted(stray)} uneliminated")
    return join_free(factors, free, semiring, predicates, cache)


def query_predicates(ir: QueryIR) -> list[PredicateFactor]:
    """NAE atoms and singleton filters as membership predicates."""
    preds = [nae_predicate(nae) for nae in ir.nae_atoms]
    for flt in ir.singleton_filters:
        preds.append(PredicateFactor((flt.variable,), lambda key, p=flt.predicate: p(key[0]), flt.name))
    return preds


def insideout(ir: QueryIR, db: Database, sigma: VertexOrdering, semiring: Semiring = BOOLEAN,
              factors: Sequence[Factor] = (), predicates: Sequence[PredicateFactor] = (),
              on_step: StepHook | None = None) -> Factor:
    """
    Positive atoms become table factors valued `one`; NAE atoms and singleton
    filters become predicates. Extra factors and predicates are added as given.
    """
    if ir.negated_atoms:
        raise PlanError("insideout needs a query without negated atoms")
    tables = [Factor.from_relation(db.relation(a.relation), a.variables, semiring) for a in ir.positive_atoms]
    return insideout_factors(tables + list(factors), query_predicates(ir) + list(predicates),
                             sigma, ir.free_vars, semiring, on_step)
