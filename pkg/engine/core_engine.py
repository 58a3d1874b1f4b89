# 2026-10-19 | v0.3.0 | Query pipeline: untangle, color-code, evaluate
"""
core_engine.py

The query pipeline shared by `run`, `plan` and `bench`.

This module:
- Binds a parsed query to a database
- Plans the body: optimal F-first ordering and its fractional width
- Untangles negated atoms into NAE-form disjuncts
- Per disjunct: NAE structure, c and p, color family, tensor decomposition
  (or colors-as-join with an amended ordering)
- Evaluates every disjunct and unions the answers
- Offers the direct (predicate) and naive strategies on the bound query
- Does NOT parse text, read CSVs or write reports
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from coloring.chromatic import NaeStructure, nae_structure, variable_values
from coloring.families import ColorFamily, build_family
from coloring.tensor import TensorDecomposition, tensor_decomposition
from config import STRATEGIES, EngineConfig
from core.database import Database
from core.errors import BudgetExceeded, NaeLabError, PlanError
from core.factor import Factor, absence_predicate
from core.hypergraph import Hypergraph
from core.seeding import SeedStreams
from core.semiring import BOOLEAN
from engine.insideout import insideout, insideout_factors, query_predicates
from engine.naive import naive_eval
from engine.tensor_eval import eval_with_tensor
from optimizer.amendment import amended_ordering
from optimizer.color_join import ColorJoinIR, colors_as_join, eval_colors_join
from optimizer.symmetry import SymmetryPruner
from planner.decomposition import TreeDecomposition
from planner.ordering import VertexOrdering, induced_fhtw, plan_ordering
from planner.simplex import WidthEstimate, fractional_edge_cover
from query.binding import BoundQuery, bind_query
from query.ir import QueryIR
from rewrite.untangle import UntangledQuery, untangle_query

log = logging.getLogger(__name__)


# =====================================================
# PLAN
# =====================================================

@dataclass(eq=False)
class DisjunctPlan:
    index: int
    ir: QueryIR
    sigma: VertexOrdering
    width: WidthEstimate
    strategy: str
    fresh: tuple = ()
    structure: NaeStructure | None = None
    family: ColorFamily | None = None
    decomposition: TensorDecomposition | None = None
    color_join: ColorJoinIR | None = None
    amended: TreeDecomposition | None = None
    pi: VertexOrdering | None = None
    empty: bool = False                   # NAE part unsatisfiable on this database

    @property
    def c(self) -> int | None:
        return self.structure.c if self.structure else None

    @property
    def r(self) -> int:
        if self.decomposition is not None:
            return self.decomposition.r
        if self.family is not None:
            return self.family.size
        return 0 if self.empty else 1

    @property
    def theta(self) -> Fraction | None:
        return self.family.theta if self.family else None


@dataclass(eq=False)
class Plan:
    query: BoundQuery
    requested: str
    strategy: str
    body: Hypergraph
    sigma: VertexOrdering
    width: WidthEstimate
    database: Database
    untangled: UntangledQuery | None = None
    disjuncts: list[DisjunctPlan] = field(default_factory=list)
    switched: bool = False

    @property
    def B(self) -> int:
        return self.untangled.B if self.untangled else 1

    @property
    def cost(self) -> int:
        """Σ over disjuncts of the rank actually evaluated (B·r for equal ranks)."""
        return sum(d.r for d in self.disjuncts) if self.disjuncts else 1


@dataclass(eq=False)
class QueryResult:
    plan: Plan
    answers: set[tuple]
    timings: dict = field(default_factory=dict)      # disjunct index (or strategy) -> ms
    counts: dict = field(default_factory=dict)       # disjunct index -> answers found
    pruned: int = 0

    @property
    def rows(self) -> list[tuple]:
        return sorted(self.answers)


def _family_key(structure: NaeStructure, mode: str) -> tuple:
    G = structure.G
    position = {v: i for i, v in enumerate(G.vertices)}
    edges = tuple(tuple(sorted(position[v] for v in e)) for e in G.edges)
    return len(G.vertices), edges, structure.N, structure.c, mode


def _direct_cover(positive: Hypergraph):
    """Only positive atoms cover bags; extra predicate edges just shape the ordering."""
    return lambda _H, bag: fractional_edge_cover(positive, bag)


# =====================================================
# ENGINE
# =====================================================

class QueryEngine:

    def __init__(self, db: Database, config: EngineConfig = EngineConfig()):
        if config.strategy not in STRATEGIES:
            raise PlanError(f"unknown strategy {config.strategy}")
        self.db = db
        self.config = config
        self.streams = SeedStreams(config.seed)
        self._families: dict[tuple, ColorFamily] = {}

    # -------------------------------------------------
    # Planning
    # -------------------------------------------------

    def bind(self, ir: QueryIR) -> BoundQuery:
        return bind_query(ir, self.db)

    def plan(self, ir: QueryIR) -> Plan:
        bound = self.bind(ir)
        q, db = bound.ir, bound.database
        body = Hypergraph.of((a.variables for a in q.positive_atoms), q.free_vars)
        strategy = self.config.strategy

        if strategy == "direct" or strategy == "naive":
            sigma, width = self._direct_ordering(q, body)
            return Plan(bound, strategy, strategy, body, sigma, width, db)

        sigma, width = plan_ordering(body, q.free_vars, self.config.ordering_dp_cap)
        log.info("[Engine] body: %d variables, fhtw_F = %s%s", len(body), width.value,
                 " (heuristic)" if sigma.heuristic else "")
        effective = "tensor" if strategy == "auto" else strategy
        try:
            untangled = untangle_query(q, db, self.config.untangle_mode, self.config.disjunct_cap)
            plan = Plan(bound, strategy, effective, body, sigma, width, untangled.database, untangled)
            for index, disjunct in enumerate(untangled.disjuncts):
                plan.disjuncts.append(self._plan_disjunct(index, disjunct, untangled, sigma, effective))
        except BudgetExceeded as exc:
            if strategy != "auto":
                raise
            log.warning("[Engine] %s; switching to the direct strategy", exc)
            sigma, width = self._direct_ordering(q, body)
            return Plan(bound, strategy, "direct", body, sigma, width, db, switched=True)
        return plan

    def _direct_ordering(self, q: QueryIR, body: Hypergraph) -> tuple[VertexOrdering, WidthEstimate]:
        extra = [a.variables for a in q.negated_atoms] + list(q.nae_atoms)
        H = body.add_edges(extra)
        return plan_ordering(H, q.free_vars, self.config.ordering_dp_cap, _direct_cover(body))

    def _plan_disjunct(self, index: int, disjunct: QueryIR, untangled: UntangledQuery,
                       body_sigma: VertexOrdering, strategy: str) -> DisjunctPlan:
        db = untangled.database
        fresh = untangled.fresh_variables(index)
        sigma = VertexOrdering(body_sigma.sequence + fresh, body_sigma.free, body_sigma.heuristic)
        H = Hypergraph.of((a.variables for a in disjunct.positive_atoms), disjunct.free_vars)
        width = induced_fhtw(H, sigma)
        plan = DisjunctPlan(index, disjunct, sigma, width, strategy, fresh)
        if not disjunct.nae_atoms:
            return plan

        structure = nae_structure(disjunct, db, self.config.quotient_cap)
        plan.structure = structure
        if structure.N == 0 or (structure.exact and not structure.quotients):
            log.info("[Engine] disjunct %d: NAE part unsatisfiable (N=%d)", index, structure.N)
            plan.empty = True
            return plan
        if any(len(variable_values(disjunct, db, v)) == 0 for v in structure.U):
            log.info("[Engine] disjunct %d: an NAE variable has no candidate values", index)
            plan.empty = True
            return plan

        plan.family = self._family(index, structure)
        if strategy == "colors-join":
            plan.color_join = colors_as_join(disjunct, structure.c, plan.family)
            plan.amended, plan.pi = amended_ordering(plan.color_join, sigma)
        else:
            plan.decomposition = tensor_decomposition(structure.G, structure.c, plan.family,
                                                      self.config.verify_budget)
        log.debug("[Engine] disjunct %d: |U|=%d N=%d c=%d |F|=%d r=%d", index, len(structure.U),
                  structure.N, structure.c, plan.family.size, plan.r)
        return plan

    def _family(self, index: int, structure: NaeStructure) -> ColorFamily:
        key = _family_key(structure, self.config.family_mode)
        if key not in self._families:
            self._families[key] = build_family(structure, self.config.family_mode, self.streams,
                                               self.config, label=f"disjunct{index}")
        return self._families[key]

    # -------------------------------------------------
    # Execution
    # -------------------------------------------------

    def execute(self, plan: Plan) -> QueryResult:
        result = QueryResult(plan, set())
        q = plan.query.ir
        if plan.strategy == "naive":
            start = time.perf_counter()
            result.answers = naive_eval(q, plan.database, self.config.naive_budget)
            result.timings["naive"] = (time.perf_counter() - start) * 1000
            return result
        if plan.strategy == "direct":
            start = time.perf_counter()
            result.answers = set(self._eval_direct(q, plan).entries)
            result.timings["direct"] = (time.perf_counter() - start) * 1000
            return result

        for d in plan.disjuncts:
            start = time.perf_counter()
            try:
                found = self._eval_disjunct(d, plan.database, result)
            except NaeLabError as exc:
                exc.add_note(f"while evaluating disjunct {d.index}: {d.ir.name}")
                log.error("[Engine] disjunct %d failed: %s", d.index, exc)
                raise
            result.timings[d.index] = (time.perf_counter() - start) * 1000
            result.counts[d.index] = len(found)
            result.answers |= found
        log.info("[Engine] %d disjuncts, %d answers", len(plan.disjuncts), len(result.answers))
        return result

    def _eval_direct(self, q: QueryIR, plan: Plan) -> Factor:
        db = plan.database
        tables = [Factor.from_relation(db.relation(a.relation), a.variables, BOOLEAN) for a in q.positive_atoms]
        predicates = query_predicates(q)
        predicates += [absence_predicate(db.relation(a.relation), a.variables) for a in q.negated_atoms]
        return insideout_factors(tables, predicates, plan.sigma, q.free_vars, BOOLEAN)

    def _eval_disjunct(self, d: DisjunctPlan, db: Database, result: QueryResult) -> set[tuple]:
        if d.empty:
            return set()
        if d.structure is None:
            return set(insideout(d.ir, db, d.sigma).entries)
        if d.color_join is not None:
            pruner = SymmetryPruner(d.color_join) if self.config.symmetry_pruning else None
            found = eval_colors_join(d.ir, d.color_join, d.structure, db, d.pi, self.config.bit_budget, pruner)
            if pruner is not None:
                result.pruned += pruner.pruned
            return set(found.entries)
        return set(eval_with_tensor(d.ir, d.decomposition, d.structure, db, d.sigma,
                                    self.config.bit_budget).entries)

    def answer(self, ir: QueryIR) -> QueryResult:
        return self.execute(self.plan(ir))


def answer_query(ir: QueryIR, db: Database, config: EngineConfig = EngineConfig()) -> set[tuple]:
    """Answer tuples over the free variables, as value ids of the bound database."""
    return QueryEngine(db, config).answer(ir).answers
