# 2026-10-19 | v0.3.0 | Colorings as a join: color variables, FD factors, virtual NAE
"""
color_join.py

    ⋁_{f∈F}  ⋀ R_S(X_S) ∧ ⋀_{i∈U} [f(X_i) = C_i] ∧ ⋀_{S∈A} NAE(C_S)

This module:
- Extends the query hypergraph H with one color variable C_i per NAE
  variable, a functional edge {X_i, C_i} and the color edges C_S
- Evaluates the extended query over BitVector(|F|): bit f of an FD entry
  (x, col) is set iff f(x) = col
- Does NOT materialize NAE(C_S); it is a membership predicate
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from coloring.chromatic import NaeStructure, variable_values
from coloring.families import ColorFamily
from config import BIT_BUDGET
from core.database import Database
from core.errors import PlanError
from core.factor import Factor, nae_predicate
from core.hypergraph import Hypergraph
from core.semiring import BOOLEAN, BitVectorSemiring
from engine.insideout import insideout_factors, query_predicates
from planner.ordering import VertexOrdering
from query.ir import QueryIR

log = logging.getLogger(__name__)


def color_name(variable: str) -> str:
    """Not a parser identifier, so it never collides with a query variable."""
    return f"C({variable})"


@dataclass(frozen=True, eq=False)
class ColorJoinIR:
    body: Hypergraph                          # H over the input variables
    colors: Mapping[str, str]                 # X_i -> C_i, in U order
    nae_edges: tuple[tuple[str, ...], ...]    # C_S
    free: tuple[str, ...] = ()
    c: int = 1
    family: ColorFamily | None = field(default=None, repr=False)

    @property
    def inputs(self) -> dict[str, str]:
        return {col: x for x, col in self.colors.items()}

    @property
    def functional_edges(self) -> tuple[frozenset, ...]:
        return tuple(frozenset((x, col)) for x, col in self.colors.items())

    @property
    def hypergraph(self) -> Hypergraph:
        """H′ = H + functional edges + color edges."""
        return self.body.add_edges(self.functional_edges + tuple(frozenset(e) for e in self.nae_edges))

    def is_color(self, v) -> bool:
        return v in self.inputs

    def fd_determined(self, color: str, bag) -> bool:
        return self.inputs[color] in bag

    def free_colors(self, bag) -> frozenset:
        """Color variables of `bag` whose input variable is not in it."""
        return frozenset(v for v in bag if self.is_color(v) and not self.fd_determined(v, bag))


def colors_as_join(disjunct: QueryIR, c: int, family: ColorFamily | None = None) -> ColorJoinIR:
    body = Hypergraph.of((a.variables for a in disjunct.positive_atoms), disjunct.free_vars)
    U = Hypergraph.of(disjunct.nae_atoms).vertices
    colors = {x: color_name(x) for x in U}
    edges = tuple(tuple(colors[x] for x in nae) for nae in disjunct.nae_atoms)
    log.debug("[ColorJoin] %d color variables, %d color edges", len(colors), len(edges))
    return ColorJoinIR(body, colors, edges, tuple(disjunct.free_vars), c, family)


# =====================================================
# EVALUATION
# =====================================================

def fd_factors(cj: ColorJoinIR, disjunct: QueryIR, db: Database, structure: NaeStructure,
               functions: np.ndarray, semiring: BitVectorSemiring) -> list[Factor]:
    """[f(X_i) = C_i] over (X_i, C_i); bit f set iff f(x) = col."""
    out = []
    for x_var, c_var in cj.colors.items():
        values = variable_values(disjunct, db, x_var)
        images = functions[:, structure.index(values)]                  # (|F|, m)
        entries = {}
        for col in range(cj.c):
            packed = semiring.from_bit_matrix((images == col).T)
            entries.update({(int(x), col): bits for x, bits in zip(values, packed)})
        out.append(Factor.build((x_var, c_var), entries, semiring))
    return out


def _eval_members(cj: ColorJoinIR, disjunct: QueryIR, db: Database, structure: NaeStructure,
                  functions: np.ndarray, sigma: VertexOrdering, on_step) -> set[tuple]:
    semiring = BitVectorSemiring(len(functions))
    tables = [Factor.from_relation(db.relation(a.relation), a.variables, semiring) for a in disjunct.positive_atoms]
    tables += fd_factors(cj, disjunct, db, structure, functions, semiring)
    predicates = query_predicates(disjunct.replace(nae_atoms=()))
    predicates += [nae_predicate(edge, "NAE(C)") for edge in cj.nae_edges]
    result = insideout_factors(tables, predicates, sigma, disjunct.free_vars, semiring, on_step)
    return set(result.entries)


def eval_colors_join(disjunct: QueryIR, cj: ColorJoinIR, structure: NaeStructure, db: Database,
                     sigma: VertexOrdering, bit_budget: int = BIT_BUDGET, on_step=None) -> Factor:
    """
    Answers of one NAE-form disjunct through H′. `sigma` orders H′ (F-first);
    `on_step` is the InsideOut step hook, e.g. a SymmetryPruner.
    """
    if cj.family is None:
        raise PlanError("colors-as-join evaluation needs a color family")
    if disjunct.negated_atoms:
        raise PlanError("colors-as-join needs a disjunct without negated atoms")
    sigma.check(cj.hypergraph)
    functions = cj.family.matrix()
    answers: set[tuple] = set()
    if len(functions):
        step = max(1, bit_budget)
        for start in range(0, len(functions), step):
            answers |= _eval_members(cj, disjunct, db, structure, functions[start:start + step], sigma, on_step)
    return Factor.build(disjunct.free_vars, {a: True for a in answers}, BOOLEAN)
