# 2026-10-19 | v0.3.0 | NAE-form disjuncts over the BitVector(r) semiring
"""
tensor_eval.py

φ(x_F) = ⊕ ⊗_S ψ_S(x_S) ⊗ ⊗_{i∈U} ψ̄_i(x_i)  over BitVector(r), and the
answer is every x_F with φ(x_F) ≠ 0.

This module:
- Builds the singleton factors ψ̄_i from a TensorDecomposition
- Runs InsideOut once per chunk of the family when r exceeds the bit budget
- Offers the per-term Boolean evaluation used as a batching oracle
- Does NOT construct families or decompositions
"""

from __future__ import annotations

import logging

import numpy as np

from coloring.chromatic import NaeStructure, variable_values
from coloring.tensor import TensorDecomposition
from config import BIT_BUDGET
from core.database import Database
from core.errors import PlanError
from core.factor import Factor, PredicateFactor
from core.hypergraph import Hypergraph
from core.semiring import BOOLEAN, BitVectorSemiring
from engine.insideout import insideout, insideout_factors, query_predicates
from planner.ordering import VertexOrdering
from query.ir import QueryIR

log = logging.getLogger(__name__)


def _edge_multiset(G: Hypergraph) -> list:
    return sorted(tuple(sorted(map(str, e))) for e in G.edges)


def check_structure(disjunct: QueryIR, decomposition: TensorDecomposition) -> None:
    G = Hypergraph.of(disjunct.nae_atoms)
    if _edge_multiset(G) != _edge_multiset(decomposition.G):
        raise PlanError(f"decomposition built for {_edge_multiset(decomposition.G)}, "
                        f"disjunct has NAE edges {_edge_multiset(G)}")


def unary_factors(disjunct: QueryIR, db: Database, structure: NaeStructure,
                  decomposition: TensorDecomposition, semiring: BitVectorSemiring) -> list[Factor]:
    """ψ̄_i over the values X_i can take; values with an all-zero vector are dropped."""
    if semiring.r != decomposition.r:
        raise PlanError(f"BitVector({semiring.r}) for a decomposition of rank {decomposition.r}")
    functions = decomposition.family.matrix()
    out = []
    for var in decomposition.U:
        values = variable_values(disjunct, db, var)
        bits = decomposition.unary_bits(var, structure.index(values), functions)
        packed = semiring.from_bit_matrix(bits)
        out.append(Factor.build((var,), {(int(x),): v for x, v in zip(values, packed)}, semiring))
    return out


def _as_answers(result: Factor, free: tuple) -> set[tuple]:
    return set(result.reorder(free).entries) if result.schema else set(result.entries)


def _eval_chunk(disjunct: QueryIR, db: Database, structure: NaeStructure,
                decomposition: TensorDecomposition, sigma: VertexOrdering, on_step=None) -> set[tuple]:
    if decomposition.r == 0:
        return set()
    semiring = BitVectorSemiring(decomposition.r)
    tables = [Factor.from_relation(db.relation(a.relation), a.variables, semiring) for a in disjunct.positive_atoms]
    tables += unary_factors(disjunct, db, structure, decomposition, semiring)
    # NAE atoms are carried by the ψ̄ factors; only singleton filters remain.
    predicates = query_predicates(disjunct.replace(nae_atoms=()))
    result = insideout_factors(tables, predicates, sigma, disjunct.free_vars, semiring, on_step)
    return _as_answers(result, disjunct.free_vars)


def chunk_bounds(decomposition: TensorDecomposition, bit_budget: int) -> list[tuple[int, int]]:
    """Family member ranges whose rank P·|chunk| stays within the bit budget."""
    colorings = max(len(decomposition.colorings), 1)
    size = decomposition.family.size
    step = max(1, bit_budget // colorings)
    return [(start, min(start + step, size)) for start in range(0, size, step)]


def eval_with_tensor(disjunct: QueryIR, decomposition: TensorDecomposition, structure: NaeStructure,
                     db: Database, sigma: VertexOrdering, bit_budget: int = BIT_BUDGET,
                     on_step=None) -> Factor:
    """Boolean factor over F listing the answers of one NAE-form disjunct."""
    if disjunct.negated_atoms:
        raise PlanError("eval_with_tensor needs a disjunct without negated atoms")
    check_structure(disjunct, decomposition)
    answers: set[tuple] = set()
    if decomposition.r <= bit_budget:
        answers = _eval_chunk(disjunct, db, structure, decomposition, sigma, on_step)
    else:
        bounds = chunk_bounds(decomposition, bit_budget)
        log.info("[Tensor] r=%d > BIT_BUDGET=%d, %d chunks", decomposition.r, bit_budget, len(bounds))
        for start, stop in bounds:
            answers |= _eval_chunk(disjunct, db, structure, decomposition.chunk(start, stop), sigma, on_step)
    return Factor.build(disjunct.free_vars, {a: True for a in answers}, BOOLEAN)


def evaluate_rank_one_terms(disjunct: QueryIR, decomposition: TensorDecomposition, structure: NaeStructure,
                            db: Database, sigma: VertexOrdering) -> Factor:
    """One Boolean InsideOut per term (g, f) with filters f(X_i) = g(i), disjoined."""
    check_structure(disjunct, decomposition)
    body = disjunct.replace(nae_atoms=())
    dense = structure.dense
    answers: set[tuple] = set()
    for t in range(decomposition.r):
        predicates = []
        for var, (fi, color) in decomposition.term(t).items():
            fn = decomposition.family.function(fi)
            predicates.append(PredicateFactor(
                (var,), lambda key, fn=fn, color=color: int(fn[dense[int(key[0])]]) == color, f"f{fi}({var})={color}"))
        answers |= _as_answers(insideout(body, db, sigma, BOOLEAN, predicates=predicates), disjunct.free_vars)
    return Factor.build(disjunct.free_vars, {a: True for a in answers}, BOOLEAN)


def holds_everywhere(decomposition: TensorDecomposition, structure: NaeStructure) -> np.ndarray:
    """
    Tensor value on every dense assignment of U (N^|U| rows, lexicographic).
    Used to check the decomposition against the NAE conjunction.
    """
    n = len(decomposition.U)
    grid = np.indices((structure.N,) * n).reshape(n, -1).T
    values = decomposition.family.matrix()[:, grid]                    # (|F|, rows, n)
    hit = (values[None, :, :, :] == decomposition.colorings[:, None, None, :]).all(axis=3)
    return hit.any(axis=(0, 1))
