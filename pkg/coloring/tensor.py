# 2026-10-19 | v0.3.0 | Boolean tensor decomposition of an NAE conjunction
"""
tensor.py

⋀_{S∈A} NAE(X_S)  =  ⋁_{g proper c-coloring of G} ⋁_{f∈F} ⋀_{i∈U} [f(X_i) = g(i)]

Term t = (g, f) is bit t = g_index·|F| + f_index of the r-bit vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from coloring.chromatic import proper_colorings
from coloring.families import ColorFamily
from config import VERIFY_BUDGET
from core.errors import ConstructionBug
from core.hypergraph import Hypergraph


@dataclass(frozen=True, eq=False)
class TensorDecomposition:
    G: Hypergraph
    colorings: np.ndarray          # (P(G,c), |U|)
    family: ColorFamily

    @property
    def U(self) -> tuple:
        return self.G.vertices

    @property
    def c(self) -> int:
        return self.family.c

    @property
    def r(self) -> int:
        return len(self.colorings) * self.family.size

    def term(self, t: int) -> dict:
        """Term t as {variable: (member index, color)}, read f(X) = color."""
        gi, fi = divmod(t, self.family.size)
        return {v: (fi, int(self.colorings[gi, i])) for i, v in enumerate(self.U)}

    def unary_bits(self, variable, indices: np.ndarray, functions: np.ndarray | None = None) -> np.ndarray:
        """
        (len(indices), r) bit matrix of ψ̄_i: bit (g, f) is set for value x
        iff f(x) = g(i). `indices` are dense value indices in [N].
        """
        i = self.U.index(variable)
        values = (self.family.matrix() if functions is None else functions)[:, np.asarray(indices, dtype=np.int64)]
        hits = values.T[:, None, :] == self.colorings[:, i][None, :, None]
        return hits.reshape(hits.shape[0], hits.shape[1] * hits.shape[2])

    def chunk(self, start: int, stop: int) -> "TensorDecomposition":
        """Same colorings over members [start, stop) of the family."""
        return TensorDecomposition(self.G, self.colorings, self.family.subset(start, stop))

    def holds(self, assignment: Mapping) -> bool:
        """Evaluate the disjunction directly on dense value indices."""
        values = self.family.matrix()[:, [int(assignment[v]) for v in self.U]]
        return bool((values[None, :, :] == self.colorings[:, None, :]).all(axis=2).any())


def tensor_decomposition(G: Hypergraph, c: int, family: ColorFamily, budget: int = VERIFY_BUDGET) -> TensorDecomposition:
    """All proper c-colorings g of G crossed with the family; rank P(G,c)·|F|."""
    if family.c != c:
        raise ConstructionBug(f"family colors {family.c} != c={c}")
    return TensorDecomposition(G, proper_colorings(G, c, budget), family)
