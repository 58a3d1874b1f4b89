# 2026-10-19 | v0.3.0 | InsideOut cost with color variables
"""
cost.py

Per-step cost of eliminating Z along an ordering π of H′:

    c^{|J_Z|_U|} · N^{ρ*_H(J_Z|_V)}

J_Z|_V are the input variables of the bag and J_Z|_U the color variables
of the bag other than Z that no input variable of the bag determines.
Steps compare by data exponent first, then color exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from core.hypergraph import vertex_key
from optimizer.color_join import ColorJoinIR
from planner.ordering import VertexOrdering, elimination_sequence
from planner.simplex import fractional_edge_cover

SUPERSCRIPTS = str.maketrans("0123456789/", "⁰¹²³⁴⁵⁶⁷⁸⁹ᐟ")


def symbolic_cost(color_exp: int, data_exp: Fraction) -> str:
    """N·c³, N³ᐟ², c² and so on; "1" when both exponents are zero."""
    parts = []
    if data_exp:
        parts.append("N" if data_exp == 1 else f"N{str(data_exp).translate(SUPERSCRIPTS)}")
    if color_exp:
        parts.append("c" if color_exp == 1 else f"c{str(color_exp).translate(SUPERSCRIPTS)}")
    return "·".join(parts) or "1"


@dataclass(frozen=True)
class StepCost:
    Z: str
    J: frozenset
    J_V: frozenset
    J_U: frozenset
    data_exp: Fraction

    @property
    def color_exp(self) -> int:
        return len(self.J_U)

    @property
    def rank(self) -> tuple:
        return self.data_exp, self.color_exp

    @property
    def symbol(self) -> str:
        return symbolic_cost(self.color_exp, self.data_exp)

    def value(self, c: int, N: int) -> float:
        return float(c ** self.color_exp * N ** float(self.data_exp))

    def row(self) -> list[str]:
        def show(vs):
            return " ".join(str(v) for v in sorted(vs, key=vertex_key)) or "∅"
        return [str(self.Z), show(self.J), show(self.J_V), show(self.J_U), self.symbol]


@dataclass(frozen=True)
class CostTable:
    steps: tuple[StepCost, ...]

    @property
    def worst(self) -> StepCost | None:
        return max(self.steps, key=lambda s: s.rank, default=None)

    @property
    def symbol(self) -> str:
        return self.worst.symbol if self.worst else "1"

    @property
    def max_color_exp(self) -> int:
        return max((s.color_exp for s in self.steps), default=0)

    def step(self, Z) -> StepCost:
        return next(s for s in self.steps if s.Z == Z)


def io_color_cost(cj: ColorJoinIR, pi: VertexOrdering) -> CostTable:
    """One row per elimination step of π over H′, in elimination order."""
    steps = []
    for step in elimination_sequence(cj.hypergraph, pi):
        J = step.bag
        J_V = frozenset(v for v in J if not cj.is_color(v))
        J_U = frozenset(v for v in cj.free_colors(J) if v != step.vertex)
        rho = fractional_edge_cover(cj.body, J_V).value
        steps.append(StepCost(step.vertex, J, J_V, J_U, rho))
    return CostTable(tuple(steps))
