# 2026-10-19 | v0.3.0 | RunReport and plan/rewrite/family payloads
"""
run_report.py

Turns engine objects into plain, JSON-ready dicts and writes them.

This module:
- Builds the RunReport: per-disjunct width, c, θ, |F|, r, certification
  and strategy; totals; seed
- Builds the plan payload (body ordering, disjunct plans, and for
  colors-join the amended decomposition and its cost table)
- Serializes with orjson: sorted keys, 2-space indent, rationals as "p/q"
- Does NOT run the engine
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import orjson

from config import REPORT_SCHEMA, EngineConfig
from engine.core_engine import DisjunctPlan, Plan, QueryResult
from optimizer.cost import CostTable, io_color_cost
from query.parser import print_query
from rewrite.untangle import UntangledQuery


def fraction_text(value) -> str | None:
    if value is None:
        return None
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _default(obj):
    if isinstance(obj, Fraction):
        return fraction_text(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=str)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(payload: dict) -> bytes:
    return orjson.dumps(payload, default=_default,
                        option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)


def write_json(payload: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(payload))
    return path


# =====================================================
# PLAN
# =====================================================

def cost_rows(table: CostTable) -> list[dict]:
    return [dict(zip(("Z", "J", "J_V", "J_U", "cost"), step.row())) for step in table.steps]


def disjunct_entry(d: DisjunctPlan) -> dict:
    entry = {
        "index": d.index,
        "query": print_query(d.ir),
        "strategy": d.strategy,
        "fhtw_F": fraction_text(d.width.value),
        "ordering": [str(v) for v in d.sigma.sequence],
        "B": 1,
        "r": d.r,
        "empty": d.empty,
    }
    if d.structure is not None:
        entry.update({
            "U": [str(v) for v in d.structure.U],
            "N": d.structure.N,
            "c": d.structure.c,
            "c_exact": d.structure.exact,
        })
    if d.family is not None:
        entry.update({
            "family_size": d.family.size,
            "family_provenance": d.family.provenance,
            "certification": d.family.certification,
            "theta": fraction_text(d.family.theta),
        })
    if d.color_join is not None:
        table = io_color_cost(d.color_join, d.pi)
        entry.update({
            "amended_decomposition": d.amended.lines(),
            "color_ordering": [str(v) for v in d.pi.sequence],
            "cost_table": cost_rows(table),
            "max_step": table.symbol,
        })
    return entry


def plan_payload(plan: Plan, config: EngineConfig) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "query": print_query(plan.query.ir),
        "strategy": plan.strategy,
        "requested_strategy": plan.requested,
        "switched": plan.switched,
        "seed": config.seed,
        "fhtw_F": fraction_text(plan.width.value),
        "heuristic_ordering": plan.sigma.heuristic,
        "ordering": [str(v) for v in plan.sigma.sequence],
        "B": plan.B,
        "disjuncts": [disjunct_entry(d) for d in plan.disjuncts],
    }


# =====================================================
# RUN
# =====================================================

def run_report(result: QueryResult, config: EngineConfig, timings: bool = False) -> dict:
    """Plan payload plus answer counts; wall-clock fields only with `timings`."""
    report = plan_payload(result.plan, config)
    for entry in report["disjuncts"]:
        entry["answers"] = result.counts.get(entry["index"], 0)
        if timings:
            entry["ms"] = round(result.timings.get(entry["index"], 0.0), 3)
    report["totals"] = {
        "B": result.plan.B,
        "r": sum(d.r for d in result.plan.disjuncts),
        "cost": result.plan.cost,
        "answers": len(result.answers),
        "pruned": result.pruned,
    }
    if timings:
        report["totals"]["ms"] = round(sum(result.timings.values()), 3)
    return report


# =====================================================
# REWRITE
# =====================================================

def rewrite_payload(untangled: UntangledQuery) -> dict:
    fragments = []
    for frag in untangled.fragments:
        fragments.append({
            "label": frag.label,
            "atom": f"!{frag.atom}",
            "pivot": frag.pivot,
            "matching_size": len(frag.matching.relation),
            "W": {str(i): len(w) for i, w in frag.w_relations.items()},
            "M": {str(j): len(m) for j, m in frag.m_relations.items()},
            "branches": [b.label for b in frag.branches],
        })
    return {
        "schema": REPORT_SCHEMA,
        "mode": untangled.mode,
        "B": untangled.B,
        "bound": untangled.bound,
        "fragments": fragments,
        "disjuncts": [print_query(d) for d in untangled.disjuncts],
    }
