# 2026-10-19 | v0.3.0 | Run log analysis utility
"""
analyze_runs.py

Offline analysis of logged runs.

Loads TelemetryLogger CSV outputs and produces basic slices:
- Overall run metrics
- By strategy (answers, cost, wall time)
- Families by certification level
"""

import os

import pandas as pd

from config import LOG_DIR


def load_runs(path: str = os.path.join(LOG_DIR, "runs.csv")) -> pd.DataFrame | None:
    if not os.path.exists(path):
        print(f"No runs file found at {path}")
        return None
    return pd.read_csv(path, parse_dates=["timestamp"])


def summarize_overall(df: pd.DataFrame):
    print("\n=== Overall Runs ===")
    print(df.describe(include="all"))


def slice_by_strategy(df: pd.DataFrame) -> pd.DataFrame:
    grouped = df.groupby("strategy").agg(
        runs=("query", "count"),
        switched=("switched", "sum"),
        mean_cost=("cost", "mean"),
        median_ms=("total_ms", "median"),
    )
    print("\n=== Runs by Strategy ===")
    print(grouped)
    return grouped


def load_disjuncts(path: str = os.path.join(LOG_DIR, "disjuncts.csv")) -> pd.DataFrame | None:
    if not os.path.exists(path):
        print(f"No disjuncts file found at {path}")
        return None
    return pd.read_csv(path, parse_dates=["timestamp"])


def summarize_disjuncts(disjuncts: pd.DataFrame) -> pd.DataFrame:
    print("\n=== Disjunct Summary ===")
    print(disjuncts[["N", "c", "family_size", "r", "ms"]].describe())

    print("\n=== Certification Levels ===")
    print(disjuncts["certification"].value_counts())

    grouped = disjuncts.groupby("strategy")[["r", "ms"]].sum()
    print("\n=== Rank and Time by Strategy ===")
    print(grouped)
    return grouped


if __name__ == "__main__":
    df = load_runs()
    if df is not None:
        summarize_overall(df)
        slice_by_strategy(df)

    disjuncts = load_disjuncts()
    if disjuncts is not None:
        summarize_disjuncts(disjuncts)
