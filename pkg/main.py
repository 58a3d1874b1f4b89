# 2026-10-19 | v0.3.0 | Command-line entry point
"""
main.py

The nae-lab command line.

Commands:
- run      answer a query over a directory of CSVs (answers CSV + RunReport)
- plan     ordering, widths, untangling and per-disjunct color coding, no evaluation
- rewrite  the untangled NAE-form disjuncts
- family   build and verify a color family for an NAE structure
- bench    wall times at N and 2N on a synthetic workload

Global options (before the command) set verbosity and the `--budget-*`
caps. Errors print as one JSON object on stderr; exit codes 1-4 follow
core/errors.py, typer usage errors exit 2.

It does NOT:
- Serve queries over a network
- Keep state between invocations (apart from optional CSV telemetry)
"""

import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Optional

import orjson
import pandas as pd
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from coloring.chromatic import structure_of
from coloring.families import build_family, verify_coverage
from config import (
    DEFAULT_FAMILY_MODE,
    DEFAULT_SEED,
    DEFAULT_STRATEGY,
    DEFAULT_UNTANGLE_MODE,
    FAMILY_MODES,
    REPORT_SCHEMA,
    STRATEGIES,
    UNTANGLE_MODES,
    EngineConfig,
)
from core.database import Database, decode_rows
from core.errors import NaeLabError, UsageError
from core.hypergraph import Hypergraph
from core.seeding import SeedStreams
from data.csv_loader import answers_csv, load_database
from data.workloads import C_QUERY, WORKLOADS, c_query_instance, graph_database, random_graph
from engine.core_engine import QueryEngine
from execution.performance_monitor import PerformanceMonitor
from execution.run_report import dumps, fraction_text, plan_payload, rewrite_payload, run_report, write_json
from execution.telemetry_logger import TelemetryLogger
from optimizer.cost import io_color_cost
from query.binding import bind_query
from query.parser import parse_query
from rewrite.untangle import untangle_query

log = logging.getLogger("nae_lab")

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Conjunctive queries with negation via color coding.")
console = Console(stderr=True)

SHAPES = {
    "edge": [("a", "b")],
    "2-star": [("s", "a"), ("s", "b")],
    "3-star": [("s", "a"), ("s", "b"), ("s", "c")],
    "3-clique": [("a", "b"), ("b", "c"), ("a", "c")],
    "nae3": [("a", "b", "c")],
}


# =====================================================
# PLUMBING
# =====================================================

def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


@contextmanager
def cli_errors():
    try:
        yield
    except NaeLabError as exc:
        sys.stderr.write(orjson.dumps(exc.to_dict()).decode() + "\n")
        raise typer.Exit(exc.exit_code)


def _choice(value: str, allowed, what: str) -> str:
    if value not in allowed:
        raise UsageError(f"unknown {what} {value!r}; expected one of {', '.join(allowed)}")
    return value


def _config(ctx: typer.Context, **fields) -> EngineConfig:
    base: EngineConfig = ctx.obj or EngineConfig()
    if "strategy" in fields:
        _choice(fields["strategy"], STRATEGIES, "strategy")
    if "family_mode" in fields:
        _choice(fields["family_mode"], FAMILY_MODES, "family mode")
    if "untangle_mode" in fields:
        _choice(fields["untangle_mode"], UNTANGLE_MODES, "untangle mode")
    return base.with_overrides(**fields)


def _read_query(path: Path):
    try:
        return parse_query(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read query file {path}: {exc.strerror}") from None


REPORT_TO_STDOUT = ("json", "-")


def _emit(payload: dict, report: Optional[str]) -> None:
    if report is None or report in REPORT_TO_STDOUT:
        sys.stdout.write(dumps(payload).decode())
    else:
        write_json(payload, Path(report))


def _print_colors_join(plan) -> None:
    for d in plan.disjuncts:
        if d.color_join is None:
            continue
        console.print(f"[bold]disjunct {d.index}[/bold] amended decomposition")
        for line in d.amended.lines():
            console.print(f"  {line}", markup=False)
        costs = io_color_cost(d.color_join, d.pi)
        table = Table("Z", "J", "J|V", "J|U", "cost", title=f"io-color cost, max {costs.symbol}")
        for step in costs.steps:
            table.add_row(*step.row())
        console.print(table)


Strategy = Annotated[str, typer.Option("--strategy", "-s", help=f"one of {', '.join(STRATEGIES)}")]
FamilyMode = Annotated[str, typer.Option("--family-mode", help=f"one of {', '.join(FAMILY_MODES)}")]
UntangleMode = Annotated[str, typer.Option("--untangle-mode", help=f"one of {', '.join(UNTANGLE_MODES)}")]
Seed = Annotated[int, typer.Option("--seed")]
DbDir = Annotated[Path, typer.Option("--db", help="directory with one <relation>.csv per relation")]
QueryFile = Annotated[Path, typer.Option("--query", "-q", help="file holding one rule")]
ReportPath = Annotated[Optional[str], typer.Option(
    "--report", help="JSON report: a file path, or `json` / `-` for stdout (the default)")]


@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="DEBUG logging")] = False,
    budget_ordering: Annotated[Optional[int], typer.Option("--budget-ordering", help="exact ordering DP vertex cap")] = None,
    budget_quotient: Annotated[Optional[int], typer.Option("--budget-quotient", help="|U| cap for quotient enumeration")] = None,
    budget_verify: Annotated[Optional[int], typer.Option("--budget-verify", help="N^|U| cap for exhaustive verification")] = None,
    budget_samples: Annotated[Optional[int], typer.Option("--budget-samples", help="Monte-Carlo verification samples")] = None,
    budget_inner_verify: Annotated[Optional[int], typer.Option("--budget-inner-verify", help="q^|U| cap for inner families")] = None,
    budget_retries: Annotated[Optional[int], typer.Option("--budget-retries", help="random family attempts")] = None,
    budget_family: Annotated[Optional[int], typer.Option(
        "--budget-family", help="|F|·N entries a sampled family may hold")] = None,
    budget_bits: Annotated[Optional[int], typer.Option("--budget-bits", help="BitVector width before chunking")] = None,
    budget_naive: Annotated[Optional[int], typer.Option("--budget-naive", help="naive evaluation steps")] = None,
    budget_disjuncts: Annotated[Optional[int], typer.Option("--budget-disjuncts", help="untangled disjunct cap")] = None,
):
    setup_logging(verbose)
    ctx.obj = EngineConfig().with_overrides(
        ordering_dp_cap=budget_ordering,
        quotient_cap=budget_quotient,
        verify_budget=budget_verify,
        monte_carlo_samples=budget_samples,
        inner_verify_budget=budget_inner_verify,
        family_retry_cap=budget_retries,
        family_cell_budget=budget_family,
        bit_budget=budget_bits,
        naive_budget=budget_naive,
        disjunct_cap=budget_disjuncts,
    )


# =====================================================
# COMMANDS
# =====================================================

@app.command()
def run(
    ctx: typer.Context,
    db: DbDir,
    query: QueryFile,
    strategy: Strategy = DEFAULT_STRATEGY,
    family_mode: FamilyMode = DEFAULT_FAMILY_MODE,
    untangle_mode: UntangleMode = DEFAULT_UNTANGLE_MODE,
    seed: Seed = DEFAULT_SEED,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="answers CSV (default stdout)")] = None,
    report: Annotated[Optional[str], typer.Option(
        "--report", help="RunReport JSON: a file path, or `json` / `-` for stdout (needs --out)")] = None,
    timings: Annotated[bool, typer.Option("--timings", help="include wall-clock fields in the report")] = False,
    symmetry: Annotated[bool, typer.Option("--symmetry/--no-symmetry", help="symmetric pruning for colors-join")] = True,
    log_dir: Annotated[Optional[Path], typer.Option("--log-dir", help="append CSV telemetry here")] = None,
):
    """Answer a query; answers go to --out (or stdout), the report to --report."""
    with cli_errors():
        config = _config(ctx, strategy=strategy, family_mode=family_mode, untangle_mode=untangle_mode,
                         seed=seed, symmetry_pruning=symmetry)
        if report in REPORT_TO_STDOUT and out is None:
            raise UsageError("--report json prints the report on stdout; give --out for the answers")
        database = load_database(db)
        result = QueryEngine(database, config).answer(_read_query(query))

        bound = result.plan.query
        free = bound.ir.free_vars
        if free:
            text = answers_csv(free, decode_rows(bound.database, free, result.rows))
        else:
            text = answers_csv(("result",), [("true" if result.answers else "false",)])
        if out is None:
            sys.stdout.write(text)
        else:
            out.write_text(text)

        if report is not None:
            _emit(run_report(result, config, timings), report)
        if log_dir is not None:
            TelemetryLogger(str(log_dir)).log_run(result, config.seed)


@app.command()
def plan(
    ctx: typer.Context,
    db: DbDir,
    query: QueryFile,
    strategy: Strategy = DEFAULT_STRATEGY,
    family_mode: FamilyMode = DEFAULT_FAMILY_MODE,
    untangle_mode: UntangleMode = DEFAULT_UNTANGLE_MODE,
    seed: Seed = DEFAULT_SEED,
    report: ReportPath = None,
):
    """Plan without evaluating: widths, B, c, θ, |F| and r per disjunct."""
    with cli_errors():
        config = _config(ctx, strategy=strategy, family_mode=family_mode, untangle_mode=untangle_mode, seed=seed)
        planned = QueryEngine(load_database(db), config).plan(_read_query(query))
        _print_colors_join(planned)
        _emit(plan_payload(planned, config), report)


@app.command()
def rewrite(
    ctx: typer.Context,
    db: DbDir,
    query: QueryFile,
    untangle_mode: UntangleMode = DEFAULT_UNTANGLE_MODE,
    report: ReportPath = None,
):
    """Untangle the negated atoms and print the NAE-form disjuncts."""
    with cli_errors():
        config = _config(ctx, untangle_mode=untangle_mode)
        bound = bind_query(_read_query(query), load_database(db))
        untangled = untangle_query(bound.ir, bound.database, config.untangle_mode, config.disjunct_cap)
        _emit(rewrite_payload(untangled), report)


@app.command()
def family(
    ctx: typer.Context,
    domain_size: Annotated[int, typer.Option("--domain-size", "-N", help="domain size")],
    shape: Annotated[Optional[str], typer.Option("--shape", help=f"one of {', '.join(SHAPES)}")] = None,
    nae: Annotated[Optional[str], typer.Option("--nae", help='edges as "a b; b c"')] = None,
    mode: Annotated[str, typer.Option("--mode", help=f"one of {', '.join(FAMILY_MODES)}")] = DEFAULT_FAMILY_MODE,
    seed: Seed = DEFAULT_SEED,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="family matrix CSV (|F| rows, N columns)")] = None,
    report: ReportPath = None,
):
    """Build a color family for an NAE structure over [N] and verify it."""
    with cli_errors():
        config = _config(ctx, family_mode=mode, seed=seed)
        if (shape is None) == (nae is None):
            raise UsageError("give exactly one of --shape and --nae")
        if shape is not None:
            edges = SHAPES[_choice(shape, SHAPES, "shape")]
        else:
            edges = [tuple(v for v in part.replace(",", " ").split()) for part in nae.split(";") if part.strip()]
        if domain_size < 1:
            raise UsageError("--domain-size must be positive")

        G = Hypergraph.of(edges)
        structure = structure_of(G, domain_size, config.quotient_cap)
        streams = SeedStreams(config.seed)
        built = build_family(structure, config.family_mode, streams, config, label="family")
        certification = verify_coverage(G, structure.c, built, domain_size, config.verify_budget,
                                        config.monte_carlo_samples, streams.generator("family", "verify"))
        matrix = built.matrix()
        if out is not None:
            pd.DataFrame(matrix, columns=[f"x{i}" for i in range(domain_size)]).to_csv(out, index=False)
        _emit({
            "schema": REPORT_SCHEMA,
            "U": [str(v) for v in G.vertices],
            "edges": [sorted(map(str, e)) for e in G.edges],
            "N": domain_size,
            "c": structure.c,
            "c_exact": structure.exact,
            "mode": config.family_mode,
            "provenance": built.provenance,
            "family_size": built.size,
            "theta": fraction_text(built.theta),
            "p": [fraction_text(x) for x in built.p] if built.p else None,
            "certification": certification,
            "seed": config.seed,
        }, report)


def _bench_database(workload: str, N: int, seed: int, k: int) -> tuple[Database, str]:
    if workload == "c-query":
        return c_query_instance(N, seed), C_QUERY
    graph = random_graph(N, 2 * N, seed, directed=workload != "induced", max_degree=3)
    return graph_database(graph), WORKLOADS[workload](k)


@app.command()
def bench(
    ctx: typer.Context,
    workload: Annotated[str, typer.Option("--workload", help="c-query, walk, path or induced")] = "c-query",
    domain_size: Annotated[int, typer.Option("--domain-size", "-N", help="base size; also run at 2N")] = 2000,
    strategies: Annotated[str, typer.Option("--strategies", help="comma separated")] = "tensor,naive",
    k: Annotated[int, typer.Option("--k", help="path length for graph workloads")] = 3,
    repeats: Annotated[int, typer.Option("--repeats")] = 3,
    seed: Seed = DEFAULT_SEED,
    report: ReportPath = None,
):
    """
    Time each strategy at N and 2N and report the runtime ratio. The naive
    step budget is raised to at least N² per size so the baseline finishes.
    """
    with cli_errors():
        _choice(workload, ("c-query", *WORKLOADS), "workload")
        names = [_choice(s.strip(), STRATEGIES, "strategy") for s in strategies.split(",") if s.strip()]
        monitor = PerformanceMonitor()
        answers = {}
        sizes = (domain_size, 2 * domain_size)
        base_budget = (ctx.obj or EngineConfig()).naive_budget
        for N in sizes:
            database, text = _bench_database(workload, N, seed, k)
            q = parse_query(text)
            for name in names:
                config = _config(ctx, strategy=name, seed=seed, naive_budget=max(base_budget, N * N))
                for _ in range(max(repeats, 1)):
                    start = time.perf_counter()
                    result = QueryEngine(database, config).answer(q)
                    monitor.record_run(name, N, time.perf_counter() - start)
                answers.setdefault(str(N), {})[name] = len(result.answers)
                log.info("[Bench] %s N=%d: %s", name, N, monitor.stats(name, N))
        agree = all(len(set(per.values())) == 1 for per in answers.values())
        _emit({
            "schema": REPORT_SCHEMA,
            "workload": workload,
            "sizes": list(sizes),
            "seed": seed,
            "strategies": monitor.summary(),
            "answers": answers,
            "agree": agree,
        }, report)


if __name__ == "__main__":
    app()
