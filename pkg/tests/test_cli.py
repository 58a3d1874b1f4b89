import csv

import orjson
import pytest
from assertpy import assert_that
from typer.testing import CliRunner

from main import app

runner = CliRunner()


@pytest.fixture
def workspace(tmp_path):
    db = tmp_path / "db"
    db.mkdir()
    tables = {
        "R": (["a", "b"], [["ann", "bob"], ["bob", "cy"], ["cy", "dee"], ["dee", "ann"]]),
        "S": (["b", "c"], [["bob", "cy"], ["cy", "dee"], ["dee", "ann"], ["ann", "bob"], ["bob", "dee"]]),
        "T": (["a", "c"], [["ann", "ann"], ["bob", "bob"], ["cy", "cy"], ["dee", "dee"],
                           ["ann", "bob"], ["bob", "cy"], ["cy", "dee"], ["dee", "ann"]]),
        "E": (["src", "dst"], [["1", "2"], ["2", "3"], ["3", "4"], ["4", "1"]]),
    }
    for name, (header, rows) in tables.items():
        with open(db / f"{name}.csv", "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows(rows)
    queries = {
        "c.q": "Q(X, Z) :- R(X, Y), S(Y, Z), !T(X, Z).",
        "walk.q": "W() :- E(X1, X2), E(X2, X3), E(X3, X4).",
        "bad.q": "Q(X) :- R(X, Y",
        "tri.q": "Q(X, Z) :- R(X, Y), S(Y, Z), X != Y, Y != Z, X != Z.",
    }
    for name, text in queries.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def error_of(result):
    return orjson.loads(result.stderr.strip().splitlines()[-1])


# -------------------------------------------------
# run
# -------------------------------------------------

def test_run_naive_and_tensor_agree(workspace):
    naive = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--strategy", "naive")
    tensor = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--strategy", "tensor")

    assert_that(naive.exit_code).is_equal_to(0)
    assert_that(tensor.exit_code).is_equal_to(0)
    assert_that(tensor.stdout).is_equal_to(naive.stdout)
    assert_that(tensor.stdout.splitlines()[0]).is_equal_to("X,Z")


def test_run_report_is_byte_identical_across_reruns(workspace):
    paths = [workspace / "r1.json", workspace / "r2.json"]
    for path in paths:
        result = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q",
                        "--seed", 5, "--report", path, "--out", workspace / "answers.csv")
        assert_that(result.exit_code).is_equal_to(0)

    first, second = (p.read_bytes() for p in paths)
    assert_that(first).is_equal_to(second)
    report = orjson.loads(first)
    assert_that(report["schema"]).is_equal_to(1)
    assert_that(report["seed"]).is_equal_to(5)
    assert_that((workspace / "answers.csv").read_text().splitlines()[0]).is_equal_to("X,Z")


def test_run_report_json_goes_to_stdout(workspace):
    answers = workspace / "answers.csv"
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--report", "json",
                    "--out", answers)

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(orjson.loads(result.stdout)["schema"]).is_equal_to(1)
    assert_that(answers.read_text().splitlines()[0]).is_equal_to("X,Z")


def test_run_report_json_needs_an_answers_file(workspace):
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--report", "json")

    assert_that(result.exit_code).is_equal_to(2)
    assert_that(error_of(result)["error"]).is_equal_to("UsageError")


def test_run_boolean_query_prints_result(workspace):
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "walk.q")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(result.stdout.splitlines()).is_equal_to(["result", "true"])


def test_run_writes_telemetry(workspace):
    logs = workspace / "logs"
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--log-dir", logs)

    assert_that(result.exit_code).is_equal_to(0)
    assert_that((logs / "runs.csv").read_text().splitlines()).is_length(2)


# -------------------------------------------------
# plan / rewrite / family / bench
# -------------------------------------------------

def test_plan_walk_width(workspace):
    result = invoke("plan", "--db", workspace / "db", "--query", workspace / "walk.q")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(orjson.loads(result.stdout)["fhtw_F"]).is_equal_to("1/1")


def test_plan_colors_join_prints_cost_table(workspace):
    result = invoke("plan", "--db", workspace / "db", "--query", workspace / "c.q", "--strategy", "colors-join")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(result.stderr).contains("io-color cost")
    payload = orjson.loads(result.stdout)
    assert_that(any("cost_table" in d for d in payload["disjuncts"])).is_true()


def test_rewrite_lists_disjuncts(workspace):
    result = invoke("rewrite", "--db", workspace / "db", "--query", workspace / "c.q")

    payload = orjson.loads(result.stdout)
    assert_that(result.exit_code).is_equal_to(0)
    assert_that(payload["B"]).is_equal_to(len(payload["disjuncts"]))
    assert_that(payload["B"]).is_less_than_or_equal_to(payload["bound"])


def test_family_explicit_two_star(workspace):
    out = workspace / "family.csv"
    result = invoke("family", "--shape", "2-star", "-N", 8, "--mode", "explicit", "--out", out)

    assert_that(result.exit_code).is_equal_to(0)
    payload = orjson.loads(result.stdout)
    assert_that(payload["certification"]).is_equal_to("exhaustive")
    assert_that(payload["c"]).is_equal_to(2)
    rows = out.read_text().splitlines()
    assert_that(rows).is_length(payload["family_size"] + 1)
    assert_that(rows[0].split(",")).is_length(8)


def test_family_from_edge_list(workspace):
    result = invoke("family", "--nae", "a b; b c; a c", "-N", 4, "--mode", "random")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(orjson.loads(result.stdout)["c"]).is_equal_to(3)


def test_bench_strategies_agree(workspace):
    result = invoke("bench", "-N", 40, "--strategies", "tensor,naive", "--repeats", 1)

    assert_that(result.exit_code).is_equal_to(0)
    payload = orjson.loads(result.stdout)
    assert_that(payload["agree"]).is_true()
    assert_that(payload["sizes"]).is_equal_to([40, 80])
    assert_that(payload["strategies"]).contains_key("tensor", "naive")


def test_bench_raises_the_naive_budget_with_the_size(workspace):
    # about 80 + 80²/4 steps at 2N, over a flat budget of 1000
    result = invoke("--budget-naive", 1000, "bench", "-N", 40, "--strategies", "tensor,naive", "--repeats", 1)

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(orjson.loads(result.stdout)["agree"]).is_true()


# -------------------------------------------------
# errors
# -------------------------------------------------

def test_syntax_error_exits_two(workspace):
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "bad.q")

    assert_that(result.exit_code).is_equal_to(2)
    assert_that(error_of(result)["error"]).is_equal_to("QuerySyntaxError")


def test_unknown_strategy_exits_two(workspace):
    result = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--strategy", "fastest")

    assert_that(result.exit_code).is_equal_to(2)
    assert_that(error_of(result)["exit_code"]).is_equal_to(2)


def test_disjunct_budget_exits_three(workspace):
    result = invoke("--budget-disjuncts", 1, "run", "--db", workspace / "db", "--query", workspace / "c.q")

    assert_that(result.exit_code).is_equal_to(3)
    assert_that(error_of(result)["error"]).is_equal_to("DisjunctBudgetExceeded")


def test_auto_strategy_survives_the_budget(workspace):
    result = invoke("--budget-disjuncts", 1, "run", "--db", workspace / "db", "--query", workspace / "c.q",
                    "--strategy", "auto")
    naive = invoke("run", "--db", workspace / "db", "--query", workspace / "c.q", "--strategy", "naive")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(result.stdout).is_equal_to(naive.stdout)


def test_missing_db_exits_two(workspace):
    result = invoke("run", "--db", workspace / "nowhere", "--query", workspace / "c.q")

    assert_that(result.exit_code).is_equal_to(2)
    assert_that(error_of(result)["error"]).is_equal_to("IngestError")


def test_family_budget_exits_three(workspace):
    result = invoke("--budget-quotient", 2, "--budget-family", 10, "run", "--db", workspace / "db",
                    "--query", workspace / "tri.q", "--strategy", "tensor")

    assert_that(result.exit_code).is_equal_to(3)
    assert_that(error_of(result)["error"]).is_equal_to("FamilyBudgetExceeded")


def test_auto_strategy_survives_the_family_budget(workspace):
    result = invoke("--budget-quotient", 2, "--budget-family", 10, "run", "--db", workspace / "db",
                    "--query", workspace / "tri.q", "--strategy", "auto")
    naive = invoke("run", "--db", workspace / "db", "--query", workspace / "tri.q", "--strategy", "naive")

    assert_that(result.exit_code).is_equal_to(0)
    assert_that(result.stdout).is_equal_to(naive.stdout)
