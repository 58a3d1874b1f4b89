import numpy as np
import pytest
from assertpy import assert_that
from hypothesis import given, settings
from hypothesis import strategies as st

from coloring.tensor import tensor_decomposition
from config import EngineConfig
from core.errors import DisjunctBudgetExceeded, FamilyBudgetExceeded, PlanError
from core.factor import Factor
from core.hypergraph import Hypergraph
from core.semiring import BOOLEAN, COUNT
from data.workloads import (
    C_QUERY,
    c_query_instance,
    edge_rows,
    graph_database,
    induced_path_query,
    path_query,
    random_graph,
    walk_query,
)
from engine.core_engine import QueryEngine, answer_query
from engine.insideout import eliminate_variable, insideout
from engine.naive import naive_eval
from engine.tensor_eval import chunk_bounds, eval_with_tensor, evaluate_rank_one_terms, holds_everywhere
from planner.ordering import VertexOrdering, plan_ordering
from query.parser import parse_query, print_query

from tests.helpers import bound, id_db, path_endpoints, walk_endpoints


def oracle(text, db):
    q = bound(text, db)
    return naive_eval(q.ir, q.database)


def engine_answers(text, db, **overrides):
    return QueryEngine(db, EngineConfig().with_overrides(**overrides)).answer(parse_query(text)).answers


def tensor_disjuncts(text, db, **overrides):
    engine = QueryEngine(db, EngineConfig().with_overrides(**overrides))
    plan = engine.plan(parse_query(text))
    return plan, [d for d in plan.disjuncts if d.decomposition is not None]


# -------------------------------------------------
# eliminate_variable / insideout
# -------------------------------------------------

def test_eliminate_variable_boolean():
    R = Factor.build(("A", "B"), {(1, 2): True}, BOOLEAN)
    S = Factor.build(("B", "C"), {(2, 3): True, (4, 5): True}, BOOLEAN)

    out = eliminate_variable([R, S], "B", BOOLEAN)

    assert_that(out.schema).is_equal_to(("A", "C"))
    assert_that(out.support()).is_equal_to({(1, 3)})


def test_eliminate_variable_counts_witnesses():
    R = Factor.build(("A", "B"), {(1, 2): 1, (1, 3): 1}, COUNT)
    S = Factor.build(("B",), {(2,): 1, (3,): 1}, COUNT)

    out = eliminate_variable([R, S], "B", COUNT)

    assert_that(dict(out.entries)).is_equal_to({(1,): 2})


def test_eliminate_variable_without_factor_fails():
    R = Factor.build(("A",), {(1,): True}, BOOLEAN)

    with pytest.raises(PlanError):
        eliminate_variable([R], "B", BOOLEAN)


@pytest.mark.parametrize("seed", range(4))
def test_insideout_walks_match_dfs(seed):
    graph = random_graph(10, 18, seed)
    db = graph_database(graph)
    q = bound(walk_query(3), db)
    H = Hypergraph.of((a.variables for a in q.ir.positive_atoms), q.ir.free_vars)
    sigma, _ = plan_ordering(H, q.ir.free_vars)

    out = insideout(q.ir, q.database, sigma)

    assert_that(set(out.reorder(q.ir.free_vars).entries)).is_equal_to(walk_endpoints(edge_rows(graph), 3))


def test_insideout_empty_relation_gives_nothing():
    db = id_db({"R": (("a", "b"), []), "S": (("b", "c"), [(1, 2)])})

    assert_that(engine_answers("Q(X, Z) :- R(X, Y), S(Y, Z).", db)).is_empty()


def test_insideout_rejects_negation():
    db = id_db({"R": (("a",), [(1,)]), "T": (("a",), [(2,)])})
    q = bound("Q(X) :- R(X), !T(X).", db)

    with pytest.raises(PlanError):
        insideout(q.ir, q.database, VertexOrdering(("X",), frozenset({"X"})))


@pytest.mark.parametrize("strategy", ["naive", "direct", "tensor", "colors-join"])
def test_contradictory_negation_is_empty(strategy):
    db = id_db({"R": (("a",), [(1,), (2,)])})

    assert_that(engine_answers("Q(X) :- R(X), !R(X).", db, strategy=strategy)).is_empty()


# -------------------------------------------------
# eval_with_tensor
# -------------------------------------------------

def test_tensor_c_query(c_query_db):
    answers = engine_answers(C_QUERY, c_query_db)

    assert_that(answers).is_equal_to({()})
    assert_that(answers).is_equal_to(oracle(C_QUERY, c_query_db))


def test_tensor_single_edge():
    db = id_db({"D": (("v",), [(0,), (1,)])})

    assert_that(engine_answers("Q(X, Y) :- D(X), D(Y), X != Y.", db)).is_equal_to({(0, 1), (1, 0)})


def test_tensor_simple_paths_on_small_graph():
    rows = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 0)]
    db = id_db({"E": (("src", "dst"), rows)})

    assert_that(engine_answers(path_query(3), db)).is_equal_to(path_endpoints(rows, 3))
    assert_that(path_endpoints(rows, 3)).is_not_equal_to(walk_endpoints(rows, 3))


def test_tensor_terms_cover_exactly_the_nae_assignments():
    db = id_db({"D": (("v",), [(0,), (1,), (2,)])})
    _, disjuncts = tensor_disjuncts("Q(X, Y, Z) :- D(X), D(Y), D(Z), X != Y, Y != Z.", db)
    d = disjuncts[0]
    grid = np.indices((3, 3, 3)).reshape(3, -1).T
    proper = (grid[:, 0] != grid[:, 1]) & (grid[:, 1] != grid[:, 2])

    assert_that(holds_everywhere(d.decomposition, d.structure).tolist()).is_equal_to(proper.tolist())


def test_tensor_rejects_mismatched_structure():
    db = id_db({"D": (("v",), [(0,), (1,), (2,)])})
    _, first = tensor_disjuncts("Q(X, Y) :- D(X), D(Y), X != Y.", db)
    other = bound("Q(X, Y, Z) :- D(X), D(Y), D(Z), NAE(X, Y, Z).", db)

    with pytest.raises(PlanError):
        eval_with_tensor(other.ir, first[0].decomposition, first[0].structure, other.database, first[0].sigma)


def test_batching_matches_rank_one_terms(c_query_db):
    plan, disjuncts = tensor_disjuncts(C_QUERY.replace("C()", "C(X, Z)"), c_query_db)
    assert_that(disjuncts).is_not_empty()

    for d in disjuncts:
        full = eval_with_tensor(d.ir, d.decomposition, d.structure, plan.database, d.sigma)
        chunked = eval_with_tensor(d.ir, d.decomposition, d.structure, plan.database, d.sigma, bit_budget=3)
        terms = evaluate_rank_one_terms(d.ir, d.decomposition, d.structure, plan.database, d.sigma)
        assert_that(chunked.support()).is_equal_to(full.support())
        assert_that(terms.support()).is_equal_to(full.support())


def test_chunk_bounds_partition_the_family(c_query_db):
    _, disjuncts = tensor_disjuncts(C_QUERY, c_query_db)
    d = disjuncts[0].decomposition

    bounds = chunk_bounds(d, 2 * len(d.colorings))

    assert_that(bounds[0][0]).is_zero()
    assert_that(bounds[-1][1]).is_equal_to(d.family.size)
    assert_that(all(a[1] == b[0] for a, b in zip(bounds, bounds[1:]))).is_true()
    assert_that(all(stop - start <= 2 for start, stop in bounds)).is_true()


def test_extending_the_family_keeps_answers(c_query_db):
    plan, disjuncts = tensor_disjuncts(C_QUERY.replace("C()", "C(X)"), c_query_db)
    rng = np.random.default_rng(7)

    for d in disjuncts:
        base = eval_with_tensor(d.ir, d.decomposition, d.structure, plan.database, d.sigma).support()
        extra = rng.integers(0, d.structure.c, size=(5, d.structure.N))
        wider = tensor_decomposition(d.structure.G, d.structure.c, d.family.extended(extra))
        grown = eval_with_tensor(d.ir, wider, d.structure, plan.database, d.sigma).support()
        assert_that(grown).is_equal_to(base)


def test_elimination_order_does_not_change_answers(c_query_db):
    plan, disjuncts = tensor_disjuncts(C_QUERY.replace("C()", "C(X, Z)"), c_query_db)

    for d in disjuncts:
        k = len(d.sigma.free)
        flipped = VertexOrdering(d.sigma.sequence[:k] + tuple(reversed(d.sigma.sequence[k:])), d.sigma.free)
        a = eval_with_tensor(d.ir, d.decomposition, d.structure, plan.database, d.sigma).support()
        b = eval_with_tensor(d.ir, d.decomposition, d.structure, plan.database, flipped).support()
        assert_that(b).is_equal_to(a)


# -------------------------------------------------
# End to end against the nested-loop oracle
# -------------------------------------------------

VARIABLES = ("X", "Y", "Z")
NEGATED = {1: "U", 2: "T", 3: "V"}
NAE_PARTS = ("", "X != Y", "X != Z", "Y != Z", "NAE(X, Y, Z)")

pairs = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=6)


@st.composite
def partial_matchings(draw, arity, count):
    rows = set()
    for _ in range(count):
        columns = [draw(st.permutations(range(3))) for _ in range(arity - 1)]
        keep = draw(st.integers(0, 3))
        rows |= {(i, *(col[i] for col in columns)) for i in range(keep)}
    return sorted(rows)


@st.composite
def small_databases(draw):
    return id_db({
        "R": (("a", "b"), draw(pairs)),
        "S": (("b", "c"), draw(pairs)),
        "U": (("a",), [(x,) for x in draw(st.sets(st.integers(0, 2)))]),
        "T": (("a", "c"), draw(partial_matchings(2, 2))),
        "V": (("a", "b", "c"), draw(partial_matchings(3, 1))),
    }, 3)


@st.composite
def negated_atom(draw):
    arity = draw(st.integers(1, 3))
    variables = draw(st.permutations(VARIABLES))[:arity]
    return f"!{NEGATED[arity]}({', '.join(variables)})"


@st.composite
def queries(draw):
    negated = draw(st.lists(negated_atom(), max_size=2))
    if len(negated) == 1 and draw(st.booleans()):
        negated.append(negated[0])
    head = draw(st.lists(st.sampled_from(VARIABLES), unique=True, max_size=3))
    nae = draw(st.sampled_from(NAE_PARTS))
    body = ["R(X, Y)", "S(Y, Z)", *negated] + ([nae] if nae else [])
    return f"Q({', '.join(head)}) :- {', '.join(body)}."


@pytest.mark.parametrize("strategy", ["tensor", "colors-join", "direct", "auto"])
@settings(max_examples=130, deadline=None)
@given(text=queries(), db=small_databases(), seed=st.integers(0, 3),
       family_mode=st.sampled_from(["auto", "random", "greedy", "explicit"]),
       untangle_mode=st.sampled_from(["branch", "padded"]))
def test_random_queries_match_oracle(strategy, text, db, seed, family_mode, untangle_mode):
    answers = engine_answers(text, db, strategy=strategy, seed=seed, family_mode=family_mode,
                             untangle_mode=untangle_mode)

    assert_that(answers).is_equal_to(oracle(text, db))


@pytest.mark.parametrize("seed", range(3))
def test_walks_and_paths_across_seeds(seed):
    graph = random_graph(12, 22, seed)
    db = graph_database(graph)
    rows = edge_rows(graph)

    assert_that(engine_answers(walk_query(3), db, seed=seed)).is_equal_to(walk_endpoints(rows, 3))
    assert_that(engine_answers(path_query(3), db, seed=seed)).is_equal_to(path_endpoints(rows, 3))


@pytest.mark.parametrize("seed", range(3))
def test_induced_paths_across_seeds(seed):
    graph = random_graph(7, 7, seed, directed=False, max_degree=2)
    db = graph_database(graph)
    rows = edge_rows(graph)

    assert_that(engine_answers(induced_path_query(2), db, seed=seed)).is_equal_to(
        path_endpoints(rows, 2, induced=True))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_length_four_workloads_slow(seed):
    graph = random_graph(30, 45, seed, max_degree=4)
    db = graph_database(graph)
    rows = edge_rows(graph)

    assert_that(engine_answers(walk_query(4), db, seed=seed)).is_equal_to(walk_endpoints(rows, 4))
    assert_that(engine_answers(path_query(4), db, seed=seed)).is_equal_to(path_endpoints(rows, 4))

    # six negated E atoms of degree 3 untangle past DISJUNCT_CAP
    sparse = random_graph(30, 40, seed, directed=False, max_degree=3)
    engine = QueryEngine(graph_database(sparse), EngineConfig(strategy="auto", seed=seed))
    result = engine.answer(parse_query(induced_path_query(4)))
    assert_that(result.plan.switched).is_true()
    assert_that(result.plan.strategy).is_equal_to("direct")
    assert_that(result.answers).is_equal_to(path_endpoints(edge_rows(sparse), 4, induced=True))


@pytest.mark.slow
@pytest.mark.parametrize("strategy", ["tensor", "colors-join", "auto"])
@pytest.mark.parametrize("seed", range(10))
def test_induced_paths_through_color_coding_slow(seed, strategy):
    # one negated E atom: at most 2^5 disjuncts, well under DISJUNCT_CAP
    graph = random_graph(30, 40, seed, directed=False, max_degree=3)
    engine = QueryEngine(graph_database(graph), EngineConfig(strategy=strategy, seed=seed))

    result = engine.answer(parse_query(induced_path_query(2)))

    assert_that(result.plan.switched).is_false()
    assert_that(result.plan.strategy).is_equal_to("colors-join" if strategy == "colors-join" else "tensor")
    assert_that(result.answers).is_equal_to(path_endpoints(edge_rows(graph), 2, induced=True))


# -------------------------------------------------
# Strategies
# -------------------------------------------------

def test_auto_switches_to_direct_over_the_cap():
    graph = random_graph(10, 14, 1, directed=False, max_degree=3)
    db = graph_database(graph)
    engine = QueryEngine(db, EngineConfig(strategy="auto", disjunct_cap=1))

    result = engine.answer(parse_query(induced_path_query(4)))

    assert_that(result.plan.switched).is_true()
    assert_that(result.plan.strategy).is_equal_to("direct")
    assert_that(result.answers).is_equal_to(path_endpoints(edge_rows(graph), 4, induced=True))


def test_tensor_over_the_cap_raises():
    graph = random_graph(10, 14, 1, directed=False, max_degree=3)
    engine = QueryEngine(graph_database(graph), EngineConfig(strategy="tensor", disjunct_cap=1))

    with pytest.raises(DisjunctBudgetExceeded):
        engine.plan(parse_query(induced_path_query(4)))


TRIANGLE_NAE = "Q(X, Z) :- R(X, Y), S(Y, Z), X != Y, Y != Z, X != Z."


def ring_db(n):
    return id_db({
        "R": (("a", "b"), [(i, (i + 1) % n) for i in range(n)]),
        "S": (("b", "c"), [(i, (i + 2) % n) for i in range(n)]),
    }, n)


@pytest.mark.parametrize("n", [3, 6])
@pytest.mark.parametrize("strategy", ["tensor", "colors-join"])
def test_quotient_fallback_still_answers(strategy, n):
    db = ring_db(n)

    assert_that(engine_answers(TRIANGLE_NAE, db, strategy=strategy, quotient_cap=2)).is_equal_to(
        oracle(TRIANGLE_NAE, db))


def test_family_budget_raises_for_tensor():
    engine = QueryEngine(ring_db(6), EngineConfig(strategy="tensor", quotient_cap=2, family_cell_budget=50))

    with pytest.raises(FamilyBudgetExceeded):
        engine.plan(parse_query(TRIANGLE_NAE))


def test_auto_switches_to_direct_over_the_family_budget():
    db = ring_db(6)
    engine = QueryEngine(db, EngineConfig(strategy="auto", quotient_cap=2, family_cell_budget=50))

    result = engine.answer(parse_query(TRIANGLE_NAE))

    assert_that(result.plan.switched).is_true()
    assert_that(result.plan.strategy).is_equal_to("direct")
    assert_that(result.answers).is_equal_to(oracle(TRIANGLE_NAE, db))


@pytest.mark.parametrize("strategy", ["tensor", "colors-join"])
def test_nae_variable_without_values_gives_no_answers(strategy):
    # Z meets R's {1} and S's {3}; Y alone still has two values
    db = id_db({"R": (("a", "b"), [(0, 1)]), "S": (("c", "b"), [(2, 3), (4, 3)])})
    text = "Q(Z) :- R(X, Z), S(Y, Z), Z != Y."

    plan, _ = tensor_disjuncts(text, db, strategy=strategy)

    assert_that(plan.disjuncts[0].empty).is_true()
    assert_that(engine_answers(text, db, strategy=strategy)).is_empty()
    assert_that(oracle(text, db)).is_empty()


def test_positive_query_is_one_plain_disjunct():
    graph = random_graph(8, 14, 2)
    db = graph_database(graph)
    engine = QueryEngine(db)

    plan = engine.plan(parse_query(walk_query(2)))
    result = engine.execute(plan)

    assert_that(plan.B).is_equal_to(1)
    assert_that(plan.disjuncts[0].structure).is_none()
    q = bound(walk_query(2), db)
    expected = insideout(q.ir, q.database, plan.sigma).reorder(q.ir.free_vars).support()
    assert_that(result.answers).is_equal_to(expected)


@pytest.mark.parametrize("strategy", ["direct", "naive", "colors-join"])
def test_strategies_agree_on_c_instance(strategy):
    db = c_query_instance(24, seed=3)
    text = C_QUERY.replace("C()", "C(X)")

    assert_that(engine_answers(text, db, strategy=strategy)).is_equal_to(engine_answers(text, db))


def test_answer_query_returns_raw_ids(c_query_db):
    q = parse_query("Q(X, Z) :- R(X, Y), S(Y, Z), !T(X, Z).")

    assert_that(answer_query(q, c_query_db)).is_equal_to(oracle(print_query(q), c_query_db))


def test_execute_records_timings_per_disjunct(c_query_db):
    engine = QueryEngine(c_query_db)
    result = engine.answer(parse_query(C_QUERY))

    assert_that(set(result.timings)).is_equal_to({d.index for d in result.plan.disjuncts})
    assert_that(sum(result.counts.values())).is_greater_than_or_equal_to(len(result.answers))


def test_unknown_strategy_rejected(c_query_db):
    with pytest.raises(PlanError):
        QueryEngine(c_query_db, EngineConfig(strategy="bogus"))
