import itertools

import numpy as np
from assertpy import assert_that
from hypothesis import given, settings
from hypothesis import strategies as st

from core.database import Relation
from engine.naive import naive_eval
from rewrite.matching import column_degree, is_matching, matching_decompose
from rewrite.untangle import UNTANGLE_PADDED, untangle_query

from tests.helpers import all_tuples, bound, id_db, untangled_answers


def rel(rows, arity=2):
    return Relation.from_rows("R", [f"c{i}" for i in range(arity)], rows)


# -------------------------------------------------
# column_degree / matching_decompose
# -------------------------------------------------

def test_column_degree_examples():
    assert_that(column_degree(rel([(1, 2), (1, 3)]))).is_equal_to(2)
    assert_that(column_degree(rel([(1, 2), (2, 3)]))).is_equal_to(1)
    assert_that(column_degree(rel([]))).is_zero()


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=30))
def test_column_degree_matches_histogram(rows):
    r = rel(rows)
    hist = max((max(np.unique(r.column(i), return_counts=True)[1]) for i in range(2)), default=0) if rows else 0

    assert_that(column_degree(r)).is_equal_to(int(hist))


def test_matching_decompose_example():
    parts = matching_decompose(rel([(1, 1), (1, 2), (2, 1)]))

    assert_that([p.relation.rows() for p in parts]).is_equal_to([[(1, 1)], [(1, 2), (2, 1)]])


def test_matching_decompose_matching_is_itself():
    parts = matching_decompose(rel([(1, 2), (2, 3), (3, 1)]))

    assert_that(parts).is_length(1)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(st.tuples(*[st.integers(0, 6)] * k), max_size=200))))
def test_matching_decompose_properties(args):
    k, rows = args
    r = rel(rows, k)
    parts = matching_decompose(r)
    ell = column_degree(r)

    union = [row for p in parts for row in p.relation.rows()]
    assert_that(sorted(union)).is_equal_to(r.rows())
    assert_that(all(is_matching(p.relation) for p in parts)).is_true()
    if rows:
        assert_that(len(parts)).is_less_than_or_equal_to(k * (ell - 1) + 1)


# -------------------------------------------------
# negate_matching / untangle_query
# -------------------------------------------------

def test_negated_matching_binary():
    db = id_db({"D": (("v",), [(1,), (2,)]), "T": (("a", "b"), [(1, 1), (2, 2)])})
    q = bound("Q(X,Z) :- D(X), D(Z), !T(X,Z).", db)
    u = untangle_query(q.ir, q.database)

    frag = u.fragments[0]
    assert_that(len(frag.w_relations[1])).is_zero()
    assert_that(untangled_answers(u)).is_equal_to({(1, 2), (2, 1)})


def test_negated_empty_relation_is_dropped():
    db = id_db({"D": (("v",), [(1,), (2,)]), "T": (("a", "b"), [])})
    q = bound("Q(X,Z) :- D(X), D(Z), !T(X,Z).", db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.B).is_equal_to(1)
    assert_that(untangled_answers(u)).is_equal_to(set(all_tuples([1, 2], 2)))


def test_negated_matching_ternary():
    db = id_db({"D": (("v",), [(1,), (2,), (3,)]), "T": (("a", "b", "c"), [(1, 2, 3)])})
    q = bound("Q(X,Y,Z) :- D(X), D(Y), D(Z), !T(X,Y,Z).", db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.B).is_equal_to(3)
    assert_that(untangled_answers(u)).is_equal_to(set(all_tuples([1, 2, 3], 3)) - {(1, 2, 3)})


def test_unary_negation_is_a_single_branch():
    db = id_db({"D": (("v",), [(1,), (2,), (3,)]), "T": (("a",), [(2,)])})
    q = bound("Q(X) :- D(X), !T(X).", db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.B).is_equal_to(1)
    assert_that(untangled_answers(u)).is_equal_to({(1,), (3,)})


def test_worked_example_has_four_disjuncts(c_query_db):
    q = bound("C() :- R(X,Y), S(Y,Z), !T(X,Z).", c_query_db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.B).is_equal_to(4)
    assert_that(u.bound).is_equal_to(8)
    for d in u.disjuncts:
        assert_that(d.negated_atoms).is_empty()
    assert_that(untangled_answers(u)).is_equal_to(naive_eval(q.ir, q.database))


def test_no_negation_is_identity():
    db = id_db({"R": (("a", "b"), [(0, 1)])})
    q = bound("Q(X) :- R(X,Y).", db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.disjuncts).is_equal_to((q.ir,))


def test_degree_three_respects_bound():
    rows = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (3, 3)]
    db = id_db({"D": (("v",), [(i,) for i in range(4)]), "T": (("a", "b"), rows)})
    q = bound("Q(X,Z) :- D(X), D(Z), !T(X,Z).", db)
    u = untangle_query(q.ir, q.database)

    assert_that(u.B).is_less_than_or_equal_to(32)
    assert_that(u.bound).is_equal_to(32)
    assert_that(untangled_answers(u)).is_equal_to(set(all_tuples(range(4), 2)) - set(rows))


def test_padded_mode_one_branch_per_matching(c_query_db):
    q = bound("C(X) :- R(X,Y), S(Y,Z), !T(X,Z).", c_query_db)
    u = untangle_query(q.ir, q.database, UNTANGLE_PADDED)

    assert_that(u.B).is_equal_to(1)
    assert_that(untangled_answers(u)).is_equal_to(naive_eval(q.ir, q.database))


QUERIES = [
    "Q(X) :- R(X,Y), S(Y,Z), !T(X,Z).",
    "Q(X,Z) :- R(X,Y), S(Y,Z), !T(X,Z), !R(Z,X).",
    "Q() :- R(X,Y), S(Y,Z), !T(Y,Z), X != Z.",
    "Q(Y) :- R(X,Y), !U(X), !T(X,Y).",
]


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(QUERIES),
    st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12),
    st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12),
    st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12),
    st.lists(st.tuples(st.integers(0, 5)), max_size=4),
    st.sampled_from(["branch", "padded"]),
)
def test_untangling_preserves_answers(text, r, s, t, u_rows, mode):
    db = id_db({
        "R": (("a", "b"), r),
        "S": (("a", "b"), s),
        "T": (("a", "b"), t),
        "U": (("a",), u_rows),
    }, domain_size=6)
    q = bound(text, db)
    u = untangle_query(q.ir, q.database, mode)

    assert_that(u.B).is_less_than_or_equal_to(max(u.bound, 1))
    assert_that(untangled_answers(u)).is_equal_to(naive_eval(q.ir, q.database))


def test_fresh_variables_are_pendant(c_query_db):
    q = bound("C() :- R(X,Y), S(Y,Z), !T(X,Z).", c_query_db)
    u = untangle_query(q.ir, q.database)

    shapes = set()
    for i, d in enumerate(u.disjuncts):
        fresh = u.fresh_variables(i)
        for y in fresh:
            holders = [a for a in d.positive_atoms if y in a.variables]
            assert_that(holders).is_length(1)
        shapes.add(len(fresh))
    assert_that(shapes).is_equal_to({0, 1, 2})
    assert_that(list(itertools.chain.from_iterable(d.nae_atoms for d in u.disjuncts))).is_not_empty()
