import itertools

import numpy as np
import pytest
from assertpy import assert_that
from hypothesis import given, settings
from hypothesis import strategies as st

from core.database import active_domain, decode_rows, encode_database
from core.errors import EmptyProjection, IngestError, UnknownVariable
from core.factor import Factor, indicator_projection
from core.hypergraph import Hypergraph
from core.seeding import SeedStreams
from core.semiring import BOOLEAN, COUNT, BitVectorSemiring

from tests.helpers import id_db


# -------------------------------------------------
# encode_database
# -------------------------------------------------

def test_encode_first_seen_ids():
    db = encode_database([("R", ["x", "y"], [("a", "b"), ("a", "c")])])

    assert_that(db.relation("R").rows()).is_equal_to([(0, 0), (0, 1)])
    assert_that(db.N).is_equal_to(2)
    assert_that(db.domain(("R", 1)).values).is_equal_to(("b", "c"))


def test_encode_empty_table():
    db = encode_database([("R", ["x"], [])])

    assert_that(len(db.relation("R"))).is_zero()
    assert_that(db.N).is_zero()


def test_encode_collapses_duplicates():
    db = encode_database([("R", ["x", "y"], [("a", "b")] * 3)])

    assert_that(len(db.relation("R"))).is_equal_to(1)


def test_encode_ragged_row_names_index():
    with pytest.raises(IngestError) as err:
        encode_database([("R", ["x", "y"], [("a", "b"), ("c",)])])

    assert_that(err.value.row).is_equal_to(1)


@given(st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from("xyz")), max_size=30))
def test_encode_decode_round_trip(rows):
    db = encode_database([("R", ["p", "q"], rows)])
    db = db.with_variables({"P": [("R", 0)], "Q": [("R", 1)]})

    decoded = decode_rows(db, ["P", "Q"], db.relation("R").rows())
    assert_that(set(decoded)).is_equal_to(set(rows))


def test_relations_are_sorted_and_read_only():
    db = id_db({"R": (("a", "b"), [(3, 1), (0, 2), (3, 0), (0, 2)])})
    rel = db.relation("R")

    assert_that(rel.rows()).is_equal_to([(0, 2), (3, 0), (3, 1)])
    with pytest.raises(ValueError):
        rel.tuples[0, 0] = 9


# -------------------------------------------------
# unify_domains / active_domain
# -------------------------------------------------

def test_unify_domains_shares_ids():
    db = encode_database([
        ("R", ["x"], [("a",), ("b",)]),
        ("S", ["y"], [("b",), ("c",)]),
    ])
    unified = db.unify_domains([[("R", 0), ("S", 0)]])

    shared = unified.domain(("R", 0))
    assert_that(unified.domain(("S", 0)).name).is_equal_to(shared.name)
    assert_that(shared.values).is_equal_to(("a", "b", "c"))
    assert_that(unified.relation("S").rows()).is_equal_to([(1,), (2,)])


def test_active_domain_single_column():
    db = id_db({"R": (("x", "y"), [(1, 2)])}).with_variables({"X": [("R", 0)]})

    assert_that(active_domain(db, "X")).is_equal_to(frozenset({1}))


def test_active_domain_union_over_columns():
    db = id_db({
        "R": (("x",), [(1,), (2,)]),
        "S": (("x",), [(2,), (3,)]),
    }).with_variables({"X": [("R", 0), ("S", 0)]})

    assert_that(active_domain(db, "X")).is_equal_to(frozenset({1, 2, 3}))


def test_active_domain_unknown_variable():
    db = id_db({"R": (("x",), [(1,)])})

    with pytest.raises(UnknownVariable):
        active_domain(db, "Z")


# -------------------------------------------------
# Semirings
# -------------------------------------------------

@settings(max_examples=300)
@given(st.tuples(st.booleans(), st.booleans(), st.booleans()))
def test_boolean_semiring_axioms(triple):
    a, b, c = triple
    s = BOOLEAN
    assert s.plus(a, b) == s.plus(b, a)
    assert s.times(a, b) == s.times(b, a)
    assert s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c))
    assert s.times(a, s.zero) == s.zero


@settings(max_examples=300)
@given(st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)))
def test_count_semiring_axioms(triple):
    a, b, c = triple
    s = COUNT
    assert s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c))
    assert s.times(a, s.zero) == s.zero


@settings(max_examples=300)
@given(st.integers(1, 200).flatmap(
    lambda r: st.tuples(st.just(r), *[st.integers(0, (1 << r) - 1)] * 3)))
def test_bitvector_agrees_bitwise_with_boolean(args):
    r, a, b, c = args
    s = BitVectorSemiring(r)

    assert s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c))
    assert s.times(a, s.zero) == s.zero
    bits_a, bits_b = s.bits(a), s.bits(b)
    assert (s.bits(s.plus(a, b)) == (bits_a | bits_b)).all()
    assert (s.bits(s.times(a, b)) == (bits_a & bits_b)).all()


def test_bitvector_packing():
    s = BitVectorSemiring(70)
    bits = np.zeros(70, dtype=bool)
    bits[[0, 3, 69]] = True
    value = s.from_bits(bits)

    assert_that(value).is_equal_to((1 << 0) | (1 << 3) | (1 << 69))
    assert_that(s.word_count).is_equal_to(2)
    assert_that(list(s.words(value))).is_equal_to([9, 1 << 5])
    assert_that(s.from_bit_matrix(np.array([bits, ~bits]))).is_equal_to([value, s.one ^ value])


# -------------------------------------------------
# Factors
# -------------------------------------------------

def test_factor_drops_zero_entries():
    f = Factor.build(("X",), {(1,): 0, (2,): 3}, COUNT)

    assert_that(f.support()).is_equal_to({(2,)})


def test_indicator_projection_single_entry():
    f = Factor.build(("X", "Y"), {(1, 2): True}, BOOLEAN)

    assert_that(dict(indicator_projection(f, {"X"}).entries)).is_equal_to({(1,): True})


def test_indicator_projection_is_idempotent_indicator():
    f = Factor.build(("X", "Y"), {(1, 2): 5, (1, 3): 7}, COUNT)

    assert_that(dict(indicator_projection(f, {"X"}).entries)).is_equal_to({(1,): 1})


def test_indicator_projection_disjoint_schema():
    f = Factor.build(("X",), {(1,): True}, BOOLEAN)

    with pytest.raises(EmptyProjection):
        indicator_projection(f, {"Y"})


@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), max_size=20),
       st.sets(st.sampled_from("XYZ"), min_size=1))
def test_indicator_projection_matches_existential(support, onto):
    f = Factor.build(("X", "Y", "Z"), {t: True for t in support}, BOOLEAN)
    projected = indicator_projection(f, onto)
    keep = [i for i, v in enumerate("XYZ") if v in onto]

    assert_that(projected.support()).is_equal_to({tuple(t[i] for i in keep) for t in support})


# -------------------------------------------------
# Hypergraph / seeds
# -------------------------------------------------

def test_hypergraph_keeps_repeated_edges():
    H = Hypergraph.of([{1, 2}, {1, 2}, {3}])

    assert_that(H.edges).is_length(3)
    assert_that(H.distinct_edges()).is_length(2)
    assert_that(H.restrict({1}).edges).is_length(2)


def test_hypergraph_rejects_stray_edge():
    with pytest.raises(ValueError):
        Hypergraph((1, 2), (frozenset({1, 5}),))


def test_seed_streams_are_order_independent():
    streams = SeedStreams(7)
    first = streams.generator("family", 0).integers(0, 1000, 5)
    streams.generator("family", 1).integers(0, 1000, 5)
    again = SeedStreams(7).generator("family", 0).integers(0, 1000, 5)

    assert_that(list(first)).is_equal_to(list(again))
    assert_that(streams.child_seed("a")).is_not_equal_to(streams.child_seed("b"))


def test_from_id_relations_domain_size():
    db = id_db({"R": (("x",), [(0,), (4,)])}, domain_size=10)

    assert_that(len(db.dictionaries["id"])).is_equal_to(10)
    assert_that(list(itertools.islice(db.dictionaries["id"].values, 3))).is_equal_to(["0", "1", "2"])
