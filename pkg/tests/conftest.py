import pytest

from core.hypergraph import Hypergraph

from tests.helpers import id_db


@pytest.fixture
def triangle():
    return Hypergraph.of([{"A", "B"}, {"B", "C"}, {"A", "C"}])


@pytest.fixture
def path3():
    return Hypergraph.of([{1, 2}, {2, 3}])


@pytest.fixture
def c_query_db():
    """Worked example: R, S arbitrary, T a union of two matchings."""
    return id_db({
        "R": (("a", "b"), [(0, 1), (1, 2), (2, 3), (3, 0)]),
        "S": (("b", "c"), [(1, 2), (2, 3), (3, 0), (0, 1), (1, 3)]),
        "T": (("a", "c"), [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 2), (2, 3), (3, 0)]),
    })
