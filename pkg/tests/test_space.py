import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kwise.space import (
    SampleSpace,
    SpaceFormatError,
    marginal,
    max_point_probability,
    min_entropy,
    parse_fraction,
    shannon_entropy,
)
from kwise.construct import pairwise_space_from_hadamard, sylvester_hadamard, threewise_space

from _strategies import spaces

F = Fraction


@pytest.fixture
def three_point():
    return SampleSpace(3, 2, [[0, 0, 0], [0, 1, 1], [0, 1, 0]], ["1/2", "1/4", "1/4"])


@pytest.fixture
def hadamard4():
    return pairwise_space_from_hadamard(sylvester_hadamard(2))


def test_marginal_examples(three_point, hadamard4):
    two = SampleSpace(2, 2, [[0, 0], [1, 1]], ["1/2", "1/2"])
    assert marginal(two, 0).probs == (F(1, 2), F(1, 2))
    assert marginal(hadamard4, 1).probs == (F(1, 2), F(1, 2))
    assert marginal(three_point, 2).probs == (F(3, 4), F(1, 4))


def test_marginal_index_error(three_point):
    with pytest.raises(IndexError):
        marginal(three_point, 3)
    with pytest.raises(IndexError):
        marginal(three_point, -1)


def test_entropy_examples(three_point, hadamard4):
    single = SampleSpace(2, 2, [[1, 0]], [1])
    assert shannon_entropy(single) == 0.0
    assert min_entropy(single) == 0.0
    uniform4 = SampleSpace.uniform(np.array([[0, 0], [0, 1], [1, 0], [1, 1]]))
    assert shannon_entropy(uniform4) == 2.0
    assert shannon_entropy(three_point) == pytest.approx(1.5, abs=1e-15)
    assert min_entropy(three_point) == 1.0
    assert min_entropy(hadamard4) == 2.0
    uniform8 = SampleSpace.uniform(np.array([[(c >> i) & 1 for i in range(3)] for c in range(8)]))
    assert min_entropy(uniform8) == 3.0


def test_max_point_probability(three_point):
    assert max_point_probability(three_point) == F(1, 2)
    assert max_point_probability(pairwise_space_from_hadamard(sylvester_hadamard(3))) == F(1, 8)
    assert max_point_probability(threewise_space(2)) == F(1, 8)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 12, 100, 1000])
def test_uniform_entropy_is_log_m(m):
    pts = np.array([[(c >> i) & 1 for i in range(10)] for c in range(m)])
    s = SampleSpace.uniform(pts)
    assert abs(shannon_entropy(s) - math.log2(m)) <= 1e-12
    assert abs(min_entropy(s) - math.log2(m)) <= 1e-12


def test_invariants_rejected():
    with pytest.raises(ValueError, match="sum to exactly 1"):
        SampleSpace(1, 2, [[0], [1]], ["1/2", "1/3"])
    with pytest.raises(ValueError, match="distinct"):
        SampleSpace(1, 2, [[0], [0]], ["1/2", "1/2"])
    with pytest.raises(ValueError, match="strictly positive"):
        SampleSpace(1, 2, [[0], [1]], [1, 0])
    with pytest.raises(ValueError, match="0..1"):
        SampleSpace(1, 2, [[2]], [1])
    with pytest.raises(ValueError, match="shape"):
        SampleSpace(2, 2, [[0]], [1])


def test_support_sorted_and_points_readonly():
    s = SampleSpace(2, 3, [[2, 0], [0, 1], [1, 2]], ["1/3", "1/3", "1/3"])
    assert [pt for pt, _ in s.support()] == [(0, 1), (1, 2), (2, 0)]
    with pytest.raises(ValueError):
        s.points[0, 0] = 1


def test_parse_fraction_rejects_decimals():
    assert parse_fraction("3/9") == F(1, 3)
    assert parse_fraction(2) == 2
    for bad in ("0.5", "1e-3", 0.5, "x"):
        with pytest.raises(ValueError):
            parse_fraction(bad)


def test_json_roundtrip(three_point):
    text = three_point.dumps()
    assert SampleSpace.loads(text) == three_point
    data = three_point.to_dict()
    assert [e["point"] for e in data["support"]] == [[0, 0, 0], [0, 1, 0], [0, 1, 1]]
    assert data["support"][0]["prob"] == "1/2"


def test_json_accepts_any_order_and_rejects_garbage():
    text = '{"n":1,"k":2,"support":[{"point":[1],"prob":"2/3"},{"point":[0],"prob":"1/3"}]}'
    s = SampleSpace.loads(text)
    assert s.support() == [((0,), F(1, 3)), ((1,), F(2, 3))]
    for bad in (
        text[:30],
        '{"n":1,"k":2}',
        '{"n":1,"k":2,"support":[{"point":[0],"prob":0.5},{"point":[1],"prob":"1/2"}]}',
        '{"n":2,"k":2,"support":[{"point":[0],"prob":"1"}]}',
        "[]",
    ):
        with pytest.raises(SpaceFormatError):
            SampleSpace.loads(bad)


@given(spaces())
@settings(max_examples=150, deadline=None)
def test_min_entropy_below_shannon(space):
    assert min_entropy(space) <= shannon_entropy(space) + 1e-12


@given(spaces())
@settings(max_examples=150, deadline=None)
def test_marginals_sum_to_one_exactly(space):
    for j in range(space.n):
        mg = marginal(space, j)
        assert sum(mg.probs) == 1
        assert mg.k == space.k
        # independent summation: filter the support by value
        for v in range(space.k):
            assert mg[v] == sum((p for pt, p in space.support() if pt[j] == v), F(0))


@given(spaces(), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_permuting_support_changes_nothing(space, rnd):
    sup = space.support()
    rnd.shuffle(sup)
    other = SampleSpace(space.n, space.k, [pt for pt, _ in sup], [p for _, p in sup])
    assert other == space
    assert abs(shannon_entropy(other) - shannon_entropy(space)) <= 1e-12
    assert abs(min_entropy(other) - min_entropy(space)) <= 1e-12
    assert max_point_probability(other) == max_point_probability(space)
    for j in range(space.n):
        assert marginal(other, j) == marginal(space, j)


def test_from_weighted_merges_duplicates():
    s = SampleSpace.from_weighted(1, 2, np.array([[0], [1], [0]]), [F(1, 4), F(1, 2), F(1, 4)])
    assert s.support() == [((0,), F(1, 2)), ((1,), F(1, 2))]


def test_product_space():
    s = SampleSpace.product([[F(1, 3), F(2, 3)], [F(1, 2), F(1, 4), F(1, 4)]])
    assert s.m == 6 and s.k == 3
    assert marginal(s, 0).probs == (F(1, 3), F(2, 3), F(0))
    assert marginal(s, 1).probs == (F(1, 2), F(1, 4), F(1, 4))
