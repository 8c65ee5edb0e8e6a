from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from msl.models import ModelSet, Structure
from msl.weights import WeightError, build, full_value, intersect_then_weigh, value_of


def universe(n=3):
    return ModelSet.of_structures([Structure([i]) for i in range(n)])


def sample():
    return build(universe(), [("money", [0, 1], 1), ("debt", [1, 2], -2), ("both", [1], 7)])


def test_sum_and_threshold():
    wu = sample()
    assert value_of(wu, ["money", "debt"]) == -1
    assert not wu.truth(Fraction(-1))
    assert full_value(wu) == 6


def test_repeated_names_count_once():
    assert value_of(sample(), ["money", "money"]) == 1


def test_intersection_weight():
    assert intersect_then_weigh(sample(), ["money", "debt"]) == 7
    with pytest.raises(WeightError):
        intersect_then_weigh(build(universe(), [("a", [0], 1), ("b", [1], 1)]), ["a", "b"])
    with pytest.raises(WeightError):
        intersect_then_weigh(sample(), [])


@pytest.mark.parametrize("agg,expected", [("min", -2), ("max", 7), ("count-positive", 2)])
def test_other_aggregators(agg, expected):
    wu = build(universe(), [("money", [0, 1], 1), ("debt", [1, 2], -2), ("both", [1], 7)], agg)
    assert full_value(wu) == expected


def test_bad_inputs():
    with pytest.raises(WeightError):
        build(universe(), [("x", [5], 1)])
    with pytest.raises(WeightError):
        build(universe(), [("x", [0], 1), ("x", [1], 1)])
    with pytest.raises(WeightError):
        build(universe(), [], "median")
    with pytest.raises(WeightError):
        value_of(sample(), ["nope"])
    with pytest.raises(WeightError):
        value_of(build(universe(), [], "min"), [])


def test_weights_are_exact():
    wu = build(universe(), [("a", [0], Fraction(1, 3)), ("b", [1], Fraction(2, 3))])
    assert full_value(wu) == 1


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_sum_is_additive_over_disjoint_name_sets(ws):
    wu = build(universe(), [(f"p{i}", [0], w) for i, w in enumerate(ws)])
    names = list(wu.properties)
    k = len(names) // 2
    assert value_of(wu, names) == value_of(wu, names[:k]) + value_of(wu, names[k:])
