import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from msl.models import (
    ChoiceFunction,
    Interpretation,
    ModelError,
    ModelSet,
    Structure,
    add_domain_predicate,
    all_structures,
    common_domain,
    count_choice_functions,
    enumerate_choice_functions,
    extend_all,
    extend_choice,
    extend_set,
)
from msl.random_gen import random_model_set


def test_structure_validation():
    with pytest.raises(ModelError):
        Structure([])
    with pytest.raises(ModelError):
        Structure([0], {"R": [(0, 1)]})
    with pytest.raises(ModelError):
        Structure([0], {"R": [(0,), (0, 0)]})
    with pytest.raises(ModelError):
        Interpretation(Structure([0]), {"x": 3})


def test_empty_and_missing_relations_coincide():
    assert Structure([0], {"R": []}) == Structure([0])


def test_model_set_needs_one_assignment_domain():
    a = Interpretation(Structure([0]), {"x": 0})
    b = Interpretation(Structure([0]), {})
    with pytest.raises(ModelError):
        ModelSet([a, b])


def test_extend_choice_checks_its_function():
    ms = ModelSet.of_structures([Structure([0, 1]), Structure([1, 2])])
    with pytest.raises(ModelError):
        extend_choice(ms, ChoiceFunction((0,)), "x")
    assert len(extend_choice(ms, ChoiceFunction((0, 1)), "x")) == 2
    with pytest.raises(ModelError):
        extend_choice(ms, ChoiceFunction((2, 0)), "x")
    with pytest.raises(ModelError):
        extend_choice(ms, ChoiceFunction((0, 1), True), "x")
    with pytest.raises(ModelError):
        extend_set(ms, [0], "x")


def test_domain_predicate_refuses_clash():
    ms = ModelSet.of_structures([Structure([0], {"D": [(0,)]})])
    with pytest.raises(ModelError):
        add_domain_predicate(ms, "D")


def test_all_structures_counts():
    assert len(list(all_structures({"R": 2}, [0, 1]))) == 16
    assert len(list(all_structures({"P": 1, "R": 2}, [0, 1]))) == 64


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_model_core_invariants(seed):
    rng = rng_of(seed)
    ms = random_model_set(rng, shared_domain=rng.random() < 0.5)
    if len({m.structure.domain for m in ms}) == 1:
        assert extend_all(ms, "z") == extend_set(ms, common_domain(ms), "z")
    fns = list(enumerate_choice_functions(ms))
    assert len(fns) == count_choice_functions(ms)
    out = extend_choice(ms, rng.choice(fns), "z")
    assert out.structures() == ms.structures()
    assert len(out) <= len(ms)
    consts = list(enumerate_choice_functions(ms, True))
    assert len(consts) == len(common_domain(ms))
    other = random_model_set(rng)
    assert common_domain(ms | other) == common_domain(ms) & common_domain(other)
