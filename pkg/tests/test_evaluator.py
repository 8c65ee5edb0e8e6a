import itertools

import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from oracles import naive_fo
from msl.evaluator import (
    Cover,
    Evaluator,
    VariantMismatch,
    Verdict,
    eval_neg,
    eval_pos,
    eval_variant_singleton,
    evaluate,
)
from msl.fixtures import disjoint_model_set
from msl.fo import EvaluationError, UnboundVariable, eval_fo
from msl.models import ChoiceFunction, Interpretation, ModelSet, Structure, extend_choice
from msl.parser import parse
from msl.random_gen import random_fo, random_interpretation, random_lc, random_model_set, random_variant
from msl.syntax import Const, Exists, Fragment, Not, classify, walk


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_compiled_fo_matches_textbook_definition(seed):
    rng = rng_of(seed)
    f = random_fo(rng, 4, counting=True)
    i = random_interpretation(rng)
    assert eval_fo(i, f) == naive_fo(i.structure, i.env, f)


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_flatness_without_fast_path(seed):
    rng = rng_of(seed)
    f, ms = random_fo(rng, 3), random_model_set(rng)
    want = Verdict(all(eval_fo(m, f) for m in ms), all(not eval_fo(m, f) for m in ms))
    assert evaluate(ms, f, fast_path=False) == want


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_fast_path_changes_nothing(seed):
    rng = rng_of(seed)
    f, ms = random_lc(rng, 3, star=True), random_model_set(rng)
    assert evaluate(ms, f) == evaluate(ms, f, fast_path=False)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_double_negation(seed):
    rng = rng_of(seed)
    f, ms = random_lc(rng, 3, star=True), random_model_set(rng)
    assert evaluate(ms, Not(Not(f))) == evaluate(ms, f)
    assert evaluate(ms, Not(f)) == Verdict(*reversed(tuple(vars(evaluate(ms, f)).values())))


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_three_way_and_partition_covers_agree(seed):
    rng = rng_of(seed)
    f, ms = random_lc(rng, 3, star=True), random_model_set(rng)
    assert Evaluator(cover="three-way").neg(ms, f) == Evaluator(cover="partition").neg(ms, f)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_pruned_search_matches_literal_search(seed):
    rng = rng_of(seed)
    f = random_lc(rng, 2, star=True)
    ms = random_model_set(rng, max_members=3, max_domain=2)
    assert evaluate(ms, f, fast_path=False, prune=False) == evaluate(ms, f, fast_path=False, prune=True)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_lc_positive_verdicts_are_closed_under_subsets(seed):
    rng = rng_of(seed)
    f = random_lc(rng, 3)
    ms = random_model_set(rng, max_members=3)
    v = evaluate(ms, f, fast_path=False, prune=False)
    members = ms.ordered()
    for k in range(len(members)):
        for sub in itertools.combinations(members, k):
            w = evaluate(ms.subset(sub), f, fast_path=False, prune=False)
            assert not v.positive or w.positive
            if not any(isinstance(n, Const) for n in walk(f)):
                assert not v.negative or w.negative


def test_negated_const_breaks_subset_closure():
    # M |=- C x. P(x) on the disjoint set (common domain empty), but not on one member
    f = parse("C x. P(x)")
    ms = ModelSet.of_structures([Structure([0], {"P": [(0,)]}), Structure([1])])
    assert eval_neg(ms, f)
    one = ms.subset([m for m in ms if m.structure.domain == {0}])
    assert not eval_neg(one, f)


def test_disjoint_members_and_constant_choice():
    ms = disjoint_model_set()
    assert not eval_pos(ms, parse("C x. x=x"))
    assert eval_neg(ms, parse("C x. x=x"))
    assert eval_pos(ms, parse("(C x. x=x | C x. x=x)"))


def test_both_turnstiles_can_hold_on_a_non_empty_set():
    v = evaluate(disjoint_model_set(), parse("(C x. x=x | C x. x=x)"))
    assert v == Verdict(True, True)


def test_empty_model_set_satisfies_both():
    assert evaluate(ModelSet(), parse("(P(x) & ~P(x))")) == Verdict(True, True)


def test_unbound_variable_rejected():
    with pytest.raises(UnboundVariable):
        eval_pos(ModelSet.of_structures([Structure([0])]), parse("P(x)"))


def test_modal_formula_rejected():
    with pytest.raises(EvaluationError):
        eval_pos(disjoint_model_set(), parse("<> p"))


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_variants_in_lc_agree_with_fo(seed):
    rng = rng_of(seed)
    f = random_fo(rng, 3)
    g = random_variant(rng, f)
    if Fragment.LC in classify(g):
        v = eval_variant_singleton(random_interpretation(rng), g)
        assert v.positive != v.negative


def test_variant_claim_fails_with_const_under_negation():
    # not E x. not C y. R(x,y): classically every x has an R-successor
    s = Structure([0, 1], {"R": [(0, 1), (1, 0)]})
    i = Interpretation(s)
    g = parse("~E x. ~C y. R(x,y)")
    assert eval_fo(i, parse("~E x. ~E y. R(x,y)"))
    assert evaluate(ModelSet([i]), g) == Verdict(False, False)
    with pytest.raises(VariantMismatch):
        eval_variant_singleton(i, g)


def test_choice_function_count_without_pruning():
    ms = ModelSet.of_structures([Structure([0, 1]), Structure([0, 1, 2]), Structure([5])])
    ev = Evaluator(fast_path=False, prune=False)
    assert not ev.pos(ms, parse("E x. P(x)"))
    assert ev.stats["choice_functions"] == 6


def test_choice_witness_reverifies():
    ms = ModelSet.of_structures([Structure([0, 1], {"P": [(1,)]}), Structure([2, 3], {"P": [(2,)]})])
    f = parse("E x. P(x)")
    ev = Evaluator(fast_path=False)
    w = ev.witness(ms, f)
    assert isinstance(w, ChoiceFunction) and w.values == (1, 2)
    assert eval_pos(extend_choice(ms, w, "x"), parse("P(x)"))


def test_constant_witness():
    ms = ModelSet.of_structures([Structure([0, 1], {"P": [(1,)]}), Structure([1, 3], {"P": [(1,)]})])
    w = Evaluator().witness(ms, parse("C x. P(x)"))
    assert w == ChoiceFunction((1, 1), True)


def test_cover_witness_splits_members():
    ms = ModelSet.of_structures([Structure([0], {"P": [(0,)]}), Structure([1], {"Q": [(1,)]})])
    f = parse("(C x. P(x) & C x. Q(x))")
    w = Evaluator().witness(ms, f, positive=False)
    assert isinstance(w, Cover)
    assert w.left | w.right == ms
    assert eval_neg(w.left, parse("C x. P(x)")) and eval_neg(w.right, parse("C x. Q(x)"))


def test_cover_limit_is_reported():
    ms = ModelSet.of_structures([Structure([i, i + 10]) for i in range(6)])
    f = parse("(C x. x=x & C y. y=y)")
    with pytest.raises(EvaluationError):
        Evaluator(max_cover_members=3).neg(ms, f)
