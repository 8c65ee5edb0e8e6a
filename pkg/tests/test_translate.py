import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from msl.corpus import corpus
from msl.evaluator import eval_pos
from msl.fo import eval_fo
from msl.models import Interpretation, ModelSet, Structure, add_domain_predicate
from msl.parser import parse
from msl.random_gen import random_lc, random_model_set
from msl.suite import _homomorphic, reduction_failures
from msl.translate import (
    SatStatus,
    TranslationError,
    bounded_fo_sat,
    bounded_lc_sat,
    check_translation_claim,
    lc_witness_from_fo,
    translate,
)
from msl.syntax import Const, walk


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_translation_only_rewrites_const(seed):
    f = random_lc(rng_of(seed), 4, star=True)
    t = translate(f, "D")
    assert _homomorphic(f, t, "D")
    assert not any(isinstance(n, Const) for n in walk(t))


def test_translate_refuses_clashing_name():
    with pytest.raises(TranslationError):
        translate(parse("C x. D(x)"), "D")


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_translation_claim(seed):
    rng = rng_of(seed)
    assert check_translation_claim(random_lc(rng, 3), random_model_set(rng))


def test_claim_can_fail_for_const_under_negation():
    # outside L_C the implication is not promised: a split lets each member use
    # its own constant, while D only holds the shared part of the domains
    f = parse("(P(y) | C x. R(x,x))")
    a = Interpretation(Structure([0, 1], {"R": [(0, 0), (0, 1)]}), {"y": 0})
    b = Interpretation(Structure([1], {"P": [(1,)], "R": [(1, 1)]}), {"y": 1})
    ms = ModelSet([a, b])
    assert eval_pos(ms, f)
    assert not eval_pos(add_domain_predicate(ms, "__D"), translate(f))


def test_fo_sat_reports_what_it_examined():
    r = bounded_fo_sat(parse("E x. ~(x=x)"), 2)
    assert r.status is SatStatus.UNKNOWN_WITHIN_BOUND and r.witness is None
    assert r.examined == 2  # one structure per size, nothing to assign


def test_fo_sat_witness_reverifies():
    f = parse("(E x. R(x,x) & E x. ~R(x,x))")
    r = bounded_fo_sat(f, 3)
    assert r.sat and eval_fo(r.witness, f) and len(r.witness.structure.domain) == 2


def test_lc_sat_needs_lc_sentence():
    with pytest.raises(TranslationError):
        bounded_lc_sat(parse("~C x. P(x)"), 1, 2)
    with pytest.raises(TranslationError):
        bounded_lc_sat(parse("C x. R(x,y)"), 1, 2)


def test_lc_sat_with_several_members():
    f = parse("(C x. P(x) & E y. ~P(y))")
    r = bounded_lc_sat(f, 2, 2)
    assert r.sat and eval_pos(r.witness, f)


def test_reduction_on_the_corpus():
    assert reduction_failures(3) == []


def test_witness_from_fo_model():
    for f in corpus():
        r = bounded_fo_sat(translate(f), 3)
        if r.sat:
            assert eval_pos(lc_witness_from_fo(r.witness), f)
