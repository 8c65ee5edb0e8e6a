import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from msl.fixtures import even_odd, pointed
from msl.fo import eval_fo
from msl.minor import ALWAYS_ACCEPT, MAJORITY, MINOR_EXISTS, MINOR_FORALL, witness_check, witness_violations
from msl.models import Interpretation, ModelError, Structure
from msl.parser import parse
from msl.perspectives import (
    Perspective,
    RankError,
    RegularityError,
    filter_implies,
    minor_eval_modal,
    minor_eval_quant,
    persp_eval,
    persp_eval_signed,
    restrict,
)
from msl.random_gen import random_modal, random_perspective
from msl.syntax import Diamond, MinorModal, Not, rank, walk


def test_perspective_shape_is_checked():
    leaf = pointed(["p"])
    with pytest.raises(ModelError):
        Perspective(2, [leaf])
    with pytest.raises(ModelError):
        Perspective(1, [Perspective(1, [leaf])])
    with pytest.raises(ModelError):
        Perspective.nest([[leaf], [[leaf]]])


def test_regularity_flags():
    p = Perspective(2, [Perspective(1, [pointed(["p"])]), Perspective(1, [pointed([], domain=(0, 1))])])
    assert p.no_empty_levels() and not p.is_regular()
    assert not Perspective(2, [Perspective(1, [])]).no_empty_levels()


def test_rank_above_perspective_rejected():
    with pytest.raises(RankError):
        persp_eval(Perspective(1, [pointed(["p"])]), parse("<> <> p"))


def test_signed_needs_non_empty_levels():
    with pytest.raises(RegularityError):
        persp_eval_signed(Perspective(2, [Perspective(1, [])]), parse("<> p"))


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_rank_one_modal_free_agrees_with_leaves(seed):
    rng = rng_of(seed)
    p = random_perspective(rng, 1)
    f = random_modal(rng, 0)
    assert persp_eval(p, f) == all(eval_fo(m, f) for m in p.members)
    v = persp_eval_signed(p, f)
    assert v.positive == all(eval_fo(m, f) for m in p.members)
    assert v.negative == all(not eval_fo(m, f) for m in p.members)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_restrict_is_idempotent(seed):
    rng = rng_of(seed)
    r = rng.randint(1, 3)
    p = random_perspective(rng, r)
    chi = random_modal(rng, rng.randint(0, r - 1), connectives=("not", "and", "dia"))
    for c in (False, True):
        once = restrict(p, chi, c)
        if once:
            assert restrict(once, chi, c) == once


def test_restrict_needs_lower_rank():
    with pytest.raises(RankError):
        restrict(Perspective(1, [pointed(["p"])]), parse("<> p"))


def test_restrict_drops_emptied_children():
    a, b = pointed(["p"]), pointed([], domain=(0, 1))
    p = Perspective(2, [Perspective(1, [a]), Perspective(1, [b])])
    assert restrict(p, parse("p")) == Perspective(2, [Perspective(1, [a])])


def _negation_only_on_rank0(f):
    return all(rank(n.body) == 0 for n in walk(f) if isinstance(n, Not))


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_first_and_signed_agree_when_negation_stays_at_rank_zero(seed):
    rng = rng_of(seed)
    r = rng.randint(1, 3)
    p = random_perspective(rng, r)
    f = random_modal(rng, r, connectives=("not", "and", "dia"))
    if _negation_only_on_rank0(f):
        assert persp_eval(p, f) == persp_eval_signed(p, f).positive


def test_first_and_signed_differ_on_negated_mixed_conjunction():
    # first take: not(p & <>q) holds because p fails at B;
    # signed: neither <>q nor the lower-rank p is refuted everywhere
    a, b = pointed(["p"]), pointed(["q"], domain=(0, 1))
    p = Perspective(1, [a, b])
    f = parse("~(p & <> q)")
    assert persp_eval(p, f)
    assert persp_eval_signed(p, f) == type(persp_eval_signed(p, f))(False, False)


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_signed_verdicts_exclusive_on_strongly_regular(seed):
    rng = rng_of(seed)
    r = rng.randint(1, 3)
    p = random_perspective(rng, r)
    assert p.is_strongly_regular()
    v = persp_eval_signed(p, random_modal(rng, r))
    assert not (v.positive and v.negative)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_minor_exists_is_diamond(seed):
    rng = rng_of(seed)
    r = rng.randint(1, 3)
    p = random_perspective(rng, r)
    body = random_modal(rng, r - 1)
    if rank(body) == r - 1:
        assert minor_eval_modal(p, MINOR_EXISTS, body) == persp_eval_signed(p, Diamond(body))


def test_minor_modal_syntax_goes_through_the_evaluator():
    p = Perspective(1, [pointed(["p"]), pointed([], domain=(0, 1))])
    assert persp_eval_signed(p, parse("<Q:exists> p")) == persp_eval_signed(p, parse("<> p"))
    assert persp_eval_signed(p, parse("<Q:forall> p")).negative


def test_majority_split_children():
    p = Perspective(1, [pointed(["p"]), pointed([], domain=(0, 1))])
    v = minor_eval_modal(p, MAJORITY, parse("p"))
    assert not v.positive
    assert v.negative  # two children, one refutes: 2*1 >= 2
    three = Perspective(1, [pointed(["p"]), pointed(["p"], domain=(0, 1)), pointed([], domain=(0, 2))])
    v = minor_eval_modal(three, MAJORITY, parse("p"))
    assert v.positive and not v.negative


def test_minor_quantifier_over_model_domain():
    leaves = [pointed(["p"], domain=(0, 1), point=0), pointed([], domain=(0, 1), point=1)]
    p = Perspective(1, leaves)
    # p(y) with y=0: true at the first leaf, false at the second
    v = minor_eval_quant(p, MINOR_EXISTS, "x", parse("p"))
    assert not v.positive
    with pytest.raises(RegularityError):
        minor_eval_quant(Perspective(1, [pointed(["p"]), pointed([], domain=(0, 1))]), MINOR_EXISTS, "x", parse("p"))


def test_witness_conditions():
    for q in (MINOR_EXISTS, MINOR_FORALL, MAJORITY):
        assert witness_check(q, q.base, 4), witness_violations(q, q.base, 4)
    bad = witness_violations(ALWAYS_ACCEPT, MINOR_EXISTS.base, 4)
    assert bad and not witness_check(ALWAYS_ACCEPT, MINOR_EXISTS.base, 4)


def test_even_odd():
    p = even_odd()
    both = parse("(<> odd & <> even)")
    assert persp_eval(p, both) and persp_eval_signed(p, both).positive
    for side in ("even", "odd"):
        assert filter_implies(p, parse(side), Not(both))
        assert filter_implies(p, parse(side), Not(both), semantics="signed")
    assert persp_eval(p, parse("(even => ~(<> odd & <> even))"))


def test_filter_implies_vacuous_and_rank_checked():
    p = Perspective(1, [pointed(["p"])])
    assert filter_implies(p, parse("q"), parse("<> q"))
    with pytest.raises(RankError):
        filter_implies(Perspective(1, [pointed(["p"])]), parse("<> p"), parse("<> p"))
