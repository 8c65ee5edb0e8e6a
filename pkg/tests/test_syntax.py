import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from msl.corpus import CORPUS_SIG, LC_SENTENCES, corpus
from msl.parser import ParseError, parse
from msl.printer import to_text, to_unicode
from msl.random_gen import random_fo, random_lc, random_modal, random_variant
from msl.syntax import (
    Const,
    Diamond,
    Exists,
    Fragment,
    Not,
    Prop,
    Signature,
    box,
    classify,
    depth,
    free_vars,
    is_existential_variant,
    is_two_variable,
    rank,
    swap_quantifiers,
    quantifier_positions,
    to_first_order,
    walk,
)


def test_parse_spans_point_at_source():
    f = parse("E x. R(x,x)")
    assert f.body.span == (5, 11)


@pytest.mark.parametrize("text,line,col", [
    ("(P(x) & Q(x)", 1, 13),
    ("E . P(x)", 1, 3),
    ("P(x) & Q(x)", 1, 6),
    ("(P(x)\n & @)", 2, 4),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_arity_is_checked_against_signature_and_within_formula():
    with pytest.raises(ParseError):
        parse("R(x)", Signature({"R": 2}))
    with pytest.raises(ParseError):
        parse("(R(x) & R(x,y))")


def test_derived_forms():
    assert parse("A x. P(x)") == Not(Exists("x", Not(parse("P(x)"))))
    assert parse("[] p") == box(Prop("p"))


def test_corpus_is_lc_sentences():
    fs = corpus()
    assert len(fs) == len(LC_SENTENCES) == 30
    for f in fs:
        assert Fragment.LC in classify(f)
        assert not free_vars(f)
        assert is_two_variable(f)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_round_trip_random(seed):
    rng = rng_of(seed)
    for f in (random_lc(rng, 4, star=True), random_fo(rng, 4, counting=True), random_modal(rng, 3)):
        assert parse(to_text(f)) == f


def test_unicode_printer():
    assert to_unicode(parse("C x. ~(P(x) & <> p)")) == "Cx¬(Px∧◇p)"


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_classify_fragments_nest(seed):
    rng = rng_of(seed)
    f = random_lc(rng, 4, star=rng.random() < 0.5)
    c = classify(f)
    assert Fragment.LC_STAR in c
    if Fragment.FO in c:
        assert Fragment.LC in c
    assert (Fragment.FO in c) == (not any(isinstance(n, Const) for n in walk(f)))


def test_lc_excludes_const_under_disjunction_operands():
    assert classify(parse("(C x. P(x) | P(y))")) == {Fragment.LC_STAR}
    assert classify(parse("(P(y) -> C x. P(x))")) == {Fragment.LC_STAR}
    assert Fragment.LC in classify(parse("C x. (P(x) | ~P(x))"))


def test_modal_fragments():
    assert classify(parse("<> (p & ~q)")) == {Fragment.MODAL_PROP, Fragment.MODAL_FO}
    assert classify(parse("E y. <> R(x,y)")) == {Fragment.MODAL_FO}
    assert classify(parse("<> C x. P(x)")) == frozenset()


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_rank_is_modal_nesting(seed):
    rng = rng_of(seed)
    r = rng.randint(0, 4)
    f = random_modal(rng, r, depth=6)
    assert rank(f) <= r
    assert rank(Diamond(f)) == rank(f) + 1
    assert rank(Not(f)) == rank(f)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_variants_are_variants(seed):
    rng = rng_of(seed)
    f = random_fo(rng, 4)
    g = random_variant(rng, f)
    assert is_existential_variant(f, g) and is_existential_variant(g, f)
    assert to_first_order(g) == f
    n = quantifier_positions(f)
    assert swap_quantifiers(swap_quantifiers(f, (1 << n) - 1), (1 << n) - 1) == f


def test_variant_rejects_other_changes():
    assert not is_existential_variant(parse("E x. P(x)"), parse("E y. P(y)"))
    assert not is_existential_variant(parse("E x. P(x)"), parse("~E x. P(x)"))


def test_depth_counts_nodes():
    assert depth(parse("P(x)")) == 0
    assert depth(parse("E x. ~P(x)")) == 2
