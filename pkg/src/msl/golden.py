"""Worked examples as named checks.

Each check raises AssertionError (or an expected error fails to appear) when
the library disagrees with the worked value.  ``GOLDEN`` maps names to checks
in a fixed order; the suite runner and the tests both iterate it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from msl import counting
from msl.evaluator import Evaluator, eval_neg, eval_pos, eval_variant_singleton, evaluate
from msl.fixtures import PQ, broken_toggle, disjoint_model_set, even_odd, pointed, toggle_system
from msl.fo import eval_fo
from msl.minor import ALWAYS_ACCEPT, MAJORITY, MINOR_EXISTS, MINOR_FORALL
from msl.models import (
    ChoiceFunction,
    Interpretation,
    ModelSet,
    Structure,
    add_domain_predicate,
    common_domain,
    enumerate_choice_functions,
    extend_all,
    extend_choice,
    extend_set,
)
from msl.parser import ParseError, parse
from msl.perspectives import (
    Perspective,
    filter_implies,
    minor_eval_modal,
    minor_eval_quant,
    persp_eval,
    persp_eval_signed,
    restrict,
)
from msl.syntax import (
    And,
    Const,
    Diamond,
    Eq,
    Exists,
    Fragment,
    Not,
    Prop,
    Rel,
    Signature,
    classify,
    is_existential_variant,
    is_two_variable,
    rank,
)
from msl.systems import SelectorViolation, proper_evolutions, run_system, with_perception
from msl.translate import SatStatus, bounded_fo_sat, bounded_lc_sat, check_translation_claim, translate
from msl.weights import WeightError, build, full_value, intersect_then_weigh, value_of

GOLDEN: dict[str, Callable[[], None]] = {}

RP = Signature({"R": 2, "P": 1})


def golden(fn):
    GOLDEN[fn.__name__] = fn
    return fn


def _raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return
    raise AssertionError(f"{fn.__name__} did not raise {exc.__name__}")


def _ms(*members) -> ModelSet:
    return ModelSet(members)


def _sm(domain, rels=None) -> Structure:
    return Structure(domain, rels or {})


# -- formulas -------------------------------------------------------------------


@golden
def parse_exists():
    assert parse("E x. R(x,x)", RP) == Exists("x", Rel("R", ("x", "x")))


@golden
def parse_const():
    assert parse("C x. x=x") == Const("x", Eq("x", "x"))


@golden
def parse_arity_mismatch():
    _raises(ParseError, parse, "R(x)", RP)


@golden
def classify_fragments():
    fo = frozenset({Fragment.FO, Fragment.LC, Fragment.LC_STAR})
    assert classify(Exists("x", Rel("R", ("x",)))) == fo
    assert classify(Not(Const("x", Eq("x", "x")))) == {Fragment.LC_STAR}
    assert classify(Const("x", Not(Eq("x", "x")))) == {Fragment.LC, Fragment.LC_STAR}


@golden
def rank_examples():
    assert rank(Prop("p")) == 0
    assert rank(Diamond(And(Prop("p"), Diamond(Prop("q"))))) == 2
    assert rank(Exists("x", Diamond(Rel("R", ("x",))))) == 1


@golden
def two_variable_examples():
    assert is_two_variable(parse("A x. A y. ~(R(x,y) & R(y,x))", RP))
    assert not is_two_variable(parse("E z. R(z,z)", RP))
    assert is_two_variable(parse("x=y"))


@golden
def existential_variant_examples():
    ex, cx = parse("E x. P(x)"), parse("C x. P(x)")
    assert is_existential_variant(ex, cx)
    assert is_existential_variant(ex, ex)
    assert not is_existential_variant(ex, parse("E x. Q(x)"))


# -- model sets -------------------------------------------------------------------


@golden
def common_domain_examples():
    assert common_domain(ModelSet.of_structures([_sm([1, 2]), _sm([2, 3])])) == {2}
    assert common_domain(ModelSet.of_structures([_sm([0, 1])])) == {0, 1}
    assert common_domain(ModelSet()) == frozenset()


@golden
def extend_choice_examples():
    s = _sm([0, 1])
    out = extend_choice(ModelSet.of_structures([s]), ChoiceFunction((1,)), "x")
    assert out == _ms(Interpretation(s, {"x": 1}))
    two = ModelSet.of_structures([_sm([0, 2]), _sm([2, 3])])
    out = extend_choice(two, ChoiceFunction((2, 2), True), "x")
    assert {m.env["x"] for m in out} == {2}
    rebound = extend_choice(out, ChoiceFunction((0, 3)), "x")
    assert sorted(m.env["x"] for m in rebound) == [0, 3]


@golden
def extend_all_examples():
    assert len(extend_all(ModelSet.of_structures([_sm([0, 1])]), "x")) == 2
    assert len(extend_all(ModelSet(), "x")) == 0
    assert len(extend_all(ModelSet.of_structures([_sm([0, 1]), _sm([0, 1, 2])]), "x")) == 5


@golden
def extend_set_examples():
    ms = ModelSet.of_structures([_sm([0, 1]), _sm([1, 2])])
    assert len(extend_set(ms, [], "x")) == 0
    assert {m.env["x"] for m in extend_set(ms, common_domain(ms), "x")} == {1}
    single = extend_set(ModelSet.of_structures([_sm([0, 1])]), [0], "x")
    assert {m.env["x"] for m in single} == {0}


@golden
def domain_predicate_examples():
    out = add_domain_predicate(ModelSet.of_structures([_sm([1, 2]), _sm([2, 3])]), "D")
    assert all(m.structure.rel("D") == {(2,)} for m in out)
    out = add_domain_predicate(ModelSet.of_structures([_sm([0, 1])]), "D")
    assert all(m.structure.rel("D") == {(0,), (1,)} for m in out)
    out = add_domain_predicate(ModelSet.of_structures([_sm([0]), _sm([1])]), "D")
    assert all(not m.structure.rel("D") for m in out)


@golden
def choice_function_examples():
    ms = ModelSet.of_structures([_sm([0, 1]), _sm([0, 1, 2])])
    assert len(list(enumerate_choice_functions(ms))) == 6
    one = ModelSet.of_structures([_sm([0, 5]), _sm([5, 7])])
    assert len(list(enumerate_choice_functions(one, True))) == 1
    assert list(enumerate_choice_functions(ModelSet(), True)) == [ChoiceFunction((), True)]


# -- evaluator --------------------------------------------------------------------


@golden
def eval_fo_examples():
    s = Structure([0, 1], {"R": [(0, 1)]})
    assert eval_fo(Interpretation(s, {"x": 0, "y": 1}), parse("R(x,y)"))
    assert eval_fo(Interpretation(s, {"x": 0}), parse("E=1 y. R(x,y)"))
    assert eval_fo(Interpretation(s, {"x": 1}), parse("x=x"))


@golden
def disjoint_const_fails():
    assert not eval_pos(disjoint_model_set(), parse("C x. x=x"))


@golden
def disjoint_const_disjunction_holds():
    assert eval_pos(disjoint_model_set(), parse("~(~C x. x=x & ~C x. x=x)"))
    assert eval_pos(disjoint_model_set(), parse("(C x. x=x | C x. x=x)"))


@golden
def singleton_agrees_with_fo():
    s = Structure([0, 1], {"R": [(0, 1)], "P": [(1,)]})
    i = Interpretation(s, {"x": 0, "y": 1})
    for text in ("R(x,y)", "E y. (R(x,y) & P(y))", "A x. P(x)", "~R(y,x)"):
        f = parse(text)
        assert eval_pos(_ms(i), f) == eval_fo(i, f)
        assert eval_neg(_ms(i), f) == (not eval_fo(i, f))


@golden
def empty_model_set_vacuous():
    assert eval_pos(ModelSet(), parse("R(x)"))


@golden
def negative_atom_all_members():
    s1, s2 = Structure([0, 1], {"R": [(1, 1)]}), Structure([0, 1])
    ms = _ms(Interpretation(s1, {"x": 0, "y": 1}), Interpretation(s2, {"x": 1, "y": 0}))
    assert eval_neg(ms, parse("R(x,y)"))


@golden
def negative_const_empty_common_domain():
    assert eval_neg(disjoint_model_set(), parse("C x. P(x)"))


@golden
def variant_singleton_examples():
    i = Interpretation(Structure([0, 1]))
    assert eval_variant_singleton(i, parse("C x. x=x")).positive
    assert eval_variant_singleton(i, parse("C x. P(x)")).negative
    j = Interpretation(Structure([0, 1], {"P": [(1,)]}))
    for m in (i, j):
        a = eval_variant_singleton(m, parse("E x. P(x)"))
        b = eval_variant_singleton(m, parse("C x. P(x)"))
        assert a == b


# -- translation and satisfiability ---------------------------------------------


@golden
def translate_examples():
    assert translate(parse("C x. P(x)"), "D") == parse("E x. (D(x) & P(x))")
    assert translate(parse("E x. P(x)"), "D") == parse("E x. P(x)")
    assert translate(parse("C x. C y. R(x,y)"), "D") == parse("E x. (D(x) & E y. (D(y) & R(x,y)))")


@golden
def fo_sat_examples():
    assert bounded_fo_sat(parse("E x. ~(x=x)"), 3).status is SatStatus.UNKNOWN_WITHIN_BOUND
    r = bounded_fo_sat(parse("E x. (D(x) & x=x)"), 1)
    assert r.status is SatStatus.SAT_WITHIN_BOUND
    assert r.witness.structure.domain == {0} and r.witness.structure.rel("D") == {(0,)}
    assert bounded_fo_sat(parse("(P(x) & ~P(x))"), 3).status is SatStatus.UNKNOWN_WITHIN_BOUND


@golden
def lc_sat_examples():
    r = bounded_lc_sat(parse("C x. x=x"), 1, 2)
    assert r.status is SatStatus.SAT_WITHIN_BOUND and len(r.witness) == 1
    assert bounded_lc_sat(parse("E x. ~(x=x)"), 2, 2).status is SatStatus.UNKNOWN_WITHIN_BOUND
    r = bounded_lc_sat(parse("C x. x=x"), 2, 2)
    assert not eval_pos(disjoint_model_set(), parse("C x. x=x"))
    assert r.sat and eval_pos(r.witness, parse("C x. x=x"))


@golden
def translation_claim_examples():
    f = parse("C x. P(x)")
    assert check_translation_claim(f, disjoint_model_set())
    full = ModelSet.of_structures([Structure([0, 1], {"P": [(0,), (1,)]})])
    assert eval_pos(full, f)
    assert eval_pos(add_domain_predicate(full, "__D"), translate(f))
    assert check_translation_claim(f, full)


# -- counting -------------------------------------------------------------------


@golden
def count_examples():
    assert counting.count_models(counting.PHI_SYM, 2) == 8
    assert counting.count_models(counting.PHI_AI, 3) == 2
    assert counting.count_models(parse("E x. ~(x=x)"), 2) == 0


@golden
def closed_form_examples():
    assert [counting.closed_form_symmetric(n) for n in (1, 2, 3)] == [2, 8, 64]
    assert [counting.closed_form_anti_involutive(n) for n in (1, 2, 3)] == [0, 0, 2]
    assert [counting.count_functions_anti_involutive(n) for n in (1, 3, 4)] == [0, 2, 30]


# -- perspectives -----------------------------------------------------------------


def _ab() -> Perspective:
    return Perspective(1, [pointed(["p"], domain=(0,)), pointed([], domain=(0, 1))])


@golden
def persp_eval_examples():
    p = _ab()
    assert persp_eval(p, parse("<> p"))
    assert not persp_eval(p, parse("p"))
    nested = Perspective(2, [Perspective(1, [pointed(["p"])]), Perspective(1, [pointed([], domain=(0, 1))])])
    assert persp_eval(nested, parse("<> <> p"))


@golden
def restrict_examples():
    p = _ab()
    a, b = sorted(p.members, key=lambda m: len(m.structure.domain))
    assert restrict(p, parse("p")) == Perspective(1, [a])
    assert restrict(p, parse("p"), complement=True) == Perspective(1, [b])
    assert restrict(p, parse("(p | ~p)")) == p


@golden
def signed_restriction_example():
    p = Perspective(1, [pointed(["p"]), pointed(["q"], domain=(0, 1))])
    b = [m for m in p.members if len(m.structure.domain) == 2][0]
    assert restrict(p, parse("p"), complement=True) == Perspective(1, [b])
    assert persp_eval_signed(p, parse("(p | <> q)")).positive


@golden
def signed_leaf_level_is_classical():
    leaf = pointed(["p"], domain=(0, 1))
    p = Perspective(1, [leaf])
    for text in ("p", "q", "(p & ~q)", "(q | p)", "(q -> p)"):
        f = parse(text)
        v = persp_eval_signed(p, f)
        assert v.positive == eval_fo(leaf, f) and v.negative == (not eval_fo(leaf, f))


@golden
def signed_diamond_negative_needs_all():
    one = Perspective(1, [pointed([]), pointed([], domain=(0, 1))])
    assert persp_eval_signed(one, parse("<> p")).negative
    assert not persp_eval_signed(_ab(), parse("<> p")).negative


@golden
def even_odd_scenario():
    p = even_odd()
    both = parse("(<> odd & <> even)")
    assert persp_eval(p, both)
    assert filter_implies(p, parse("even"), Not(both))
    assert filter_implies(p, parse("odd"), Not(both))


@golden
def filter_implies_examples():
    p = _ab()
    assert filter_implies(p, parse("q"), parse("<> p"))
    assert filter_implies(p, parse("p"), parse("p"))


@golden
def minor_modal_examples():
    p = _ab()
    for f in (parse("p"), parse("q")):
        assert minor_eval_modal(p, MINOR_EXISTS, f) == persp_eval_signed(p, Diamond(f))
    split = Perspective(1, [pointed(["p"]), pointed([], domain=(0, 1))])
    # one child verifies, one refutes: no strict majority, but half refute
    v = minor_eval_modal(split, MAJORITY, parse("p"))
    assert not v.positive and v.negative


@golden
def minor_quant_examples():
    sig = Signature({"P": 1})
    leaf = lambda pt: Interpretation(Structure((0, 1), {"P": [(0,)]}, sig), {"x": pt})
    p = Perspective(1, [leaf(0), leaf(1)])
    assert minor_eval_quant(p, MINOR_EXISTS, "y", parse("P(y)")).positive
    assert not minor_eval_quant(p, MINOR_FORALL, "y", parse("P(y)")).positive
    full = Perspective(1, [Interpretation(Structure((0, 1), {"P": [(0,), (1,)]}, sig), {"x": 0})])
    assert minor_eval_quant(full, MINOR_FORALL, "y", parse("P(y)")).positive
    # P(y) holds at one leaf and fails at the other for every y: never decided
    mixed = Perspective(1, [
        Interpretation(Structure((0, 1), {"P": [(0,), (1,)]}, sig), {"x": 0}),
        Interpretation(Structure((0, 1), {}, sig), {"x": 0}),
    ])
    v = minor_eval_quant(mixed, MINOR_EXISTS, "y", parse("P(y)"))
    assert not v.positive and not v.negative


@golden
def witness_check_examples():
    from msl.minor import witness_check

    assert witness_check(MINOR_EXISTS, MINOR_EXISTS.base, 3)
    assert witness_check(MINOR_FORALL, MINOR_FORALL.base, 3)
    assert not witness_check(ALWAYS_ACCEPT, MINOR_EXISTS.base, 3)


# -- weights --------------------------------------------------------------------


def _universe(n: int = 3) -> ModelSet:
    return ModelSet.of_structures([Structure([i]) for i in range(n)])


@golden
def value_of_examples():
    wu = build(_universe(), [("P1", [0], 1), ("P2", [1], -2)])
    assert value_of(wu, ["P1", "P2"]) == -1
    assert value_of(wu, []) == 0
    assert value_of(wu, ["P1", "P1"]) == 1


@golden
def full_value_examples():
    assert full_value(build(_universe(), [("P", [0], 5)])) == 5
    assert full_value(build(_universe(), [("money", [0, 1], 1), ("debt", [1, 2], -2)])) == -1
    assert full_value(build(_universe(), [])) == 0


@golden
def intersect_examples():
    wu = build(_universe(), [("P1", [0, 1], 1), ("P2", [1, 2], 2), ("P3", [1], 7)])
    assert intersect_then_weigh(wu, ["P1", "P2"]) == 7
    assert intersect_then_weigh(wu, ["P2"]) == 2
    wu.add("P4", [0], Fraction(1, 2))
    _raises(WeightError, intersect_then_weigh, wu, ["P2", "P4"])


# -- systems --------------------------------------------------------------------


@golden
def toggle_trace():
    ev = run_system(toggle_system(), "s0", 10)
    assert ev.states() == ["s0", "s1"] * 5 + ["s0"]
    assert ev.is_proper(toggle_system().base)


@golden
def broken_selector_detected():
    try:
        run_system(broken_toggle(), "s0", 10)
    except SelectorViolation as e:
        assert e.step == 0
        return
    raise AssertionError("selector violation not reported")


@golden
def proper_evolution_counts():
    base = toggle_system().base
    assert len(proper_evolutions(base, 0)) == 2
    from msl.systems import build_base

    det = build_base(
        {"s": Structure([0]), "t": Structure([0, 1])},
        ["a"],
        ["l", "r"],
        {("s", ("l",)): {"s"}, ("s", ("r",)): {"t"}, ("t", ("l",)): {"s"}, ("t", ("r",)): {"t"}},
    )
    for k in range(4):
        assert len(proper_evolutions(det, k)) == sum(2 * 2 ** (j + 1) for j in range(k + 1))


@golden
def one_state_constant_trace():
    from msl.systems import System, SystemFrame, build_base

    base = build_base({"s": Structure([0])}, ["a"], ["go"], {("s", ("go",)): {"s"}})
    ev = run_system(System(SystemFrame(base), {"a": {"s": "go"}}), "s", 5)
    assert ev.states() == ["s"] * 6


@golden
def strategies_read_current_state():
    from msl.systems import System, SystemFrame, build_base

    states = {"s0": Structure([0]), "s1": Structure([0], {"P": [(0,)]})}
    both = {"s0", "s1"}
    base = build_base(states, ["a"], ["l", "r"], {(s, (a,)): both for s in states for a in ("l", "r")})
    # the selector looks at the whole history; the strategy must not
    frame = SystemFrame(base, selector=lambda h: "s1" if len(h) % 3 else "s0")
    sysm = System(frame, {"a": {"s0": "l", "s1": "r"}})
    ev = run_system(sysm, "s0", 9)
    assert all(a == sysm.profile(s) for s, a in ev.steps)


@golden
def perception_examples():
    sysm = toggle_system()
    same = with_perception(sysm, "a", lambda s: s, lambda s: "go")
    assert run_system(same, "s0", 6) == run_system(sysm, "s0", 6)
    blank = Structure([0])
    collapsed = with_perception(sysm, "a", {"s0": blank, "s1": blank}, {blank: "go"})
    assert collapsed.profile("s0") == collapsed.profile("s1")
    forget = with_perception(sysm, "a", lambda s: s.without_relation("P"), lambda s: "go" if not s.rel("P") else "stop")
    assert forget.profile("s0") == forget.profile("s1") == ("go",)
