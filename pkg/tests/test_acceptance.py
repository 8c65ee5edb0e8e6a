"""One test per acceptance criterion.

Each test records a PASS/FAIL line with its timing; the lines are printed
together at the end of the session (see conftest.py).
"""

import itertools
import random
import time

import pytest

from oracles import anti_involutive_graphs, naive_fo, symmetric_relations

from msl import counting
from msl.evaluator import Evaluator, eval_pos, evaluate
from msl.fixtures import broken_toggle, disjoint_model_set, even_odd, toggle_system
from msl.minor import ALWAYS_ACCEPT, MINOR_EXISTS, MINOR_FORALL, witness_check
from msl.models import ModelSet, add_domain_predicate
from msl.parser import parse
from msl.perspectives import filter_implies, minor_eval_modal, persp_eval, persp_eval_signed
from msl.printer import to_text
from msl.random_gen import random_fo, random_interpretation, random_lc, random_model_set, random_modal, random_perspective, random_variant
from msl.syntax import Diamond, Not, Or, rank
from msl.systems import SelectorViolation, proper_evolutions, run_system
from msl.corpus import corpus
from msl.translate import SatStatus, bounded_fo_sat, bounded_lc_sat, translate

RESULTS: list[str] = []


def rng_for(name):
    return random.Random(f"acceptance:{name}")


def record(name, failures, started, limit=None):
    elapsed = time.perf_counter() - started
    if limit is not None and elapsed >= limit:
        failures = failures + [f"took {elapsed:.1f}s, limit {limit}s"]
    status = "PASS" if not failures else "FAIL"
    line = f"{status}  {name}  ({elapsed:.1f}s)"
    if failures:
        line += f"  {len(failures)} failing, first: {failures[0]}"
    RESULTS.append(line)
    print(line)
    assert not failures, failures[:3]


def classical(ms, f):
    truths = [naive_fo(m.structure, dict(m.env), f) for m in ms]
    return all(truths), not any(truths)


def test_1_flatness():
    start = time.perf_counter()
    rng = rng_for("flatness")
    bad = []
    ev = Evaluator(fast_path=False)
    for _ in range(1000):
        f = random_fo(rng, 3)
        ms = random_model_set(rng, max_members=4, max_domain=3)
        v = ev.verdict(ms, f)
        if (v.positive, v.negative) != classical(ms, f):
            bad.append(f"{to_text(f)} on {ms!r}")
    record("1 flatness: 1000 FO pairs agree with member-wise truth", bad, start, 30)


def test_2_disjunction_example():
    start = time.perf_counter()
    ms = disjoint_model_set()
    cx = parse("C x. x=x")
    bad = []
    if eval_pos(ms, cx):
        bad.append("C x. x=x holds on the disjoint pair")
    if not eval_pos(ms, Or(cx, cx)):
        bad.append("the disjunction fails on the disjoint pair")
    if not eval_pos(ms, parse("(C x. x=x | C x. x=x)"), fast_path=False, cover="partition"):
        bad.append("the disjunction fails under partition covers")
    record("2 disjunction example: Cx fails, its disjunction holds", bad, start)


def test_3_existential_variants():
    start = time.perf_counter()
    rng = rng_for("variants")
    bad = []
    for _ in range(500):
        interp = random_interpretation(rng)
        f = random_fo(rng, 3)
        g = random_variant(rng, f)
        v = evaluate(ModelSet([interp]), g)
        truth = naive_fo(interp.structure, dict(interp.env), f)
        if (v.positive, v.negative) != (truth, not truth):
            bad.append(f"{to_text(g)} from {to_text(f)} on {interp!r}: {v}, classical {truth}")
    record("3 existential variants: 500 singleton triples match FO", bad, start)


def test_4_translation_claim():
    start = time.perf_counter()
    rng = rng_for("claim")
    bad = []
    for _ in range(500):
        f = random_lc(rng, 3)
        ms = random_model_set(rng)
        if eval_pos(ms, f) and not eval_pos(add_domain_predicate(ms, "D"), translate(f, "D")):
            bad.append(f"{to_text(f)} on {ms!r}")
    reduced = 0
    for f in corpus():
        t = translate(f)
        fo = bounded_fo_sat(t, 3)
        if fo.status is not SatStatus.SAT_WITHIN_BOUND:
            continue
        reduced += 1
        if not naive_fo(fo.witness.structure, dict(fo.witness.env), t):
            bad.append(f"FO witness of T({to_text(f)}) does not verify")
        lc = bounded_lc_sat(f, 1, 3)
        if lc.status is not SatStatus.SAT_WITHIN_BOUND:
            bad.append(f"{to_text(f)}: translation satisfiable, no L_C model within 3")
        elif not eval_pos(lc.witness, f, fast_path=False):
            bad.append(f"{to_text(f)}: L_C witness does not verify")
    if reduced == 0:
        bad.append("no corpus sentence had a bounded FO model")
    record(f"4 translation claim: 500 pairs, {reduced}/30 corpus reductions", bad, start, 300)


def _anti_involutive_functions(n):
    return sum(
        all(f[f[x]] != x for x in range(n))
        for f in itertools.product(range(n), repeat=n)
    )


def test_5_counting():
    start = time.perf_counter()
    bad = []
    for n, want in zip(range(1, 5), (2, 8, 64, 1024)):
        got = counting.count_models(counting.PHI_SYM, n)
        closed = counting.closed_form_symmetric(n)
        if not got == closed == want:
            bad.append(f"symmetric n={n}: brute {got}, closed {closed}, expected {want}")
        if n <= 3 and symmetric_relations(n) != want:
            bad.append(f"symmetric oracle n={n}")
    for n in range(1, 8):
        got = counting.count_functions_anti_involutive(n)
        closed = counting.closed_form_anti_involutive(n)
        direct = _anti_involutive_functions(n)
        if not got == closed == direct:
            bad.append(f"anti-involutive n={n}: functions {got}, closed {closed}, direct {direct}")
    for n in range(1, 5):
        got = counting.count_models(counting.PHI_AI, n)
        if got != counting.closed_form_anti_involutive(n) or got != anti_involutive_graphs(n):
            bad.append(f"anti-involutive models n={n}: {got}")
    record("5 counting: symmetric n<=4, anti-involutive n<=7 and models n<=4", bad, start, 120)


def test_6_perspectives():
    start = time.perf_counter()
    rng = rng_for("perspectives")
    bad = []
    for _ in range(200):
        r = rng.randint(1, 3)
        p = random_perspective(rng, r)
        if not p.is_strongly_regular():
            bad.append("generator produced an irregular perspective")
            continue
        body = random_modal(rng, r - 1)
        while rank(body) != r - 1:
            body = random_modal(rng, r - 1)
        if minor_eval_modal(p, MINOR_EXISTS, body) != persp_eval_signed(p, Diamond(body)):
            bad.append(f"minor exists vs diamond on {to_text(body)}")
    for q in (MINOR_EXISTS, MINOR_FORALL):
        if not witness_check(q, q.base, 4):
            bad.append(f"{q.name} fails its witness check")
    if witness_check(ALWAYS_ACCEPT, MINOR_EXISTS.base, 4):
        bad.append("the always-accept quantifier passes its witness check")
    p = even_odd()
    both = parse("(<> odd & <> even)")
    if not persp_eval(p, both):
        bad.append("even/odd: the perspective misses <>odd & <>even")
    for side in ("even", "odd"):
        if not filter_implies(p, parse(side), Not(both)):
            bad.append(f"even/odd: {side} => ~(<>odd & <>even) fails")
    record("6 perspectives: minor exists = diamond, witness checks, even/odd", bad, start, 60)


def test_7_cover_strategies():
    start = time.perf_counter()
    rng = rng_for("covers")
    three, part = Evaluator(cover="three-way", fast_path=False), Evaluator(cover="partition", fast_path=False)
    bad = []
    for _ in range(500):
        f = random_lc(rng, 3, star=True)
        ms = random_model_set(rng, max_members=4)
        a, b = three.neg(ms, f), part.neg(ms, f)
        if a != b:
            bad.append(f"{to_text(f)} on {ms!r}: three-way {a}, partition {b}")
    record("7 cover strategies: 500 instances agree", bad, start)


def test_8_systems():
    start = time.perf_counter()
    bad = []
    sysm = toggle_system()
    ev = run_system(sysm, "s0", 10)
    if ev.states() != ["s0", "s1"] * 5 + ["s0"]:
        bad.append(f"trace {ev.states()}")
    for e in [ev] + proper_evolutions(sysm.base, 10):
        for i, (s, a) in enumerate(e.steps):
            nxt = e.steps[i + 1][0] if i + 1 < len(e.steps) else e.final
            if nxt is not None and nxt not in sysm.base.transitions[(s, a)]:
                bad.append(f"step {i} of {e.states()} leaves F")
    try:
        run_system(broken_toggle(), "s0", 10)
        bad.append("broken selector ran without a violation")
    except SelectorViolation:
        pass
    record("8 systems: toggle trace, re-validation, broken selector", bad, start)
