"""Seeded property suites.

Every property draws from its own ``random.Random`` seeded by the run seed
and the property name, so ``only`` filters never shift the random streams.
A property returns the number of cases checked and a list of failures.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from msl import counting
from msl.corpus import corpus
from msl.evaluator import Evaluator, VariantMismatch, eval_variant_singleton, evaluate, Verdict
from msl.fixtures import toggle_system
from msl.fo import eval_fo
from msl.golden import GOLDEN
from msl.minor import ALWAYS_ACCEPT, MINOR_EXISTS, MINOR_FORALL, witness_check
from msl.models import (
    ModelSet,
    common_domain,
    count_choice_functions,
    enumerate_choice_functions,
    extend_all,
    extend_choice,
    extend_set,
)
from msl.parser import parse
from msl.perspectives import (
    filter_implies,
    minor_eval_modal,
    persp_eval,
    persp_eval_signed,
    restrict,
)
from msl.printer import to_text
from msl.random_gen import (
    random_fo,
    random_interpretation,
    random_lc,
    random_modal,
    random_model_set,
    random_perspective,
    random_variant,
)
from msl.syntax import (
    And,
    Const,
    Diamond,
    Exists,
    Formula,
    Fragment,
    MinorModal,
    Not,
    Or,
    Impl,
    classify,
    is_existential_variant,
    rank,
    walk,
)
from msl.systems import proper_evolutions, run_system
from msl.translate import (
    SatStatus,
    bounded_fo_sat,
    bounded_lc_sat,
    check_translation_claim,
    lc_witness_from_fo,
    translate,
)
from msl.weights import build, full_value, value_of

Outcome = tuple[int, list[str]]
MAX_REPORTED = 3


@dataclass
class Result:
    name: str
    cases: int
    failures: list[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.error is None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status}\t{self.name}\t{self.cases}"
        if self.error:
            out += f"\terror: {self.error}"
        elif self.failures:
            out += f"\t{len(self.failures)} failing: " + " | ".join(self.failures[:MAX_REPORTED])
        return out


@dataclass
class Report:
    seed: int
    results: list[Result]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def text(self) -> str:
        lines = [f"seed\t{self.seed}"]
        lines += [r.line() for r in self.results]
        failed = [r.name for r in self.results if not r.ok]
        lines.append("all properties hold" if not failed else "failed: " + ", ".join(failed))
        return "\n".join(lines) + "\n"


PROPERTIES: dict[str, Callable[[random.Random], Outcome]] = {}


def prop(name: str):
    def wrap(fn):
        PROPERTIES[name] = fn
        return fn

    return wrap


def _show(*parts) -> str:
    return "; ".join(to_text(p) if isinstance(p, Formula) else repr(p) for p in parts)


# -- formula core -----------------------------------------------------------------


def _modal_depth(f: Formula) -> int:
    """Longest chain of nested modal nodes, by an explicit stack walk."""
    best = 0
    stack = [(f, 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, (Diamond, MinorModal)):
            d += 1
        best = max(best, d)
        stack.extend((c, d) for c in node.children())
    return best


@prop("rank-vs-modal-depth")
def _rank_depth(rng) -> Outcome:
    bad = []
    for _ in range(1000):
        f = random_modal(rng, rng.randint(0, 4), depth=6)
        if rank(f) != _modal_depth(f):
            bad.append(_show(f))
    return 1000, bad


@prop("round-trip")
def _round_trip(rng) -> Outcome:
    forms = corpus() + [random_lc(rng, 3, star=True) for _ in range(300)]
    forms += [random_modal(rng, 2) for _ in range(200)]
    bad = [_show(f) for f in forms if parse(to_text(f)) != f]
    return len(forms), bad


@prop("classify-monotone")
def _classify(rng) -> Outcome:
    forms = [random_fo(rng, 3, counting=True) for _ in range(300)] + [random_lc(rng, 3) for _ in range(300)]
    bad = []
    for f in forms:
        c = classify(f)
        if Fragment.FO in c and not {Fragment.LC, Fragment.LC_STAR} <= c:
            bad.append(_show(f))
        if Fragment.LC in c and Fragment.LC_STAR not in c:
            bad.append(_show(f))
    return len(forms), bad


@prop("existential-variant-equivalence")
def _variant_equiv(rng) -> Outcome:
    forms = corpus()
    forms += [random_variant(rng, f) for f in forms]
    bad = []
    rel = {(i, j): is_existential_variant(a, b) for i, a in enumerate(forms) for j, b in enumerate(forms)}
    n = len(forms)
    for i in range(n):
        if not rel[i, i]:
            bad.append(f"not reflexive at {_show(forms[i])}")
        for j in range(n):
            if rel[i, j] != rel[j, i]:
                bad.append(f"not symmetric: {_show(forms[i], forms[j])}")
            if rel[i, j]:
                for k in range(n):
                    if rel[j, k] and not rel[i, k]:
                        bad.append(f"not transitive: {_show(forms[i], forms[j], forms[k])}")
    return n * n, bad


# -- model core -----------------------------------------------------------------


@prop("model-core")
def _model_core(rng) -> Outcome:
    bad = []
    cases = 300
    for _ in range(cases):
        ms = random_model_set(rng, shared_domain=rng.random() < 0.5)
        var = rng.choice(("x", "y", "z"))
        if len({m.structure.domain for m in ms}) == 1:
            if extend_all(ms, var) != extend_set(ms, common_domain(ms), var):
                bad.append(f"extend_all vs extend_set on {ms!r}")
        fns = list(enumerate_choice_functions(ms))
        if len(fns) != count_choice_functions(ms):
            bad.append(f"choice function count on {ms!r}")
        out = extend_choice(ms, rng.choice(fns), var)
        if out.structures() != ms.structures():
            bad.append(f"extend_choice changed structures on {ms!r}")
        other = random_model_set(rng, variables=tuple(sorted(ms.variables)))
        if common_domain(ms | other) != common_domain(ms) & common_domain(other):
            bad.append(f"common_domain of a union on {ms!r}, {other!r}")
    return cases, bad


# -- evaluator ------------------------------------------------------------------


def _classical(ms: ModelSet, f: Formula) -> Verdict:
    return Verdict(all(eval_fo(m, f) for m in ms), all(not eval_fo(m, f) for m in ms))


def flatness_cases(seed_rng: random.Random, n: int = 1000):
    for _ in range(n):
        yield random_fo(seed_rng, 3), random_model_set(seed_rng)


@prop("flatness")
def _flatness(rng) -> Outcome:
    bad = []
    for f, ms in flatness_cases(rng):
        got = evaluate(ms, f, fast_path=False)
        want = _classical(ms, f)
        if got != want:
            bad.append(f"{_show(f)} on {ms!r}: {got} vs {want}")
    return 1000, bad


@prop("negation-involution")
def _involution(rng) -> Outcome:
    bad = []
    cases = 300
    for _ in range(cases):
        f = random_lc(rng, 3, star=True)
        ms = random_model_set(rng)
        if evaluate(ms, Not(Not(f))) != evaluate(ms, f):
            bad.append(_show(f))
    return cases, bad


def cover_cases(rng: random.Random, n: int = 500):
    for _ in range(n):
        yield random_lc(rng, 3, star=True), random_model_set(rng, max_members=4)


@prop("cover-equivalence")
def _covers(rng) -> Outcome:
    bad = []
    for f, ms in cover_cases(rng):
        a = Evaluator(cover="three-way").neg(ms, f)
        b = Evaluator(cover="partition").neg(ms, f)
        if a != b:
            bad.append(f"{_show(f)} on {ms!r}: three-way {a}, partition {b}")
    return 500, bad


@prop("cover-pruning")
def _pruning(rng) -> Outcome:
    """Subset-closure pruning against the literal searches on small sets."""
    bad = []
    cases = 200
    for _ in range(cases):
        f = random_lc(rng, 2, star=True)
        ms = random_model_set(rng, max_members=3, max_domain=2)
        a = evaluate(ms, f, fast_path=False, prune=False)
        b = evaluate(ms, f, fast_path=False, prune=True)
        if a != b:
            bad.append(f"{_show(f)} on {ms!r}: literal {a}, pruned {b}")
    return cases, bad


@prop("fast-path-soundness")
def _fast_path(rng) -> Outcome:
    bad = []
    cases = 500
    for _ in range(cases):
        f = random_lc(rng, 3, star=True) if rng.random() < 0.5 else random_fo(rng, 3)
        ms = random_model_set(rng)
        if evaluate(ms, f, fast_path=True) != evaluate(ms, f, fast_path=False):
            bad.append(_show(f))
    return cases, bad


@prop("choice-function-cost")
def _cost(rng) -> Outcome:
    """A failing E x. phi, phi quantifier-free, tries every choice function."""
    bad = []
    cases = 0
    while cases < 200:
        body = random_lc(rng, 2)
        if any(isinstance(n, (Exists, Const)) for n in walk(body)):
            continue
        ms = random_model_set(rng, max_members=3)
        ev = Evaluator(fast_path=False, prune=False)
        if ev.pos(ms, Exists("x", body)):
            continue
        cases += 1
        if ev.stats["choice_functions"] != count_choice_functions(ms):
            bad.append(f"{_show(body)}: examined {ev.stats['choice_functions']}, expected {count_choice_functions(ms)}")
    return cases, bad


# -- variants -------------------------------------------------------------------


def variant_cases(rng: random.Random, n: int = 500):
    for _ in range(n):
        f = random_fo(rng, 3)
        yield random_interpretation(rng), f, random_variant(rng, f)


@prop("variants")
def _variants(rng) -> Outcome:
    bad = []
    for interp, f, g in variant_cases(rng):
        try:
            eval_variant_singleton(interp, g)
        except VariantMismatch as e:
            bad.append(f"{_show(g)}: {e}")
    return 500, bad


@prop("variants-lc")
def _variants_lc(rng) -> Outcome:
    """Restricted to variants that land in L_C, where agreement is guaranteed."""
    bad = []
    cases = 0
    for interp, f, g in variant_cases(rng, 2000):
        if Fragment.LC not in classify(g):
            continue
        cases += 1
        try:
            eval_variant_singleton(interp, g)
        except VariantMismatch as e:
            bad.append(f"{_show(g)}: {e}")
    return cases, bad


# -- translation ----------------------------------------------------------------


def _homomorphic(f: Formula, t: Formula, d: str) -> bool:
    match f:
        case Const(var=v, body=b):
            return (
                isinstance(t, Exists)
                and t.var == v
                and isinstance(t.body, And)
                and t.body.left.name == d
                and t.body.left.args == (v,)
                and _homomorphic(b, t.body.right, d)
            )
        case Or(left=a, right=b) | Impl(left=a, right=b):
            return type(t) is type(f) and _homomorphic(a, t.left, d) and _homomorphic(b, t.right, d)
        case And(left=a, right=b):
            return isinstance(t, And) and _homomorphic(a, t.left, d) and _homomorphic(b, t.right, d)
        case Not(body=b):
            return isinstance(t, Not) and _homomorphic(b, t.body, d)
        case Exists(var=v, body=b):
            return isinstance(t, Exists) and t.var == v and _homomorphic(b, t.body, d)
    return f == t


@prop("translation-homomorphism")
def _homomorphism(rng) -> Outcome:
    bad = []
    for _ in range(1000):
        f = random_lc(rng, 4, star=True)
        t = translate(f, "D")
        if not _homomorphic(f, t, "D") or any(isinstance(n, Const) for n in walk(t)):
            bad.append(_show(f, t))
    return 1000, bad


def claim_cases(rng: random.Random, n: int = 500):
    for _ in range(n):
        yield random_lc(rng, 3), random_model_set(rng)


@prop("translation-claim")
def _claim(rng) -> Outcome:
    bad = [_show(f) + f" on {ms!r}" for f, ms in claim_cases(rng) if not check_translation_claim(f, ms)]
    return 500, bad


def reduction_failures(bound: int = 3) -> list[str]:
    """Each corpus sentence whose translation has a model of size <= bound must
    have an L_C model; the singleton built from the FO model is checked."""
    from msl.evaluator import eval_pos

    bad = []
    for f in corpus():
        fo = bounded_fo_sat(translate(f), bound)
        if fo.status is not SatStatus.SAT_WITHIN_BOUND:
            continue
        if not eval_fo(fo.witness, translate(f)):
            bad.append(f"FO witness does not re-verify for {_show(f)}")
        witness = lc_witness_from_fo(fo.witness)
        if not eval_pos(witness, f):
            bad.append(f"singleton from the FO witness fails {_show(f)}")
        lc = bounded_lc_sat(f, 1, bound)
        if lc.status is not SatStatus.SAT_WITHIN_BOUND:
            bad.append(f"no L_C model within the bound for {_show(f)}")
        elif not eval_pos(lc.witness, f):
            bad.append(f"L_C witness does not re-verify for {_show(f)}")
    return bad


@prop("reduction-soundness")
def _reduction(rng) -> Outcome:
    return len(corpus()), reduction_failures()


# -- counting -------------------------------------------------------------------


def counting_failures() -> list[str]:
    bad = []
    for n in range(1, 5):
        got, want = counting.count_models(counting.PHI_SYM, n), counting.closed_form_symmetric(n)
        if got != want:
            bad.append(f"symmetric n={n}: {got} vs {want}")
    for n in range(1, 8):
        got, want = counting.count_functions_anti_involutive(n), counting.closed_form_anti_involutive(n)
        if got != want:
            bad.append(f"anti-involutive functions n={n}: {got} vs {want}")
    for n in range(1, 5):
        got, want = counting.count_models(counting.PHI_AI, n), counting.count_functions_anti_involutive(n)
        if got != want:
            bad.append(f"anti-involutive models n={n}: {got} vs {want}")
    return bad


@prop("counting")
def _counting(rng) -> Outcome:
    return 15, counting_failures()


# -- perspectives ---------------------------------------------------------------


@prop("persp-rank1-flatness")
def _rank1(rng) -> Outcome:
    bad = []
    cases = 300
    for _ in range(cases):
        p = random_perspective(rng, 1)
        f = random_modal(rng, 0)
        holds = persp_eval(p, f)
        if holds != all(eval_fo(m, f) for m in p.members):
            bad.append(_show(f))
    return cases, bad


@prop("restrict-idempotent")
def _idempotent(rng) -> Outcome:
    bad = []
    cases = 300
    for _ in range(cases):
        r = rng.randint(1, 3)
        p = random_perspective(rng, r)
        chi = random_modal(rng, rng.randint(0, r - 1), connectives=("not", "and", "dia"))
        c = rng.random() < 0.5
        once = restrict(p, chi, c)
        if once and restrict(once, chi, c) != once:
            bad.append(_show(chi))
    return cases, bad


def _negation_only_on_rank0(f: Formula) -> bool:
    return all(rank(n.body) == 0 for n in walk(f) if isinstance(n, Not))


def _first_vs_signed(rng, restricted: bool) -> Outcome:
    bad = []
    cases = 0
    while cases < 300:
        r = rng.randint(1, 3)
        p = random_perspective(rng, r)
        f = random_modal(rng, r, connectives=("not", "and", "dia"))
        if restricted and not _negation_only_on_rank0(f):
            continue
        cases += 1
        a, b = persp_eval(p, f), persp_eval_signed(p, f).positive
        if a != b:
            bad.append(f"{_show(f)} on {p!r}: first {a}, signed {b}")
    return cases, bad


@prop("first-vs-signed")
def _fvs(rng) -> Outcome:
    return _first_vs_signed(rng, restricted=False)


@prop("first-vs-signed-rank0-negation")
def _fvs0(rng) -> Outcome:
    return _first_vs_signed(rng, restricted=True)


def minor_diamond_failures(rng: random.Random, n: int = 200) -> list[str]:
    bad = []
    for _ in range(n):
        r = rng.randint(1, 3)
        p = random_perspective(rng, r)
        body = random_modal(rng, r - 1)
        while rank(body) != r - 1:
            body = random_modal(rng, r - 1)
        want = persp_eval_signed(p, Diamond(body))
        got = minor_eval_modal(p, MINOR_EXISTS, body)
        if got != want:
            bad.append(f"{_show(body)}: minor {got}, diamond {want}")
    return bad


@prop("minor-exists-is-diamond")
def _minor(rng) -> Outcome:
    return 200, minor_diamond_failures(rng)


@prop("witness-conditions")
def _witness(rng) -> Outcome:
    bad = []
    for q in (MINOR_EXISTS, MINOR_FORALL):
        if not witness_check(q, q.base, 4):
            bad.append(f"{q.name} fails its witness conditions")
    if witness_check(ALWAYS_ACCEPT, MINOR_EXISTS.base, 4):
        bad.append("always-accept passes")
    return 3, bad


@prop("signed-exclusive")
def _exclusive(rng) -> Outcome:
    bad = []
    cases = 500
    for _ in range(cases):
        r = rng.randint(1, 3)
        p = random_perspective(rng, r)
        f = random_modal(rng, r)
        v = persp_eval_signed(p, f)
        if v.positive and v.negative:
            bad.append(f"{_show(f)} on {p!r}")
    return cases, bad


def even_odd_failures() -> list[str]:
    from msl.fixtures import even_odd

    p = even_odd()
    both = parse("(<> odd & <> even)")
    bad = []
    if not persp_eval(p, both):
        bad.append("P does not satisfy <>odd & <>even")
    for side in ("even", "odd"):
        if not filter_implies(p, parse(side), Not(both)):
            bad.append(f"{side} => ~(<>odd & <>even) fails")
    return bad


@prop("even-odd")
def _even_odd(rng) -> Outcome:
    return 1, even_odd_failures()


# -- weights and systems ----------------------------------------------------------


@prop("weights")
def _weights(rng) -> Outcome:
    from fractions import Fraction

    bad = []
    cases = 200
    universe = ModelSet.of_structures(random_model_set(rng, max_members=4, variables=()).structures())
    for _ in range(cases):
        rows = [(f"P{i}", [rng.randrange(len(universe))], Fraction(rng.randint(-9, 9), rng.randint(1, 4))) for i in range(rng.randint(0, 6))]
        wu = build(universe, rows)
        names = [r[0] for r in rows]
        shuffled = names[:]
        rng.shuffle(shuffled)
        if value_of(wu, names) != value_of(wu, shuffled):
            bad.append(f"order changes the sum for {rows}")
        if full_value(wu) != value_of(wu, names):
            bad.append(f"full value differs for {rows}")
    return cases, bad


def system_failures() -> list[str]:
    bad = []
    sysm = toggle_system()
    first, second = run_system(sysm, "s0", 10), run_system(sysm, "s0", 10)
    if first != second:
        bad.append("run_system is not deterministic")
    if first.states() != ["s0", "s1"] * 5 + ["s0"]:
        bad.append(f"toggle trace {first.states()}")
    evols = {k: proper_evolutions(sysm.base, k) for k in range(5)}
    for k, es in evols.items():
        for e in es:
            v = e.violations(sysm.base)
            if v:
                bad.append(f"improper evolution at k={k}: {v[0]}")
        if k:
            shorter = set(evols[k - 1])
            closure = {e.truncate(j) for e in es for j in range(1, len(e.steps) + 1)}
            if not shorter <= closure:
                bad.append(f"evolutions of bound {k - 1} missing from bound {k}")
    return bad


@prop("systems")
def _systems(rng) -> Outcome:
    return 5, system_failures()


# -- golden examples --------------------------------------------------------------


@prop("golden")
def _golden(rng) -> Outcome:
    bad = []
    for name, check in GOLDEN.items():
        try:
            check()
        except Exception as e:  # noqa: BLE001 - report every kind of failure by name
            bad.append(f"{name}: {type(e).__name__} {e}".rstrip())
    return len(GOLDEN), bad


# -- runner -----------------------------------------------------------------------


def _select(only: Optional[Iterable[str]]) -> list[str]:
    if not only:
        return list(PROPERTIES)
    wanted = []
    for item in only:
        for name in item.split(","):
            name = name.strip()
            if name and name not in PROPERTIES:
                raise KeyError(f"unknown property {name!r}; choose from {', '.join(PROPERTIES)}")
            if name:
                wanted.append(name)
    return [n for n in PROPERTIES if n in wanted]


def run_suite(seed: int = 42, only: Optional[Iterable[str]] = None) -> Report:
    results = []
    for name in _select(only):
        rng = random.Random(f"{seed}:{name}")
        try:
            cases, failures = PROPERTIES[name](rng)
            results.append(Result(name, cases, failures))
        except Exception as e:  # noqa: BLE001
            results.append(Result(name, 0, error=f"{type(e).__name__}: {e}"))
    return Report(seed, results)


def timed_suite(seed: int = 42, only: Optional[Iterable[str]] = None) -> tuple[Report, dict[str, float]]:
    times = {}
    results = []
    for name in _select(only):
        start = time.perf_counter()
        results.extend(run_suite(seed, [name]).results)
        times[name] = time.perf_counter() - start
    return Report(seed, results), times
