"""Seeded random formulas, model sets and perspectives for the property suites.

Every generator takes a ``random.Random`` so that one seed fixes a whole run.
Formula depth counts connective and quantifier nodes; atoms have depth 0.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from msl.models import Interpretation, ModelSet, Structure
from msl.perspectives import Perspective
from msl.syntax import (
    And,
    Const,
    CountExists,
    Diamond,
    Eq,
    Exists,
    Formula,
    Impl,
    MinorModal,
    Not,
    Or,
    Prop,
    Rel,
    Signature,
    quantifier_positions,
    swap_quantifiers,
)

BASE_SIG = Signature({"P": 1, "R": 2})
VARIABLES = ("x", "y")


def random_atom(rng: random.Random, sig: Signature = BASE_SIG, variables: Sequence[str] = VARIABLES) -> Formula:
    names = sorted(sig)
    pick = rng.randrange(len(names) + 1)
    if pick == len(names):
        return Eq(rng.choice(variables), rng.choice(variables))
    name = names[pick]
    return Rel(name, tuple(rng.choice(variables) for _ in range(sig[name])))


def random_fo(
    rng: random.Random,
    depth: int = 3,
    sig: Signature = BASE_SIG,
    variables: Sequence[str] = VARIABLES,
    counting: bool = False,
) -> Formula:
    """Random FO formula of depth at most ``depth``; Or and Impl appear as nodes."""
    if depth == 0 or rng.random() < 0.25:
        return random_atom(rng, sig, variables)
    kinds = ["not", "and", "or", "impl", "exists", "exists"]
    if counting:
        kinds.append("count")
    kind = rng.choice(kinds)
    sub = lambda: random_fo(rng, depth - 1, sig, variables, counting)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "impl":
        return Impl(sub(), sub())
    if kind == "count":
        return CountExists(rng.randrange(3), rng.choice(variables), sub())
    return Exists(rng.choice(variables), sub())


def random_lc(
    rng: random.Random,
    depth: int = 3,
    star: bool = False,
    sig: Signature = BASE_SIG,
    variables: Sequence[str] = VARIABLES,
    _negated: bool = False,
) -> Formula:
    """Random L_C formula (or L_C* with star=True).

    In L_C the constant quantifier never appears below a negation; operands
    of | and -> count as negated, since those connectives unfold into one.
    """
    if depth == 0 or rng.random() < 0.2:
        return random_atom(rng, sig, variables)
    allow_const = star or not _negated
    kinds = ["not", "and", "or", "impl", "exists"] + (["const", "const"] if allow_const else [])
    kind = rng.choice(kinds)

    def sub(negated: bool = _negated) -> Formula:
        return random_lc(rng, depth - 1, star, sig, variables, negated)

    if kind == "not":
        return Not(sub(True))
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(True), sub(True))
    if kind == "impl":
        return Impl(sub(True), sub(True))
    if kind == "const":
        return Const(rng.choice(variables), sub())
    return Exists(rng.choice(variables), sub())


def random_variant(rng: random.Random, f: Formula) -> Formula:
    """Swap E and C at a uniformly random subset of quantifier positions."""
    n = quantifier_positions(f)
    return swap_quantifiers(f, rng.getrandbits(n) if n else 0)


def random_structure(rng: random.Random, domain: Sequence[int], sig: Signature = BASE_SIG, density: float = 0.5) -> Structure:
    rels = {}
    for name in sorted(sig):
        arity = sig[name]
        tuples = []
        _all_tuples(domain, arity, (), tuples)
        rels[name] = [t for t in tuples if rng.random() < density]
    return Structure(domain, rels, sig)


def _all_tuples(domain, arity, prefix, out):
    if arity == 0:
        out.append(prefix)
        return
    for a in domain:
        _all_tuples(domain, arity - 1, prefix + (a,), out)


def random_domain(rng: random.Random, max_domain: int) -> list[int]:
    size = rng.randint(1, max_domain)
    return sorted(rng.sample(range(max_domain), size))


def random_model_set(
    rng: random.Random,
    max_members: int = 4,
    max_domain: int = 3,
    sig: Signature = BASE_SIG,
    variables: Sequence[str] = VARIABLES,
    min_members: int = 1,
    shared_domain: bool = False,
) -> ModelSet:
    """Members draw their own domains inside {0..max_domain-1} unless shared_domain."""
    count = rng.randint(min_members, max_members)
    shared = random_domain(rng, max_domain) if shared_domain else None
    members = []
    for _ in range(count):
        dom = shared or random_domain(rng, max_domain)
        s = random_structure(rng, dom, sig)
        members.append(Interpretation(s, {v: rng.choice(dom) for v in variables}))
    return ModelSet(members, variables)


def random_interpretation(rng: random.Random, max_domain: int = 3, sig: Signature = BASE_SIG, variables: Sequence[str] = VARIABLES) -> Interpretation:
    dom = list(range(rng.randint(1, max_domain)))
    return Interpretation(random_structure(rng, dom, sig), {v: rng.choice(dom) for v in variables})


# -- modal ----------------------------------------------------------------------

PROPS = ("p", "q")


def random_modal(
    rng: random.Random,
    max_rank: int,
    depth: int = 4,
    props: Sequence[str] = PROPS,
    connectives: Sequence[str] = ("not", "and", "or", "impl", "dia"),
    minor: Optional[str] = None,
) -> Formula:
    """Random propositional modal formula of rank at most max_rank.

    With ``minor`` set, every modality is the named minor modality instead of <>.
    """
    if depth == 0 or rng.random() < 0.25:
        return Prop(rng.choice(props))
    kinds = [k for k in connectives if k != "dia" or max_rank > 0]
    if not kinds:
        return Prop(rng.choice(props))
    kind = rng.choice(kinds)
    sub = lambda r=max_rank: random_modal(rng, r, depth - 1, props, connectives, minor)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "impl":
        return Impl(sub(), sub())
    body = sub(max_rank - 1)
    return MinorModal(minor, body) if minor else Diamond(body)


def random_perspective(
    rng: random.Random,
    rank: int,
    domain: Sequence[int] = (0, 1),
    props: Sequence[str] = PROPS,
    max_children: int = 3,
) -> Perspective:
    """Strongly regular: every level non-empty, every leaf over the same domain."""
    sig = Signature({p: 1 for p in props})
    if rank == 1:
        leaves = [
            Interpretation(random_structure(rng, domain, sig), {"x": rng.choice(domain)})
            for _ in range(rng.randint(1, max_children))
        ]
        return Perspective(1, leaves)
    kids = [random_perspective(rng, rank - 1, domain, props, max_children) for _ in range(rng.randint(1, max_children))]
    return Perspective(rank, kids)
