"""Translation of L_C* into first-order logic and bounded satisfiability search.

``translate`` is homomorphic on atoms, ``~``, ``&`` and ``E``; the only
rewrite is ``C x. phi`` to ``E x. (D(x) & T(phi))`` with D a fresh unary
relation standing for the common domain.  The two searches are complete
only up to their bounds, and the status names say so.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Union

from msl.enumeration import RelationSpace
from msl.evaluator import eval_pos, expand_connectives
from msl.fo import compile_fo
from msl.models import Interpretation, ModelSet, Structure, add_domain_predicate
from msl.syntax import (
    And,
    Const,
    Exists,
    Formula,
    Fragment,
    Rel,
    classify,
    free_vars,
    map_formula,
    signature_of,
)

DEFAULT_D = "__D"


class SatStatus(enum.Enum):
    SAT_WITHIN_BOUND = "SatWithinBound"
    UNKNOWN_WITHIN_BOUND = "UnknownWithinBound"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SatResult:
    status: SatStatus
    witness: Optional[Union[Interpretation, ModelSet]] = None
    examined: int = 0

    @property
    def sat(self) -> bool:
        return self.status is SatStatus.SAT_WITHIN_BOUND


class TranslationError(ValueError):
    pass


def translate(f: Formula, d_name: str = DEFAULT_D) -> Formula:
    if Fragment.LC_STAR not in classify(f):
        raise TranslationError("translation is defined on L_C* formulas")
    if d_name in signature_of(f):
        raise TranslationError(f"relation name {d_name!r} already occurs in the formula")

    def step(node: Formula) -> Formula:
        if isinstance(node, Const):
            return Exists(node.var, And(Rel(d_name, (node.var,)), node.body))
        return node

    return map_formula(f, step)


def _assignments(variables: list[str], elements: tuple[int, ...]):
    for values in itertools.product(elements, repeat=len(variables)):
        yield dict(zip(variables, values))


def bounded_fo_sat(f: Formula, max_domain: int) -> SatResult:
    """First structure (then assignment) of size 1..max_domain satisfying f classically."""
    if Fragment.FO not in classify(f):
        raise TranslationError("bounded_fo_sat expects a first-order formula")
    if max_domain < 1:
        raise ValueError("max_domain must be at least 1")
    check = compile_fo(f)
    sig = signature_of(f)
    variables = sorted(free_vars(f))
    examined = 0
    for n in range(1, max_domain + 1):
        for s in RelationSpace(sig, n):
            for env in _assignments(variables, s.elements):
                examined += 1
                if check(s, dict(env)):
                    return SatResult(SatStatus.SAT_WITHIN_BOUND, Interpretation(s.freeze(), env), examined)
    return SatResult(SatStatus.UNKNOWN_WITHIN_BOUND, None, examined)


def _candidate_structures(sig, max_models: int, max_domain: int) -> list[Structure]:
    if max_models == 1:
        # a single member can be renamed onto an initial segment
        domains = [tuple(range(k)) for k in range(1, max_domain + 1)]
    else:
        pool = range(max_domain)
        domains = [d for k in range(1, max_domain + 1) for d in itertools.combinations(pool, k)]
    out = []
    for dom in domains:
        space = RelationSpace(sig, len(dom))
        for s in space:
            rename = dict(zip(space.elements, dom))
            out.append(Structure(dom, {n: [tuple(rename[a] for a in t) for t in ts] for n, ts in s.rels.items()}))
    return out


def bounded_lc_sat(f: Formula, max_models: int, max_domain: int) -> SatResult:
    """First non-empty model set (at most max_models members, domains inside
    {0..max_domain-1}) that positively satisfies the L_C sentence f."""
    if Fragment.LC not in classify(f):
        raise TranslationError("bounded_lc_sat expects an L_C formula")
    if free_vars(f):
        raise TranslationError(f"bounded_lc_sat expects a sentence; free: {sorted(free_vars(f))}")
    if max_models < 1 or max_domain < 1:
        raise ValueError("bounds must be at least 1")
    structures = _candidate_structures(signature_of(f), max_models, max_domain)
    g = expand_connectives(f)
    examined = 0
    for k in range(1, max_models + 1):
        for combo in itertools.combinations(structures, k):
            examined += 1
            ms = ModelSet.of_structures(combo)
            if eval_pos(ms, g):
                return SatResult(SatStatus.SAT_WITHIN_BOUND, ms, examined)
    return SatResult(SatStatus.UNKNOWN_WITHIN_BOUND, None, examined)


def check_translation_claim(f: Formula, ms: ModelSet, d_name: str = DEFAULT_D) -> bool:
    """Whether M |=+ phi implies M_D |=+ T(phi) on this instance."""
    if not eval_pos(ms, f):
        return True
    return eval_pos(add_domain_predicate(ms, d_name), translate(f, d_name))


def lc_witness_from_fo(witness: Interpretation) -> ModelSet:
    """The singleton model set built from a classical model of T(phi).

    D stays interpreted; phi does not mention it, so it is inert.
    """
    return ModelSet([witness])
