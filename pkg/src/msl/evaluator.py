"""Positive and negative truth of L_C* formulas on finite model sets.

``eval_pos`` / ``eval_neg`` implement the two turnstiles clause by clause:

* atoms hold positively (negatively) when every member satisfies (falsifies) them;
* ``&`` is pointwise for the positive turnstile and needs a cover
  M' u M'' = M for the negative one;
* ``E x`` ranges over choice functions positively and uses M[T/x] negatively;
* ``C x`` ranges over constant choice functions positively and uses
  M[CD/x] (CD the common domain) negatively.

``|`` and ``->`` are expanded to ``~(~a & ~b)`` and ``~a | b`` first.  With the
fast path on, first-order subformulas are decided member by member, which
is exact for them by flatness.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Literal, Optional

from msl.fo import EvaluationError, UnboundVariable, compile_fo, eval_fo
from msl.models import ChoiceFunction, Interpretation, ModelSet
from msl.syntax import (
    And,
    Const,
    CountExists,
    Eq,
    Exists,
    Formula,
    Fragment,
    Impl,
    Not,
    Or,
    Prop,
    Rel,
    classify,
    expand_impl,
    expand_or,
    free_vars,
    map_formula,
    to_first_order,
)

CoverMode = Literal["three-way", "partition"]

MAX_COVER_MEMBERS = 20


@dataclass(frozen=True)
class Verdict:
    positive: bool
    negative: bool

    def __str__(self) -> str:
        return f"pos={str(self.positive).lower()} neg={str(self.negative).lower()}"


@dataclass(frozen=True)
class Cover:
    """Witness for the negative conjunction clause: left |=- a, right |=- b."""

    left: ModelSet
    right: ModelSet


class VariantMismatch(EvaluationError):
    pass


def expand_connectives(f: Formula) -> Formula:
    def step(node):
        if isinstance(node, Or):
            return expand_or(node)
        if isinstance(node, Impl):
            return expand_or(expand_impl(node))
        return node

    return map_formula(f, step)


def _members_sorted(members) -> list[Interpretation]:
    return sorted(members, key=Interpretation.sort_key)


class Evaluator:
    """One evaluation configuration; ``stats`` counts enumerated objects."""

    def __init__(
        self,
        fast_path: bool = True,
        cover: CoverMode = "three-way",
        prune: bool = True,
        max_cover_members: int = MAX_COVER_MEMBERS,
    ):
        if cover not in ("three-way", "partition"):
            raise ValueError(f"unknown cover mode {cover!r}")
        self.fast_path = fast_path
        self.cover = cover
        self.prune = prune
        self.max_cover_members = max_cover_members
        self.stats: Counter = Counter()
        self._memo: dict = {}
        self._fo: dict[int, bool] = {}
        self._closed: dict[int, tuple[bool, bool]] = {}

    # -- entry points -------------------------------------------------

    def _prepare(self, ms: ModelSet, f: Formula) -> Formula:
        if Fragment.LC_STAR not in classify(f):
            raise EvaluationError("model-set evaluation needs an L_C* formula (no modal operators)")
        missing = free_vars(f) - ms.variables
        if missing and ms:
            raise UnboundVariable(f"unbound variable(s) {sorted(missing)}")
        g = expand_connectives(f)
        self._memo = {}
        self._fo = {}
        self._closed = {}
        self._mark_fo(g)
        self._mark_closed(g)
        return g

    def pos(self, ms: ModelSet, f: Formula) -> bool:
        return self._pos(ms.members, self._prepare(ms, f))

    def neg(self, ms: ModelSet, f: Formula) -> bool:
        return self._neg(ms.members, self._prepare(ms, f))

    def verdict(self, ms: ModelSet, f: Formula) -> Verdict:
        g = self._prepare(ms, f)
        return Verdict(self._pos(ms.members, g), self._neg(ms.members, g))

    # -- helpers --------------------------------------------------------

    def _mark_fo(self, f: Formula) -> bool:
        kids = [self._mark_fo(c) for c in f.children()]
        fo = all(kids) and not isinstance(f, Const)
        self._fo[id(f)] = fo
        return fo

    def _mark_closed(self, f: Formula) -> tuple[bool, bool]:
        """Whether |=+ f and |=- f are closed under subsets of the model set.

        Only the negative clause of C x breaks this: a smaller model set
        has a larger common domain, so M[CD/x] can grow.
        """
        kids = [self._mark_closed(c) for c in f.children()]
        match f:
            case Not():
                (p, n), = kids
                out = (n, p)
            case Const():
                out = (kids[0][0], False)
            case And() | Exists():
                out = (all(k[0] for k in kids), all(k[1] for k in kids))
            case _:
                out = (True, True)
        self._closed[id(f)] = out
        return out

    def _flat(self, members, f: Formula, want: bool) -> bool:
        check = compile_fo(f)
        return all(check(m.structure, dict(m.env)) == want for m in members)

    # -- positive turnstile ------------------------------------------------

    def _pos(self, members: frozenset, f: Formula) -> bool:
        key = (True, id(f), members)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._pos_uncached(members, f)
        return hit

    def _pos_uncached(self, members: frozenset, f: Formula) -> bool:
        if self.fast_path and self._fo[id(f)]:
            return self._flat(members, f, True)
        match f:
            case Rel() | Eq() | Prop() | CountExists():
                return self._flat(members, f, True)
            case And(left=l, right=r):
                return self._pos(members, l) and self._pos(members, r)
            case Not(body=b):
                return self._neg(members, b)
            case Exists(var=v, body=b):
                return self._choice_witness(members, v, b) is not None
            case Const(var=v, body=b):
                return self._constant_witness(members, v, b) is not None
        raise EvaluationError(f"cannot evaluate {type(f).__name__} on a model set")

    def _choice_witness(self, members, var, body) -> Optional[tuple[int, ...]]:
        ordered = _members_sorted(members)
        options = [m.structure.elements for m in ordered]
        if self.prune and self._closed[id(body)][0]:
            # under subset closure every chosen value must already work for its member alone
            options = [tuple(a for a in opts if self._pos(frozenset([m.bind(var, a)]), body)) for m, opts in zip(ordered, options)]
        for values in itertools.product(*options):
            self.stats["choice_functions"] += 1
            extended = frozenset(m.bind(var, a) for m, a in zip(ordered, values))
            if self._pos(extended, body):
                return values
        return None

    def _constant_witness(self, members, var, body) -> Optional[tuple[int, ...]]:
        if not members:
            # the empty constant choice function
            self.stats["constant_choice_functions"] += 1
            return () if self._pos(members, body) else None
        ordered = _members_sorted(members)
        shared = frozenset.intersection(*(m.structure.domain for m in ordered))
        for c in sorted(shared):
            self.stats["constant_choice_functions"] += 1
            if self._pos(frozenset(m.bind(var, c) for m in ordered), body):
                return (c,) * len(ordered)
        return None

    # -- negative turnstile ------------------------------------------------

    def _neg(self, members: frozenset, f: Formula) -> bool:
        key = (False, id(f), members)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._neg_uncached(members, f)
        return hit

    def _neg_uncached(self, members: frozenset, f: Formula) -> bool:
        if self.fast_path and self._fo[id(f)]:
            return self._flat(members, f, False)
        match f:
            case Rel() | Eq() | Prop() | CountExists():
                return self._flat(members, f, False)
            case And(left=l, right=r):
                return self._cover_witness(members, l, r) is not None
            case Not(body=b):
                return self._pos(members, b)
            case Exists(var=v, body=b):
                return self._neg(frozenset(m.bind(v, a) for m in members for a in m.structure.elements), b)
            case Const(var=v, body=b):
                shared = frozenset.intersection(*(m.structure.domain for m in members)) if members else frozenset()
                return self._neg(frozenset(m.bind(v, a) for m in members for a in shared), b)
        raise EvaluationError(f"cannot evaluate {type(f).__name__} on a model set")

    def _cover_witness(self, members: frozenset, left: Formula, right: Formula):
        """Masks (L, R) over the sorted members with L |=- left, R |=- right, L | R = all."""
        ordered = _members_sorted(members)
        n = len(ordered)
        full = (1 << n) - 1
        must_left = must_right = 0
        if self.prune:
            # a side closed under subsets can only take members that satisfy it alone
            left_closed, right_closed = self._closed[id(left)][1], self._closed[id(right)][1]
            for i, m in enumerate(ordered):
                one = frozenset([m])
                ok_left = not left_closed or self._neg(one, left)
                ok_right = not right_closed or self._neg(one, right)
                if not (ok_left or ok_right):
                    return None
                if not ok_right:
                    must_left |= 1 << i
                elif not ok_left:
                    must_right |= 1 << i
        free = [i for i in range(n) if not (must_left | must_right) >> i & 1]
        if len(free) > self.max_cover_members:
            raise EvaluationError(f"cover search over {len(free)} members exceeds the limit {self.max_cover_members}")

        def spread(mask: int) -> int:
            out = 0
            for k, i in enumerate(free):
                if mask >> k & 1:
                    out |= 1 << i
            return out

        def subset(mask: int) -> frozenset:
            return frozenset(ordered[i] for i in range(n) if mask >> i & 1)

        k = len(free)
        top = (1 << k) - 1
        # Every free member goes left only (in L, not in S), both (in S) or
        # right only (outside L): pairs (L, S) with S a submask of L are
        # exactly the 3^k assignments.  L runs from all-left down; S runs up
        # from empty.  Assignments whose left part fails are skipped in bulk.
        for lfree in range(top, -1, -1):
            lmask = must_left | spread(lfree)
            if self.cover == "partition":
                self.stats["covers"] += 1
                rmask = full ^ lmask
                if self._neg(subset(lmask), left) and self._neg(subset(rmask), right):
                    return lmask, rmask
                continue
            if not self._neg(subset(lmask), left):
                self.stats["covers"] += 1 << bin(lfree).count("1")
                continue
            rest = full ^ lmask
            sub = 0
            while True:
                self.stats["covers"] += 1
                rmask = rest | spread(sub)
                if self._neg(subset(rmask), right):
                    return lmask, rmask
                sub = (sub - lfree) & lfree
                if sub == 0:
                    break
        return None

    # -- witnesses ----------------------------------------------------------

    def witness(self, ms: ModelSet, f: Formula, positive: bool = True):
        """The choice function or cover that makes the top-level clause succeed.

        Leading negations are peeled off with the sign flipped, so a
        disjunction yields the cover of its negated conjunction.  Returns
        None when the clause fails or the node has no witness object (atoms,
        first-order nodes on the fast path).
        """
        g = self._prepare(ms, f)
        while isinstance(g, Not):
            g, positive = g.body, not positive
        members = ms.members
        ordered = ms.ordered()
        if positive and isinstance(g, (Exists, Const)):
            if isinstance(g, Exists):
                found = self._choice_witness(members, g.var, g.body)
            else:
                found = self._constant_witness(members, g.var, g.body)
            if found is None:
                return None
            # _members_sorted and ModelSet.ordered share the sort key
            return ChoiceFunction(tuple(found), isinstance(g, Const))
        if not positive and isinstance(g, And):
            found = self._cover_witness(members, g.left, g.right)
            if found is None:
                return None
            lmask, rmask = found
            pick = lambda mask: ms.subset(m for i, m in enumerate(ordered) if mask >> i & 1)
            return Cover(pick(lmask), pick(rmask))
        return None


def eval_pos(ms: ModelSet, f: Formula, *, fast_path: bool = True, cover: CoverMode = "three-way", prune: bool = True) -> bool:
    return Evaluator(fast_path, cover, prune).pos(ms, f)


def eval_neg(ms: ModelSet, f: Formula, *, fast_path: bool = True, cover: CoverMode = "three-way", prune: bool = True) -> bool:
    return Evaluator(fast_path, cover, prune).neg(ms, f)


def evaluate(ms: ModelSet, f: Formula, *, fast_path: bool = True, cover: CoverMode = "three-way", prune: bool = True) -> Verdict:
    return Evaluator(fast_path, cover, prune).verdict(ms, f)


def eval_variant_singleton(interp: Interpretation, variant: Formula, *, fast_path: bool = True) -> Verdict:
    """Evaluate an existential variant of an FO formula on {interp}.

    The verdict comes from the model-set clauses; it is cross-checked against
    classical truth of the first-order original and VariantMismatch is raised
    when the two disagree.
    """
    single = ModelSet([interp])
    verdict = evaluate(single, variant, fast_path=fast_path)
    classical = eval_fo(interp, to_first_order(variant))
    if verdict != Verdict(classical, not classical):
        raise VariantMismatch(
            f"{variant} on {interp!r}: model-set verdict {verdict}, classical truth of the FO original {classical}"
        )
    return verdict
