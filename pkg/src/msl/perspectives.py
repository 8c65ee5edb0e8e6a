"""Perspectives: rank-stratified nested sets over a model set.

A rank-1 perspective is a set of pointed models (interpretations; a world w
is the value of the point variable ``x``).  A rank-(k+1) perspective is a
set of rank-k perspectives.  Two evaluators are provided:

* ``persp_eval``: one turnstile.  Formulas of lower rank than the
  perspective descend to every child; at equal rank ``~`` and ``&`` are
  classical and ``<>`` asks for some child.
* ``persp_eval_signed``: the pair of turnstiles, where ``|`` and ``->`` are
  primitive and a lower-rank operand restricts the perspective.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Optional, Union

from msl.evaluator import Verdict
from msl.fo import EvaluationError, compile_leaf
from msl.minor import BUILTINS, MinorQuantifier, accepts
from msl.models import Interpretation, ModelError
from msl.syntax import (
    And,
    CountExists,
    Diamond,
    Exists,
    FilterImpl,
    Formula,
    Impl,
    MinorModal,
    MinorQuant,
    Not,
    Or,
    expand_impl,
    expand_or,
    map_formula,
    rank,
    walk,
)

Node = Union["Perspective", Interpretation]


class RankError(EvaluationError):
    pass


class RegularityError(EvaluationError):
    pass


class Perspective:
    __slots__ = ("rank", "members", "_hash", "_key")

    def __init__(self, rank: int, members: Iterable[Node] = ()):
        if rank < 1:
            raise ModelError("perspective rank must be at least 1")
        ms = frozenset(members)
        for m in ms:
            if rank == 1 and not isinstance(m, Interpretation):
                raise ModelError("a rank-1 perspective holds pointed models")
            if rank > 1 and not (isinstance(m, Perspective) and m.rank == rank - 1):
                raise ModelError(f"a rank-{rank} perspective holds rank-{rank - 1} perspectives")
        self.rank = rank
        self.members = ms
        self._hash = hash((rank, ms))
        self._key = None

    @classmethod
    def nest(cls, tree) -> "Perspective":
        """Build from nested lists whose innermost lists hold interpretations."""
        items = list(tree)
        if all(isinstance(i, Interpretation) for i in items):
            return cls(1, items)
        kids = [cls.nest(i) for i in items]
        ranks = {k.rank for k in kids}
        if len(ranks) != 1:
            raise ModelError("children of a perspective must share one rank")
        return cls(ranks.pop() + 1, kids)

    def sort_key(self):
        if self._key is None:
            self._key = (self.rank, tuple(sorted(m.sort_key() for m in self.members)))
        return self._key

    def children(self) -> list[Node]:
        return sorted(self.members, key=lambda m: m.sort_key())

    def leaves(self) -> Iterator[Interpretation]:
        for m in self.members:
            if isinstance(m, Interpretation):
                yield m
            else:
                yield from m.leaves()

    @property
    def model_domain(self) -> Optional[frozenset[int]]:
        """The shared domain of all leaf structures, or None if they differ."""
        doms = {leaf.structure.domain for leaf in self.leaves()}
        return doms.pop() if len(doms) == 1 else None

    def is_regular(self) -> bool:
        return self.model_domain is not None

    def no_empty_levels(self) -> bool:
        if not self.members:
            return False
        return self.rank == 1 or all(m.no_empty_levels() for m in self.members)

    def is_strongly_regular(self) -> bool:
        return self.is_regular() and self.no_empty_levels()

    def bind(self, var: str, value: int) -> "Perspective":
        """P[value/var]: rebind var at every pointed model."""
        return Perspective(self.rank, (m.bind(var, value) for m in self.members))

    def __bool__(self) -> bool:
        return bool(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.children())

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Perspective):
            return NotImplemented
        return self._hash == other._hash and self.rank == other.rank and self.members == other.members

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perspective({self.rank}, {self.children()!r})"


def _bases(quantifiers: Mapping[str, MinorQuantifier]):
    return {name: q.base for name, q in quantifiers.items()}


class _Leaves:
    """Classical truth at pointed models, with compiled formulas cached by node id."""

    def __init__(self, quantifiers: Mapping[str, MinorQuantifier]):
        self.bases = _bases(quantifiers)
        self.cache: dict[int, object] = {}

    def holds(self, leaf: Interpretation, f: Formula) -> bool:
        check = self.cache.get(id(f))
        if check is None:
            check = self.cache[id(f)] = compile_leaf(f, self.bases)
        return check(leaf.structure, dict(leaf.env))


def _check_rank(p: Perspective, f: Formula):
    if rank(f) > p.rank:
        raise RankError(f"formula of rank {rank(f)} on a perspective of rank {p.rank}")


def _domain(p: Perspective) -> list[int]:
    dom = p.model_domain
    if dom is None:
        raise RegularityError("quantifying over the model domain needs a regular perspective")
    return sorted(dom)


# -- first take ---------------------------------------------------------------


def _expand_for_first_take(f: Formula) -> Formula:
    def step(node):
        if isinstance(node, Or):
            return expand_or(node)
        if isinstance(node, Impl):
            return expand_or(expand_impl(node))
        return node

    return map_formula(f, step)


class FirstTake:
    def __init__(self, quantifiers: Mapping[str, MinorQuantifier] = BUILTINS):
        self.leaves = _Leaves(quantifiers)
        self._ranks: dict[int, int] = {}

    def _rank(self, f: Formula) -> int:
        r = self._ranks.get(id(f))
        if r is None:
            r = self._ranks[id(f)] = rank(f)
        return r

    def holds(self, p: Node, f: Formula) -> bool:
        if isinstance(p, Interpretation):
            return self.leaves.holds(p, f)
        r = self._rank(f)
        if r < p.rank:
            return all(self.holds(c, f) for c in p.members)
        match f:
            case Not(body=b):
                return not self.holds(p, b)
            case And(left=a, right=b):
                return self.holds(p, a) and self.holds(p, b)
            case Diamond(body=b):
                return any(self.holds(c, b) for c in p.members)
            case Exists(var=v, body=b):
                return any(self.holds(p.bind(v, a), b) for a in _domain(p))
            case FilterImpl(left=a, right=b):
                kept = _filter(p, lambda c: self.holds(c, a), a)
                return not kept or self.holds(kept, b)
        raise EvaluationError(f"{type(f).__name__} is outside the single-turnstile fragment")


def persp_eval(p: Perspective, f: Formula, quantifiers: Mapping[str, MinorQuantifier] = BUILTINS) -> bool:
    _check_rank(p, f)
    g = _expand_for_first_take(f)
    if any(isinstance(n, (MinorModal, MinorQuant)) and rank(n) > 0 for n in walk(g)):
        raise EvaluationError("minor quantifiers above the leaves need the signed semantics")
    return FirstTake(quantifiers).holds(p, g)


def _filter(p: Perspective, keep, antecedent: Formula) -> Perspective:
    if rank(antecedent) >= p.rank:
        raise RankError(f"the antecedent of => must have rank below {p.rank}")
    return Perspective(p.rank, (c for c in p.members if keep(c)))


# -- signed (new take) --------------------------------------------------------


class Signed:
    def __init__(self, quantifiers: Mapping[str, MinorQuantifier] = BUILTINS):
        self.quantifiers = dict(quantifiers)
        self.leaves = _Leaves(quantifiers)
        self._memo: dict = {}
        self._ranks: dict[int, int] = {}
        self._keep: list[Formula] = []

    def _rank(self, f: Formula) -> int:
        r = self._ranks.get(id(f))
        if r is None:
            self._keep.append(f)
            r = self._ranks[id(f)] = rank(f)
        return r

    def pos(self, p: Node, f: Formula) -> bool:
        return self.value(True, p, f)

    def neg(self, p: Node, f: Formula) -> bool:
        return self.value(False, p, f)

    def value(self, sign: bool, p: Node, f: Formula) -> bool:
        if isinstance(p, Interpretation):
            return self.leaves.holds(p, f) == sign
        key = (sign, id(f), p)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._value(sign, p, f)
        return hit

    def _quantifier(self, name: str) -> MinorQuantifier:
        q = self.quantifiers.get(name)
        if q is None:
            raise EvaluationError(f"unknown minor quantifier {name!r}")
        return q

    def minor_quant(self, sign: bool, p: Perspective, q: MinorQuantifier, var: str, body: Formula) -> bool:
        dom = _domain(p)
        verified = {a for a in dom if self.pos(p.bind(var, a), body)}
        refuted = {a for a in dom if self.neg(p.bind(var, a), body)}
        return accepts(q.accept_pos if sign else q.accept_neg, len(dom), verified, refuted)

    def restrict(self, p: Perspective, chi: Formula, complement: bool = False) -> Perspective:
        rc = self._rank(chi)
        if rc >= p.rank:
            raise RankError(f"restriction by a rank-{rc} formula needs rank above {rc}, got {p.rank}")
        if p.rank == rc + 1:
            return Perspective(p.rank, (c for c in p.members if self.pos(c, chi) != complement))
        kids = (self.restrict(c, chi, complement) for c in p.members)
        return Perspective(p.rank, (k for k in kids if k))

    def _restricted(self, sign: bool, p: Perspective, chi: Formula, psi: Formula, complement: bool) -> bool:
        r = self.restrict(p, chi, complement)
        if sign:
            return not r or self.pos(r, psi)
        return bool(r) and self.neg(r, psi)

    def _value(self, sign: bool, p: Perspective, f: Formula) -> bool:
        alpha = p.rank
        r = self._rank(f)
        if r < alpha:
            return all(self.value(sign, c, f) for c in p.members)
        match f:
            case Not(body=b):
                return self.value(not sign, p, b)
            case And(left=a, right=b):
                if sign:
                    return self.pos(p, a) and self.pos(p, b)
                return self.neg(p, a) or self.neg(p, b)
            case Or(left=a, right=b):
                ra, rb = self._rank(a), self._rank(b)
                if ra == rb == alpha:
                    if sign:
                        return self.pos(p, a) or self.pos(p, b)
                    return self.neg(p, a) and self.neg(p, b)
                chi, psi = (a, b) if ra < alpha else (b, a)
                return self._restricted(sign, p, chi, psi, complement=True)
            case Impl(left=a, right=b):
                if self._rank(a) == alpha:
                    if sign:
                        return self.neg(p, a) or self.pos(p, b)
                    return self.pos(p, a) and self.neg(p, b)
                return self._restricted(sign, p, a, b, complement=False)
            case FilterImpl(left=a, right=b):
                kept = _filter(p, lambda c: self.pos(c, a), a)
                if sign:
                    return not kept or self.pos(kept, b)
                return bool(kept) and self.neg(kept, b)
            case Diamond(body=b):
                if sign:
                    return any(self.pos(c, b) for c in p.members)
                return all(self.neg(c, b) for c in p.members)
            case MinorModal(qname=name, body=b):
                q = self._quantifier(name)
                verified = {c for c in p.members if self.pos(c, b)}
                refuted = {c for c in p.members if self.neg(c, b)}
                return accepts(q.accept_pos if sign else q.accept_neg, len(p.members), verified, refuted)
            case Exists(var=v, body=b):
                if sign:
                    return any(self.pos(p.bind(v, a), b) for a in _domain(p))
                return all(self.neg(p.bind(v, a), b) for a in _domain(p))
            case MinorQuant(qname=name, var=v, body=b):
                return self.minor_quant(sign, p, self._quantifier(name), v, b)
            case CountExists():
                raise EvaluationError("counting quantifiers are only read at pointed models")
        raise EvaluationError(f"{type(f).__name__} has no perspective clause")


def _signed_ready(p: Perspective, f: Formula):
    _check_rank(p, f)
    if not p.no_empty_levels():
        raise RegularityError("the signed semantics needs a perspective with no empty level")


def persp_eval_signed(p: Perspective, f: Formula, quantifiers: Mapping[str, MinorQuantifier] = BUILTINS) -> Verdict:
    _signed_ready(p, f)
    ev = Signed(quantifiers)
    return Verdict(ev.pos(p, f), ev.neg(p, f))


def restrict(p: Perspective, chi: Formula, complement: bool = False, quantifiers: Mapping[str, MinorQuantifier] = BUILTINS) -> Perspective:
    """P restricted to chi (or to its classical negation with complement=True)."""
    return Signed(quantifiers).restrict(p, chi, complement)


def filter_implies(
    p: Perspective,
    antecedent: Formula,
    consequent: Formula,
    semantics: str = "first",
    quantifiers: Mapping[str, MinorQuantifier] = BUILTINS,
) -> bool:
    """Keep the children where the antecedent holds, then evaluate the
    consequent on what is left.  An empty remainder gives true."""
    _check_rank(p, consequent)
    if semantics == "first":
        ev = FirstTake(quantifiers)
        a, c = _expand_for_first_take(antecedent), _expand_for_first_take(consequent)
        kept = _filter(p, lambda child: ev.holds(child, a), a)
        return not kept or ev.holds(kept, c)
    if semantics == "signed":
        ev = Signed(quantifiers)
        kept = _filter(p, lambda child: ev.pos(child, antecedent), antecedent)
        return not kept or ev.pos(kept, consequent)
    raise ValueError(f"unknown semantics {semantics!r}")


def minor_eval_modal(p: Perspective, q: MinorQuantifier, body: Formula) -> Verdict:
    f = MinorModal(q.name, body)
    if rank(f) != p.rank:
        raise RankError(f"<{q.name}> formula of rank {rank(f)} on a perspective of rank {p.rank}")
    return persp_eval_signed(p, f, {**BUILTINS, q.name: q})


def minor_eval_quant(p: Perspective, q: MinorQuantifier, var: str, body: Formula) -> Verdict:
    """The Q x clause applied at the top of P, over the model domain.

    The body may have lower rank than P; it is then read at each P[a/x]
    by the signed semantics, which sends it down to every child.
    """
    _signed_ready(p, body)
    if not p.is_regular():
        raise RegularityError("minor quantification over the model domain needs a regular perspective")
    ev = Signed({**BUILTINS, q.name: q})
    return Verdict(ev.minor_quant(True, p, q, var, body), ev.minor_quant(False, p, q, var, body))
