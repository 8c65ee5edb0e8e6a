"""Formula ASTs, signatures and the syntactic queries run over them.

Nodes are frozen dataclasses.  Equality is structural and ignores the
source span recorded by the parser, so a parsed formula compares equal to
one built by hand.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Tuple

Span = Optional[Tuple[int, int]]

# A pointed model (M, w) is stored as (M, f) with f(POINT_VAR) = w; a
# proposition p is read as the unary atom p(POINT_VAR).
POINT_VAR = "x"


class SignatureError(ValueError):
    pass


class Signature(Mapping[str, int]):
    """Relation name -> arity."""

    __slots__ = ("_arities",)

    def __init__(self, arities: Mapping[str, int] | None = None, **kw: int):
        merged = dict(arities or {})
        merged.update(kw)
        for name, k in merged.items():
            if not isinstance(k, int) or k < 1:
                raise SignatureError(f"relation {name!r} needs a positive arity, got {k!r}")
        self._arities = dict(sorted(merged.items()))

    def __getitem__(self, name: str) -> int:
        return self._arities[name]

    def __iter__(self):
        return iter(self._arities)

    def __len__(self) -> int:
        return len(self._arities)

    def __hash__(self) -> int:
        return hash(tuple(self._arities.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, Signature):
            return self._arities == other._arities
        return NotImplemented

    def __repr__(self) -> str:
        return "Signature(" + ", ".join(f"{n}/{k}" for n, k in self._arities.items()) + ")"

    def extend(self, name: str, arity: int) -> "Signature":
        if name in self._arities:
            raise SignatureError(f"relation {name!r} already in signature")
        return Signature({**self._arities, name: arity})

    def union(self, other: Mapping[str, int]) -> "Signature":
        merged = dict(self._arities)
        for name, k in other.items():
            if merged.get(name, k) != k:
                raise SignatureError(f"relation {name!r} used with arities {merged[name]} and {k}")
            merged[name] = k
        return Signature(merged)

    def to_text(self) -> str:
        return " ".join(f"{n}/{k}" for n, k in self._arities.items())


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from msl.printer import to_text

        return to_text(self)


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: Tuple[str, ...]
    span: Span = _span()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str
    span: Span = _span()


@dataclass(frozen=True)
class Prop(Formula):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    span: Span = _span()

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula
    span: Span = _span()

    def children(self):
        return (self.left, self.right)


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Impl(_Binary):
    """Material-style implication ``->``; its reading depends on the semantics."""


class FilterImpl(_Binary):
    """``=>``: evaluate the right side on the children satisfying the left side."""


@dataclass(frozen=True)
class _Quant(Formula):
    var: str
    body: Formula
    span: Span = _span()

    def children(self):
        return (self.body,)


class Exists(_Quant):
    pass


class Const(_Quant):
    """The constant-choice quantifier Cx."""


@dataclass(frozen=True)
class CountExists(Formula):
    k: int
    var: str
    body: Formula
    span: Span = _span()

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("counting quantifier needs k >= 0")

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Diamond(Formula):
    body: Formula
    span: Span = _span()

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class MinorModal(Formula):
    qname: str
    body: Formula
    span: Span = _span()

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class MinorQuant(Formula):
    qname: str
    var: str
    body: Formula
    span: Span = _span()

    def children(self):
        return (self.body,)


# ----------------------------------------------------------------------
# derived forms


def forall(var: str, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def box(body: Formula) -> Formula:
    return Not(Diamond(Not(body)))


def falsum(prop: str = "p") -> Formula:
    return And(Prop(prop), Not(Prop(prop)))


def derived_diamond(body: Formula, prop: str = "p") -> Formula:
    """``~(body -> bot)`` with bot := ``(p & ~p)``."""
    return Not(Impl(body, falsum(prop)))


def box_implication(left: Formula, right: Formula) -> Formula:
    """The rank-raising implication ``[](~left | right)``."""
    return box(Or(Not(left), right))


def expand_or(f: Or) -> Formula:
    return Not(And(Not(f.left), Not(f.right)))


def expand_impl(f: Impl) -> Formula:
    return Or(Not(f.left), f.right)


# ----------------------------------------------------------------------
# traversal helpers


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Rel(args=args):
            out = frozenset(args)
        case Eq(left=a, right=b):
            out = frozenset((a, b))
        case Prop():
            out = frozenset((POINT_VAR,))
        case Exists(var=v, body=b) | Const(var=v, body=b) | CountExists(var=v, body=b) | MinorQuant(var=v, body=b):
            out = free_vars(b) - {v}
        case _:
            out = frozenset().union(*(free_vars(c) for c in f.children()))
    return out


def variables(f: Formula) -> frozenset[str]:
    """Every variable occurring in f, bound or free."""
    out: set[str] = set()
    for node in walk(f):
        match node:
            case Rel(args=args):
                out.update(args)
            case Eq(left=a, right=b):
                out.update((a, b))
            case Prop():
                out.add(POINT_VAR)
            case Exists(var=v) | Const(var=v) | CountExists(var=v) | MinorQuant(var=v):
                out.add(v)
    return frozenset(out)


def relation_arities(f: Formula) -> dict[str, int]:
    """Relations used by f; raises SignatureError on inconsistent arities."""
    out: dict[str, int] = {}
    for node in walk(f):
        if isinstance(node, Rel):
            name, k = node.name, len(node.args)
        elif isinstance(node, Prop):
            name, k = node.name, 1
        else:
            continue
        if out.setdefault(name, k) != k:
            raise SignatureError(f"relation {name!r} used with arities {out[name]} and {k}")
    return out


def signature_of(f: Formula) -> Signature:
    return Signature(relation_arities(f))


def check_signature(f: Formula, sig: Mapping[str, int]) -> None:
    for name, k in relation_arities(f).items():
        if name not in sig:
            raise SignatureError(f"unknown relation {name!r}")
        if sig[name] != k:
            raise SignatureError(f"relation {name!r} has arity {sig[name]}, used with {k}")


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


# ----------------------------------------------------------------------
# rank and fragments

_MODAL = (Diamond, MinorModal)


def rank(f: Formula) -> int:
    match f:
        case Rel() | Eq() | Prop():
            return 0
        case Diamond(body=b) | MinorModal(body=b):
            return rank(b) + 1
        case _:
            return max(rank(c) for c in f.children())


class Fragment(enum.Enum):
    FO = "FO"
    LC = "LC"
    LC_STAR = "LCStar"
    MODAL_PROP = "ModalProp"
    MODAL_FO = "ModalFO"


_MODAL_ONLY = (Diamond, MinorModal, MinorQuant, FilterImpl)
_QUANT = (Exists, Const, CountExists, MinorQuant)


def _const_under_negation(f: Formula, negated: bool = False) -> bool:
    match f:
        case Const(body=b):
            return negated or _const_under_negation(b, negated)
        case Not(body=b):
            return _const_under_negation(b, True)
        case Or() | Impl():
            # read as ~(~a & ~b) and ~a | b: both operands sit under a negation
            return any(_const_under_negation(c, True) for c in f.children())
        case _:
            return any(_const_under_negation(c, negated) for c in f.children())


def _count_bodies_first_order(f: Formula) -> bool:
    for node in walk(f):
        if isinstance(node, CountExists) and any(isinstance(n, Const) for n in walk(node.body)):
            return False
    return True


def classify(f: Formula) -> frozenset[Fragment]:
    nodes = list(walk(f))
    has_const = any(isinstance(n, Const) for n in nodes)
    has_modal = any(isinstance(n, _MODAL_ONLY) for n in nodes)
    out: set[Fragment] = set()
    if not has_modal:
        if not has_const:
            out.add(Fragment.FO)
        if _count_bodies_first_order(f):
            out.add(Fragment.LC_STAR)
            if not _const_under_negation(f):
                out.add(Fragment.LC)
    elif not has_const:
        out.add(Fragment.MODAL_FO)
        propositional = not any(isinstance(n, (Rel, Eq) + _QUANT) for n in nodes)
        if propositional:
            out.add(Fragment.MODAL_PROP)
    return frozenset(out)


def is_two_variable(f: Formula) -> bool:
    return variables(f) <= {"x", "y"}


def is_existential_variant(a: Formula, b: Formula) -> bool:
    """True iff a and b differ only by swapping E x / C x at quantifier positions."""
    if isinstance(a, (Exists, Const)) and isinstance(b, (Exists, Const)):
        return a.var == b.var and is_existential_variant(a.body, b.body)
    if type(a) is not type(b):
        return False
    match a:
        case Rel() | Eq() | Prop():
            return a == b
        case CountExists():
            return a.k == b.k and a.var == b.var and is_existential_variant(a.body, b.body)
        case MinorModal():
            return a.qname == b.qname and is_existential_variant(a.body, b.body)
        case MinorQuant():
            return a.qname == b.qname and a.var == b.var and is_existential_variant(a.body, b.body)
    return all(is_existential_variant(x, y) for x, y in zip(a.children(), b.children()))


def to_first_order(f: Formula) -> Formula:
    """Replace every C x by E x (the FO formula this is a variant of)."""
    return map_formula(f, lambda n: Exists(n.var, n.body) if isinstance(n, Const) else n)


def map_formula(f: Formula, fn) -> Formula:
    """Bottom-up rebuild: children first, then fn on the rebuilt node."""
    match f:
        case Rel() | Eq() | Prop():
            return fn(f)
        case Not(body=b):
            node = Not(map_formula(b, fn))
        case _Binary(left=l, right=r):
            node = type(f)(map_formula(l, fn), map_formula(r, fn))
        case _Quant(var=v, body=b):
            node = type(f)(v, map_formula(b, fn))
        case CountExists(k=k, var=v, body=b):
            node = CountExists(k, v, map_formula(b, fn))
        case Diamond(body=b):
            node = Diamond(map_formula(b, fn))
        case MinorModal(qname=q, body=b):
            node = MinorModal(q, map_formula(b, fn))
        case MinorQuant(qname=q, var=v, body=b):
            node = MinorQuant(q, v, map_formula(b, fn))
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return fn(node)


def quantifier_positions(f: Formula) -> int:
    return sum(1 for n in walk(f) if isinstance(n, (Exists, Const)))


def swap_quantifiers(f: Formula, mask: int) -> Formula:
    """Swap E/C at the quantifier positions selected by mask (pre-order numbering)."""
    counter = iter(range(quantifier_positions(f)))

    def go(node: Formula) -> Formula:
        match node:
            case Exists(var=v, body=b) | Const(var=v, body=b):
                i = next(counter)
                cls = type(node)
                if mask >> i & 1:
                    cls = Const if cls is Exists else Exists
                return cls(v, go(b))
            case Rel() | Eq() | Prop():
                return node
            case Not(body=b):
                return Not(go(b))
            case _Binary(left=l, right=r):
                left = go(l)
                return type(node)(left, go(r))
            case CountExists(k=k, var=v, body=b):
                return CountExists(k, v, go(b))
            case Diamond(body=b):
                return Diamond(go(b))
            case MinorModal(qname=q, body=b):
                return MinorModal(q, go(b))
            case MinorQuant(qname=q, var=v, body=b):
                return MinorQuant(q, v, go(b))
        raise TypeError(f"not a formula: {node!r}")

    return go(f)
