"""Finite relational structures, interpretations and model sets.

A model set is a finite set of interpretations (structure plus assignment)
whose assignments share one domain of variables.  Everything here is
immutable; the rebinding operators return new model sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from msl.syntax import Signature


class ModelError(ValueError):
    pass


_EMPTY: frozenset = frozenset()


class Structure:
    """A finite relational structure over element ids (non-negative ints).

    Relations not mentioned are empty; a relation given as empty and a
    relation not given at all are the same structure.
    """

    __slots__ = ("domain", "elements", "_rels", "_hash", "_key")

    def __init__(
        self,
        domain: Iterable[int],
        relations: Mapping[str, Iterable] | None = None,
        signature: Optional[Mapping[str, int]] = None,
    ):
        dom = frozenset(domain)
        if not dom:
            raise ModelError("structure domain must be non-empty")
        if any(not isinstance(a, int) or a < 0 for a in dom):
            raise ModelError("domain elements must be non-negative integers")
        rels: dict[str, frozenset] = {}
        for name, tuples in (relations or {}).items():
            ts = frozenset(_as_tuple(t) for t in tuples)
            arity = signature.get(name) if signature is not None else None
            if signature is not None and arity is None:
                raise ModelError(f"relation {name!r} not in signature")
            for t in ts:
                if arity is not None and len(t) != arity:
                    raise ModelError(f"tuple {t} has length {len(t)}, {name!r} has arity {arity}")
                if not set(t) <= dom:
                    raise ModelError(f"tuple {t} of {name!r} leaves the domain")
            if ts:
                rels[name] = ts
        if signature is None:
            for name, ts in rels.items():
                if len({len(t) for t in ts}) > 1:
                    raise ModelError(f"relation {name!r} mixes tuple lengths")
        self.domain = dom
        self.elements = tuple(sorted(dom))
        self._rels = rels
        self._hash = hash((dom, frozenset(rels.items())))
        self._key = None

    def rel(self, name: str) -> frozenset:
        return self._rels.get(name, _EMPTY)

    @property
    def relations(self) -> dict[str, frozenset]:
        return dict(self._rels)

    def with_relation(self, name: str, tuples: Iterable) -> "Structure":
        rels = dict(self._rels)
        rels[name] = frozenset(_as_tuple(t) for t in tuples)
        return Structure(self.domain, rels)

    def without_relation(self, name: str) -> "Structure":
        rels = {n: ts for n, ts in self._rels.items() if n != name}
        return Structure(self.domain, rels)

    def sort_key(self):
        if self._key is None:
            self._key = (self.elements, tuple((n, tuple(sorted(self._rels[n]))) for n in sorted(self._rels)))
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Structure):
            return NotImplemented
        return self._hash == other._hash and self.domain == other.domain and self._rels == other._rels

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        rels = ", ".join(f"{n}={sorted(self._rels[n])}" for n in sorted(self._rels))
        return f"Structure({list(self.elements)}{', ' + rels if rels else ''})"


def _as_tuple(t) -> tuple:
    if isinstance(t, int):
        return (t,)
    return tuple(t)


class Interpretation:
    """A pair (structure, assignment)."""

    __slots__ = ("structure", "assignment", "env", "_hash")

    def __init__(self, structure: Structure, assignment: Mapping[str, int] | None = None):
        env = dict(assignment or {})
        for var, a in env.items():
            if a not in structure.domain:
                raise ModelError(f"assignment {var}->{a} leaves the domain {sorted(structure.domain)}")
        self.structure = structure
        self.assignment = tuple(sorted(env.items()))
        # read-only by convention; evaluators index it directly
        self.env = env
        self._hash = hash((structure, self.assignment))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.env)

    def bind(self, var: str, value: int) -> "Interpretation":
        """f[value/var]: modify or extend the assignment."""
        env = dict(self.env)
        env[var] = value
        return Interpretation(self.structure, env)

    def sort_key(self):
        return (self.structure.sort_key(), self.assignment)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Interpretation):
            return NotImplemented
        return self._hash == other._hash and self.assignment == other.assignment and self.structure == other.structure

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        env = ", ".join(f"{v}={a}" for v, a in self.assignment)
        return f"Interpretation({self.structure!r}, {{{env}}})"


class ModelSet:
    """A finite set of interpretations sharing one assignment domain."""

    __slots__ = ("members", "variables", "_ordered", "_hash")

    def __init__(self, members: Iterable[Interpretation] = (), variables: Optional[Iterable[str]] = None):
        ms = frozenset(members)
        if variables is None:
            doms = {m.variables for m in ms}
            if len(doms) > 1:
                raise ModelError("members disagree on the assignment domain")
            vs = doms.pop() if doms else frozenset()
        else:
            vs = frozenset(variables)
            for m in ms:
                if m.variables != vs:
                    raise ModelError(f"member assigns {sorted(m.variables)}, model set declares {sorted(vs)}")
        self.members = ms
        self.variables = vs
        self._ordered: Optional[tuple[Interpretation, ...]] = None
        self._hash = hash(ms)

    @classmethod
    def of_structures(cls, structures: Iterable[Structure]) -> "ModelSet":
        return cls((Interpretation(s) for s in structures), ())

    def ordered(self) -> tuple[Interpretation, ...]:
        """Members in canonical order; choice functions index into this."""
        if self._ordered is None:
            self._ordered = tuple(sorted(self.members, key=Interpretation.sort_key))
        return self._ordered

    def __iter__(self) -> Iterator[Interpretation]:
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __contains__(self, item) -> bool:
        return item in self.members

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        return self.members == other.members and self.variables == other.variables

    def __hash__(self) -> int:
        return self._hash

    def __or__(self, other: "ModelSet") -> "ModelSet":
        if self and other and self.variables != other.variables:
            raise ModelError("model sets disagree on the assignment domain")
        return ModelSet(self.members | other.members, self.variables if self else other.variables)

    def __repr__(self) -> str:
        return f"ModelSet({list(self.ordered())!r})"

    def subset(self, members: Iterable[Interpretation]) -> "ModelSet":
        return ModelSet(members, self.variables)

    def structures(self) -> frozenset[Structure]:
        return frozenset(m.structure for m in self.members)


@dataclass(frozen=True)
class ChoiceFunction:
    """Values aligned with ``ModelSet.ordered()``: member i is sent to values[i]."""

    values: tuple[int, ...]
    constant: bool = False

    def __call__(self, index: int) -> int:
        return self.values[index]


def common_domain(ms: ModelSet) -> frozenset[int]:
    """Intersection of the member domains; the empty model set gets the empty set."""
    if not ms:
        return frozenset()
    return frozenset.intersection(*(m.structure.domain for m in ms.members))


def extend_choice(ms: ModelSet, choice: ChoiceFunction, var: str) -> ModelSet:
    """M[F/x]."""
    members = ms.ordered()
    if len(choice.values) != len(members):
        raise ModelError(f"choice function covers {len(choice.values)} of {len(members)} members")
    if choice.constant and members and len(set(choice.values)) > 1:
        raise ModelError("constant choice function with differing values")
    out = []
    for m, a in zip(members, choice.values):
        if a not in m.structure.domain:
            raise ModelError(f"choice {a} outside member domain {sorted(m.structure.domain)}")
        out.append(m.bind(var, a))
    return ModelSet(out, ms.variables | {var})


def extend_all(ms: ModelSet, var: str) -> ModelSet:
    """M[T/x]: every member paired with every element of its own domain."""
    return ModelSet((m.bind(var, a) for m in ms.members for a in m.structure.elements), ms.variables | {var})


def extend_set(ms: ModelSet, elements: Iterable[int], var: str) -> ModelSet:
    """M[A/x] for A a subset of the common domain."""
    chosen = frozenset(elements)
    if not chosen <= common_domain(ms):
        raise ModelError(f"{sorted(chosen - common_domain(ms))} not in the common domain")
    return ModelSet((m.bind(var, a) for m in ms.members for a in chosen), ms.variables | {var})


def add_domain_predicate(ms: ModelSet, name: str) -> ModelSet:
    """M_D: every structure gains the unary relation ``name`` = common domain."""
    for m in ms.members:
        if name in m.structure.relations:
            raise ModelError(f"relation {name!r} already interpreted")
    cd = common_domain(ms)
    return ModelSet(
        (Interpretation(m.structure.with_relation(name, cd), m.env) for m in ms.members),
        ms.variables,
    )


def enumerate_choice_functions(ms: ModelSet, constant_only: bool = False) -> Iterator[ChoiceFunction]:
    members = ms.ordered()
    if constant_only:
        if not members:
            # the empty function is constant for the empty model set only
            yield ChoiceFunction((), True)
            return
        for c in sorted(common_domain(ms)):
            yield ChoiceFunction((c,) * len(members), True)
        return
    for values in itertools.product(*(m.structure.elements for m in members)):
        yield ChoiceFunction(values, False)


def count_choice_functions(ms: ModelSet) -> int:
    n = 1
    for m in ms.members:
        n *= len(m.structure.domain)
    return n


def all_structures(sig: Mapping[str, int], domain: Iterable[int]) -> Iterator[Structure]:
    """Every interpretation of sig over the given domain (labelled, no quotienting)."""
    elements = tuple(sorted(domain))
    names = sorted(sig)
    spaces = [list(itertools.product(elements, repeat=sig[n])) for n in names]
    total_bits = sum(len(s) for s in spaces)
    signature = Signature({n: sig[n] for n in names})
    for mask in range(1 << total_bits):
        rels = {}
        shift = 0
        for name, space in zip(names, spaces):
            rels[name] = [t for i, t in enumerate(space) if mask >> (shift + i) & 1]
            shift += len(space)
        yield Structure(elements, rels, signature)
