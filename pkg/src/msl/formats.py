"""Text formats for model sets, perspectives, weight tables and systems.

Model sets::

    sig R/2 P/1            # optional; checks names and arities
    vars x y               # optional; otherwise taken from the members
    model { domain 0 1 2; R = (0,1) (1,2); P = 0 2; assign x=0 y=1 }

Perspectives nest ``persp { ... }`` blocks around model blocks; inside a
perspective ``point w`` abbreviates ``assign x=w``::

    persp { persp { model { domain 0 1; p = 0; point 0 } } }

Systems::

    agents a b; actions L R;
    state s0 = model { domain 0; P = 0 };
    F(s0, L, *) = {s1};     # * matches any action
    strategy a: s0 -> L, s1 -> R;
    G default;              # or an explicit row:  G s0:L,R s1:R,R -> s0;

Weight tables are tab separated: ``name  member-ids  weight`` where ids
are comma separated positions in the universe and weights are rationals.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from msl.models import Interpretation, ModelError, ModelSet, Structure
from msl.perspectives import Perspective
from msl.syntax import POINT_VAR, Signature
from msl.systems import SystemDefinitionError, SystemFrame, System, build_base
from msl.weights import WeightError, WeightedUniverse


class FormatError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0, source: str = "<input>"):
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{source}:{self.line}:{self.column}: {message}")


_TOKEN_RE = re.compile(r"(?P<ws>\s+|\#[^\n]*)|(?P<arrow>->)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}(),;=:*/])")


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


class _Reader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.toks: list[_Tok] = []
        self.i = 0
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                self.fail(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                self.toks.append(_Tok(kind, m.group(), pos))
            pos = m.end()
        self.toks.append(_Tok("eof", "", len(text)))

    def fail(self, message: str, pos: Optional[int] = None):
        raise FormatError(message, self.text, self.peek().pos if pos is None else pos, self.source)

    def peek(self, offset: int = 0) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i = min(self.i + 1, len(self.toks) - 1)
        return tok

    def at(self, value: str) -> bool:
        return self.peek().value == value and self.peek().kind != "eof"

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value: str) -> _Tok:
        tok = self.peek()
        if tok.value != value or tok.kind == "eof":
            self.fail(f"expected {value!r}, found {tok.value or 'end of input'!r}")
        return self.next()

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail(f"expected a name, found {tok.value or 'end of input'!r}")
        return self.next().value

    def number(self) -> int:
        tok = self.peek()
        if tok.kind != "num":
            self.fail(f"expected a number, found {tok.value or 'end of input'!r}")
        return int(self.next().value)

    def done(self) -> bool:
        return self.peek().kind == "eof"


# -- shared pieces ----------------------------------------------------------------


def _signature(r: _Reader) -> Optional[Signature]:
    if not r.at("sig"):
        return None
    r.next()
    arities = {}
    while r.peek().kind == "name" and r.peek(1).value == "/":
        name = r.name()
        r.expect("/")
        arities[name] = r.number()
    r.accept(";")
    return Signature(arities)


def _tuple(r: _Reader) -> tuple[int, ...]:
    if r.peek().kind == "num":
        return (r.number(),)
    r.expect("(")
    items = [r.number()]
    while r.accept(","):
        items.append(r.number())
    r.expect(")")
    return tuple(items)


def _model(r: _Reader, sig: Optional[Signature], pointed: bool) -> Interpretation:
    start = r.expect("model").pos
    r.expect("{")
    domain: Optional[list[int]] = None
    rels: dict[str, list[tuple[int, ...]]] = {}
    env: dict[str, int] = {}
    where: list[tuple[int, tuple[int, ...]]] = []
    while not r.at("}"):
        if r.done():
            r.fail("unterminated model block")
        tok = r.peek()
        if r.accept("domain"):
            domain = []
            while r.peek().kind == "num":
                domain.append(r.number())
        elif r.accept("assign"):
            while r.peek().kind == "name" and r.peek(1).value == "=":
                var = r.name()
                r.expect("=")
                env[var] = r.number()
        elif pointed and r.accept("point"):
            env[POINT_VAR] = r.number()
        else:
            name = r.name()
            r.expect("=")
            if name in rels:
                r.fail(f"relation {name!r} given twice", tok.pos)
            tuples = []
            while r.peek().kind == "num" or r.at("("):
                at = r.peek().pos
                tuples.append(_tuple(r))
                where.append((at, tuples[-1]))
            rels[name] = tuples
        if not r.accept(";") and not r.at("}"):
            r.fail("expected ';' or '}'")
    r.expect("}")
    if domain is None:
        r.fail("model block without a domain", start)
    for at, t in where:
        outside = [a for a in t if a not in domain]
        if outside:
            r.fail(f"element {outside[0]} is not in the domain", at)
    try:
        return Interpretation(Structure(domain, rels, sig), env)
    except ModelError as e:
        r.fail(str(e), start)


# -- model sets ---------------------------------------------------------------


def parse_model_set(text: str, source: str = "<input>") -> tuple[ModelSet, Optional[Signature]]:
    r = _Reader(text, source)
    sig = _signature(r)
    variables = None
    if r.accept("vars"):
        variables = []
        while r.peek().kind == "name":
            variables.append(r.name())
        r.accept(";")
    members = []
    while not r.done():
        pos = r.peek().pos
        members.append((pos, _model(r, sig, pointed=False)))
        r.accept(";")
    try:
        return ModelSet((m for _, m in members), variables), sig
    except ModelError as e:
        raise FormatError(str(e), text, members[0][0] if members else 0, source) from None


def format_model(m: Interpretation) -> str:
    s = m.structure
    parts = ["domain " + " ".join(map(str, s.elements))]
    for name in sorted(s.relations):
        tuples = sorted(s.rel(name))
        parts.append(f"{name} = " + " ".join(str(t[0]) if len(t) == 1 else "(" + ",".join(map(str, t)) + ")" for t in tuples))
    if m.assignment:
        parts.append("assign " + " ".join(f"{v}={a}" for v, a in m.assignment))
    return "model { " + "; ".join(parts) + " }"


def format_model_set(ms: ModelSet) -> str:
    lines = []
    if ms.variables:
        lines.append("vars " + " ".join(sorted(ms.variables)))
    lines.extend(format_model(m) for m in ms)
    return "\n".join(lines) + "\n"


# -- perspectives ---------------------------------------------------------------


def _persp(r: _Reader, sig) -> Perspective:
    start = r.expect("persp").pos
    r.expect("{")
    items: list = []
    while not r.at("}"):
        if r.done():
            r.fail("unterminated persp block")
        if r.at("model"):
            items.append(_model(r, sig, pointed=True))
        elif r.at("persp"):
            items.append(_persp(r, sig))
        else:
            r.fail(f"expected 'model' or 'persp', found {r.peek().value!r}")
        r.accept(";")
    r.expect("}")
    if not items:
        r.fail("empty perspective block", start)
    kinds = {isinstance(i, Interpretation) for i in items}
    if len(kinds) > 1:
        r.fail("a perspective mixes models and perspectives", start)
    if kinds == {True}:
        return Perspective(1, items)
    ranks = {p.rank for p in items}
    if len(ranks) > 1:
        r.fail(f"children of different ranks {sorted(ranks)}", start)
    return Perspective(ranks.pop() + 1, items)


def parse_perspective(text: str, source: str = "<input>") -> tuple[Perspective, Optional[Signature]]:
    r = _Reader(text, source)
    sig = _signature(r)
    p = _persp(r, sig)
    if not r.done():
        r.fail("trailing input after the perspective")
    return p, sig


# -- weights --------------------------------------------------------------------


def parse_weights(text: str, universe: ModelSet, aggregator: str = "sum", source: str = "<input>") -> WeightedUniverse:
    wu = WeightedUniverse(universe, aggregator=aggregator)
    offset = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        here = offset
        offset += len(line) + 1
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        cells = body.rstrip("\n").split("\t")
        if len(cells) != 3:
            raise FormatError(f"expected 3 tab-separated cells, found {len(cells)}", text, here, source)
        name, ids, weight = (c.strip() for c in cells)
        try:
            members = [int(i) for i in ids.split(",") if i.strip()]
            wu.add(name, members, Fraction(weight))
        except (ValueError, WeightError) as e:
            raise FormatError(str(e), text, here, source) from None
    return wu


# -- systems --------------------------------------------------------------------


def parse_system(text: str, source: str = "<input>") -> System:
    r = _Reader(text, source)
    sig = _signature(r)
    agents: list[str] = []
    actions: list[str] = []
    states: dict[str, Structure] = {}
    rows: list[tuple[int, str, list[str], list[str]]] = []
    strategies: dict[str, dict[str, str]] = {}
    table: dict[tuple, str] = {}
    while not r.done():
        tok = r.peek()
        key = r.name()
        if key == "agents":
            while r.peek().kind == "name":
                agents.append(r.name())
        elif key == "actions":
            while r.peek().kind == "name":
                actions.append(r.name())
        elif key == "state":
            name = r.name()
            r.expect("=")
            if name in states:
                r.fail(f"state {name!r} defined twice", tok.pos)
            states[name] = _model(r, sig, pointed=False).structure
        elif key == "F":
            r.expect("(")
            src = r.name()
            pattern = []
            while r.accept(","):
                pattern.append("*" if r.accept("*") else r.name())
            r.expect(")")
            r.expect("=")
            r.expect("{")
            targets = [r.name()]
            while r.accept(","):
                targets.append(r.name())
            r.expect("}")
            rows.append((tok.pos, src, pattern, targets))
        elif key == "strategy":
            agent = r.name()
            r.expect(":")
            strat = strategies.setdefault(agent, {})
            while True:
                s = r.name()
                r.expect("->")
                strat[s] = r.name()
                if not r.accept(","):
                    break
        elif key == "G":
            if not r.accept("default"):
                history = []
                while not r.at("->"):
                    s = r.name()
                    r.expect(":")
                    prof = [r.name()]
                    while r.accept(","):
                        prof.append(r.name())
                    history.append((s, tuple(prof)))
                r.expect("->")
                table[tuple(history)] = r.name()
        else:
            r.fail(f"unknown statement {key!r}", tok.pos)
        r.expect(";")
    transitions: dict = {}
    for pos, src, pattern, targets in rows:
        if src not in states:
            raise FormatError(f"unknown state {src!r}", text, pos, source)
        if len(pattern) != len(agents):
            raise FormatError(f"F row has {len(pattern)} actions for {len(agents)} agents", text, pos, source)
        for prof in itertools.product(actions, repeat=len(agents)):
            if all(p == "*" or p == a for p, a in zip(pattern, prof)):
                transitions.setdefault((src, prof), set()).update(targets)
    try:
        base = build_base(states, agents, actions, transitions)
        return System(SystemFrame(base, table=table), strategies)
    except SystemDefinitionError as e:
        raise FormatError(str(e), text, 0, source) from None
