"""Recursive-descent parser for the ASCII formula syntax.

    E x. φ    exists            A x. φ    for all (~E x.~φ)
    C x. φ    constant choice   E=k x. φ  exactly k
    ~ & | -> =>                 binary connectives need parentheses
    <> φ      diamond           [] φ      box (~<>~φ)
    <Q:name>φ minor modality    Q:name x. φ  minor quantifier
    R(x,y)    atom              x=y       equality        p  proposition
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from msl.syntax import (
    And,
    Const,
    CountExists,
    Diamond,
    Eq,
    Exists,
    FilterImpl,
    Formula,
    Impl,
    MinorModal,
    MinorQuant,
    Not,
    Or,
    Prop,
    Rel,
    Signature,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {self.line}, column {self.column}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<count>E=(?P<k>\d+))
  | (?P<mmodal><Q:(?P<mmname>[A-Za-z_][A-Za-z0-9_]*)>)
  | (?P<mquant>Q:(?P<mqname>[A-Za-z_][A-Za-z0-9_]*))
  | (?P<op><>|\[\]|->|=>|[~&|(),.=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group("ws") is not None:
            pass
        elif m.group("count") is not None:
            out.append(Token("count", m.group("k"), pos))
        elif m.group("mmodal") is not None:
            out.append(Token("mmodal", m.group("mmname"), pos))
        elif m.group("mquant") is not None:
            out.append(Token("mquant", m.group("mqname"), pos))
        elif m.group("op") is not None:
            out.append(Token(m.group("op"), m.group("op"), pos))
        else:
            out.append(Token("ident", m.group("ident"), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


_BINOPS = {"&": And, "|": Or, "->": Impl, "=>": FilterImpl}


class _Parser:
    def __init__(self, text: str, sig: Optional[Mapping[str, int]]):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        self.seen: dict[str, int] = {}

    def peek(self, offset: int = 0) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            shown = tok.value or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", self.text, tok.pos)
        return tok

    def error(self, message: str, tok: Token):
        raise ParseError(message, self.text, tok.pos)

    def check_relation(self, name: str, arity: int, tok: Token):
        if self.sig is not None:
            if name not in self.sig:
                self.error(f"unknown relation {name!r}", tok)
            if self.sig[name] != arity:
                self.error(f"arity mismatch: {name!r} has arity {self.sig[name]}, used with {arity}", tok)
        elif self.seen.setdefault(name, arity) != arity:
            self.error(f"arity mismatch: {name!r} used with arities {self.seen[name]} and {arity}", tok)

    def formula(self) -> Formula:
        tok = self.peek()
        start = tok.pos
        match tok.kind:
            case "~":
                self.next()
                return Not(self.formula(), span=(start, self.peek().pos))
            case "<>":
                self.next()
                return Diamond(self.formula(), span=(start, self.peek().pos))
            case "[]":
                self.next()
                body = self.formula()
                return Not(Diamond(Not(body)), span=(start, self.peek().pos))
            case "mmodal":
                self.next()
                return MinorModal(tok.value, self.formula(), span=(start, self.peek().pos))
            case "mquant":
                self.next()
                var = self.variable()
                self.expect(".")
                return MinorQuant(tok.value, var, self.formula(), span=(start, self.peek().pos))
            case "count":
                self.next()
                var = self.variable()
                self.expect(".")
                return CountExists(int(tok.value), var, self.formula(), span=(start, self.peek().pos))
            case "(":
                return self.parenthesised()
            case "ident":
                if tok.value in ("E", "A", "C") and self.peek(1).kind == "ident" and self.peek(2).kind == ".":
                    return self.quantifier()
                return self.atom()
        shown = tok.value or "end of input"
        self.error(f"unexpected {shown!r}", tok)

    def variable(self) -> str:
        return self.expect("ident").value

    def quantifier(self) -> Formula:
        tok = self.next()
        var = self.variable()
        self.expect(".")
        body = self.formula()
        span = (tok.pos, self.peek().pos)
        if tok.value == "E":
            return Exists(var, body, span=span)
        if tok.value == "C":
            return Const(var, body, span=span)
        return Not(Exists(var, Not(body)), span=span)

    def parenthesised(self) -> Formula:
        open_tok = self.expect("(")
        left = self.formula()
        op = self.peek()
        if op.kind == ")":
            self.next()
            return left
        cls = _BINOPS.get(op.kind)
        if cls is None:
            self.error(f"expected a binary connective or ')', found {op.value or 'end of input'!r}", op)
        self.next()
        right = self.formula()
        close = self.peek()
        if close.kind in _BINOPS:
            self.error("binary connectives need their own parentheses", close)
        self.expect(")")
        return cls(left, right, span=(open_tok.pos, close.pos + 1))

    def atom(self) -> Formula:
        tok = self.expect("ident")
        nxt = self.peek()
        if nxt.kind == "(":
            self.next()
            args = [self.variable()]
            while self.peek().kind == ",":
                self.next()
                args.append(self.variable())
            close = self.expect(")")
            self.check_relation(tok.value, len(args), tok)
            return Rel(tok.value, tuple(args), span=(tok.pos, close.pos + 1))
        if nxt.kind == "=":
            self.next()
            right = self.expect("ident")
            return Eq(tok.value, right.value, span=(tok.pos, right.pos + len(right.value)))
        self.check_relation(tok.value, 1, tok)
        return Prop(tok.value, span=(tok.pos, tok.pos + len(tok.value)))


def parse(text: str, sig: Optional[Mapping[str, int]] = None) -> Formula:
    """Parse one formula.  With a signature, relation names and arities are checked."""
    p = _Parser(text, sig)
    f = p.formula()
    tail = p.peek()
    if tail.kind != "eof":
        p.error(f"trailing input {tail.value!r}", tail)
    return f


def parse_signature(text: str) -> Signature:
    """``R/2 P/1`` (an optional leading ``sig`` keyword is accepted)."""
    items = text.split()
    if items and items[0] == "sig":
        items = items[1:]
    arities = {}
    for item in items:
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)/(\d+)", item)
        if not m:
            raise ParseError(f"bad signature entry {item!r}", text, max(text.find(item), 0))
        arities[m.group(1)] = int(m.group(2))
    return Signature(arities)
