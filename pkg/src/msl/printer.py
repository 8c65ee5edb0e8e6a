"""ASCII printer producing text that ``parse`` reads back to the same AST."""

from __future__ import annotations

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
)

_BINOPS = {And: "&", Or: "|", Impl: "->", FilterImpl: "=>"}


def to_text(f: Formula) -> str:
    match f:
        case Rel(name=n, args=args):
            return f"{n}({','.join(args)})"
        case Eq(left=a, right=b):
            return f"{a}={b}"
        case Prop(name=n):
            return n
        # ~E x.~ and ~<>~ print as their sugar; both re-parse to the same nodes
        case Not(body=Exists(var=v, body=Not(body=b))):
            return f"A {v}. {to_text(b)}"
        case Not(body=Diamond(body=Not(body=b))):
            return f"[]{to_text(b)}"
        case Not(body=b):
            return "~" + to_text(b)
        case Exists(var=v, body=b):
            return f"E {v}. {to_text(b)}"
        case Const(var=v, body=b):
            return f"C {v}. {to_text(b)}"
        case CountExists(k=k, var=v, body=b):
            return f"E={k} {v}. {to_text(b)}"
        case Diamond(body=b):
            return "<>" + to_text(b)
        case MinorModal(qname=q, body=b):
            return f"<Q:{q}>{to_text(b)}"
        case MinorQuant(qname=q, var=v, body=b):
            return f"Q:{q} {v}. {to_text(b)}"
    op = _BINOPS.get(type(f))
    if op is None:
        raise TypeError(f"not a formula: {f!r}")
    return f"({to_text(f.left)} {op} {to_text(f.right)})"


_UNICODE_BINOPS = {And: "∧", Or: "∨", Impl: "→", FilterImpl: "⇒"}


def to_unicode(f: Formula) -> str:
    """Human-oriented rendering; not parseable."""
    match f:
        case Rel(name=n, args=args):
            return n + "".join(args)
        case Eq(left=a, right=b):
            return f"{a}={b}"
        case Prop(name=n):
            return n
        case Not(body=Exists(var=v, body=Not(body=b))):
            return f"∀{v}{to_unicode(b)}"
        case Not(body=b):
            return "¬" + to_unicode(b)
        case Exists(var=v, body=b):
            return f"∃{v}{to_unicode(b)}"
        case Const(var=v, body=b):
            return f"C{v}{to_unicode(b)}"
        case CountExists(k=k, var=v, body=b):
            return f"∃^={k}{v}{to_unicode(b)}"
        case Diamond(body=b):
            return "◇" + to_unicode(b)
        case MinorModal(qname=q, body=b):
            return f"⟨{q}⟩{to_unicode(b)}"
        case MinorQuant(qname=q, var=v, body=b):
            return f"{q}{v}{to_unicode(b)}"
    return f"({to_unicode(f.left)}{_UNICODE_BINOPS[type(f)]}{to_unicode(f.right)})"
