"""A fixed corpus of L_C sentences over one unary and one binary relation.

Some are valid, some satisfiable only on larger domains, some unsatisfiable.
"""

from __future__ import annotations

from msl.parser import parse
from msl.syntax import Formula, Signature

CORPUS_SIG = Signature({"P": 1, "R": 2})

LC_SENTENCES: tuple[str, ...] = (
    "C x. x=x",
    "C x. P(x)",
    "C x. ~P(x)",
    "C x. R(x,x)",
    "C x. C y. R(x,y)",
    "C x. C y. (R(x,y) & ~(x=y))",
    "C x. E y. R(x,y)",
    "E x. C y. R(x,y)",
    "C x. (P(x) & ~R(x,x))",
    "C x. (P(x) & ~P(x))",
    "C x. ~(x=x)",
    "C x. A y. R(x,y)",
    "C x. A y. (R(x,y) -> P(y))",
    "C x. (P(x) & E y. (R(x,y) & ~P(y)))",
    "(C x. P(x) & C y. ~P(y))",
    "(C x. P(x) & A y. ~P(y))",
    "C x. C y. (R(x,y) & ~R(y,x))",
    "C x. (R(x,x) & A y. ~R(y,x))",
    "C x. E y. (R(x,y) & (R(y,x) & ~(x=y)))",
    "(A x. E y. R(x,y) & C x. ~E y. R(y,x))",
    "C x. C y. (~(x=y) & (P(x) & P(y)))",
    "C x. (~P(x) & A y. (P(y) | y=x))",
    "C x. E y. ~(x=y)",
    "C x. (A y. x=y)",
    "(C x. R(x,x) & A x. ~R(x,x))",
    "C x. ~E y. R(x,y)",
    "C x. C y. (R(x,y) & A x. (R(x,y) -> x=y))",
    "(E x. P(x) & C x. (P(x) & ~P(x)))",
    "C x. E y. (R(y,x) & (~P(y) & P(x)))",
    "C x. (P(x) -> R(x,x))",
)


def corpus() -> list[Formula]:
    return [parse(s, CORPUS_SIG) for s in LC_SENTENCES]
