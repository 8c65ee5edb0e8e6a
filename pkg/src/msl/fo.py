"""Classical (Tarskian) evaluation of first-order formulas.

Formulas are compiled once into nested closures taking ``(structure, env)``;
``env`` is a mutable dict that quantifier closures rebind and restore.
Any object with ``elements`` (sorted tuple) and ``rel(name)`` works as the
structure, which the counting module exploits.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from msl.syntax import (
    And,
    Const,
    CountExists,
    Eq,
    Exists,
    FilterImpl,
    Formula,
    Impl,
    MinorQuant,
    Not,
    Or,
    Prop,
    POINT_VAR,
    Rel,
    free_vars,
)

Compiled = Callable[[object, dict], bool]

_MISSING = object()


class EvaluationError(ValueError):
    pass


class UnboundVariable(EvaluationError):
    pass


def _quantifier(var: str, body: Compiled, decide) -> Compiled:
    def f(s, env):
        old = env.get(var, _MISSING)
        try:
            return decide(s, env, var, body)
        finally:
            if old is _MISSING:
                env.pop(var, None)
            else:
                env[var] = old

    return f


def _some(s, env, var, body):
    for a in s.elements:
        env[var] = a
        if body(s, env):
            return True
    return False


def _compile(f: Formula, minor_bases) -> Compiled:
    match f:
        case Rel(name=name, args=(a,)):
            return lambda s, env: (env[a],) in s.rel(name)
        case Rel(name=name, args=(a, b)):
            return lambda s, env: (env[a], env[b]) in s.rel(name)
        case Rel(name=name, args=args):
            return lambda s, env: tuple(env[v] for v in args) in s.rel(name)
        case Prop(name=name):
            return lambda s, env: (env[POINT_VAR],) in s.rel(name)
        case Eq(left=a, right=b):
            return lambda s, env: env[a] == env[b]
        case Not(body=b):
            inner = _compile(b, minor_bases)
            return lambda s, env: not inner(s, env)
        case And(left=l, right=r):
            cl, cr = _compile(l, minor_bases), _compile(r, minor_bases)
            return lambda s, env: cl(s, env) and cr(s, env)
        case Or(left=l, right=r):
            cl, cr = _compile(l, minor_bases), _compile(r, minor_bases)
            return lambda s, env: cl(s, env) or cr(s, env)
        case Impl(left=l, right=r):
            cl, cr = _compile(l, minor_bases), _compile(r, minor_bases)
            return lambda s, env: (not cl(s, env)) or cr(s, env)
        case FilterImpl(left=l, right=r) if minor_bases is not None:
            # on a single pointed model the filter reading of => is material
            cl, cr = _compile(l, minor_bases), _compile(r, minor_bases)
            return lambda s, env: (not cl(s, env)) or cr(s, env)
        case Exists(var=v, body=b):
            return _quantifier(v, _compile(b, minor_bases), _some)
        case CountExists(k=k, var=v, body=b):

            def exactly(s, env, var, body, k=k):
                hits = 0
                for a in s.elements:
                    env[var] = a
                    if body(s, env):
                        hits += 1
                        if hits > k:
                            return False
                return hits == k

            return _quantifier(v, _compile(b, minor_bases), exactly)
        case MinorQuant(qname=q, var=v, body=b):
            if minor_bases is None or q not in minor_bases:
                raise EvaluationError(f"no classical reading for minor quantifier {q!r}")
            base = minor_bases[q]

            def generalized(s, env, var, body, base=base):
                hits = 0
                for a in s.elements:
                    env[var] = a
                    hits += bool(body(s, env))
                return base(len(s.elements), hits)

            return _quantifier(v, _compile(b, minor_bases), generalized)
        case Const():
            raise EvaluationError("C x is not first-order; evaluate it on a model set")
    raise EvaluationError(f"{type(f).__name__} has no classical first-order reading")


@lru_cache(maxsize=4096)
def compile_fo(f: Formula) -> Compiled:
    return _compile(f, None)


def compile_leaf(f: Formula, minor_bases) -> Compiled:
    """Rank-0 formulas at a pointed model: also admits => and minor quantifiers."""
    return _compile(f, minor_bases)


def eval_fo(interp, f: Formula) -> bool:
    """(M, f) |=_FO phi, with exactly-k quantifiers."""
    missing = free_vars(f) - interp.env.keys()
    if missing:
        raise UnboundVariable(f"unbound variable(s) {sorted(missing)}")
    return compile_fo(f)(interp.structure, dict(interp.env))
