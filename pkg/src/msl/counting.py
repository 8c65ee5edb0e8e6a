"""Labelled model counting and two closed-form enumeration formulas.

Two independent brute-force oracles are provided: one enumerates every
relation interpretation on {0..n-1}, the other enumerates functions n -> n
directly.  All arithmetic is on Python integers.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb, factorial
from typing import Optional

from msl.enumeration import RelationSpace
from msl.fo import compile_fo
from msl.models import ModelSet
from msl.parser import parse
from msl.syntax import Formula, Fragment, classify, free_vars, signature_of

DEFAULT_MAX_BITS = 20
DEFAULT_FUNCTION_CAP = 7

PHI_SYM = parse("A x. A y. (R(x,y) -> R(y,x))")
PHI_AI = parse("(A x. A y. ~(R(x,y) & R(y,x)) & A x. E=1 y. R(x,y))")


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class CountReport:
    n: int
    brute_count: int
    closed_form: Optional[int] = None

    @property
    def match(self) -> Optional[bool]:
        if self.closed_form is None:
            return None
        return self.brute_count == self.closed_form

    def tsv(self) -> str:
        closed = "" if self.closed_form is None else str(self.closed_form)
        match = "" if self.match is None else str(self.match).lower()
        return f"{self.n}\t{self.brute_count}\t{closed}\t{match}"


def _count_range(f: Formula, n: int, start: int, stop: int) -> int:
    check = compile_fo(f)
    space = RelationSpace(signature_of(f), n)
    return sum(1 for mask in range(start, stop) if check(space.structure(mask), {}))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MSL_THREADS", "1")))
    except ValueError:
        return 1


def count_models(f: Formula, n: int, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Number of labelled structures on {0..n-1} satisfying the sentence f."""
    if Fragment.FO not in classify(f):
        raise CountingError("counting expects a first-order sentence")
    if free_vars(f):
        raise CountingError(f"counting expects a sentence; free: {sorted(free_vars(f))}")
    if n < 1:
        raise CountingError("n must be at least 1")
    space = RelationSpace(signature_of(f), n)
    if space.bits > max_bits:
        raise CountingError(f"{space.bits} relation bits at n={n} exceeds the cap of {max_bits}")
    total = len(space)
    workers = min(_workers(), total)
    if workers <= 1 or total < 4096:
        return _count_range(f, n, 0, total)
    bounds = [total * i // workers for i in range(workers + 1)]
    with ProcessPoolExecutor(workers) as pool:
        parts = pool.map(_count_range, [f] * workers, [n] * workers, bounds[:-1], bounds[1:])
        return sum(parts)


def model_set_of(f: Formula, n: int, max_bits: int = DEFAULT_MAX_BITS) -> ModelSet:
    """All labelled structures on {0..n-1} satisfying f, as a model set."""
    if free_vars(f):
        raise CountingError("model_set_of expects a sentence")
    space = RelationSpace(signature_of(f), n)
    if space.bits > max_bits:
        raise CountingError(f"{space.bits} relation bits at n={n} exceeds the cap of {max_bits}")
    check = compile_fo(f)
    return ModelSet.of_structures(s.freeze() for s in space if check(s, {}))


def closed_form_symmetric(n: int) -> int:
    if n < 1:
        raise CountingError("n must be at least 1")
    return 2 ** (comb(n, 2) + n)


def closed_form_anti_involutive(n: int) -> int:
    """Inclusion-exclusion over the 2i points forced onto i two-cycles.

    The factor (2i)!/(2^i i!) counts perfect matchings of 2i points; the
    remaining n-2i points each avoid being fixed, (n-1) choices.
    The i = n/2 term relies on 0**0 == 1.
    """
    if n < 1:
        raise CountingError("n must be at least 1")
    total = 0
    for i in range(n // 2 + 1):
        matchings = factorial(2 * i) // (2**i * factorial(i))
        total += (-1) ** i * (n - 1) ** (n - 2 * i) * comb(n, 2 * i) * matchings
    return total


def count_functions_anti_involutive(n: int, cap: int = DEFAULT_FUNCTION_CAP) -> int:
    """Brute force over all n**n functions: those with f(f(x)) != x everywhere."""
    if n < 1:
        raise CountingError("n must be at least 1")
    if n > cap:
        raise CountingError(f"n={n} exceeds the function-space cap of {cap}")
    points = range(n)
    return sum(1 for f in itertools.product(points, repeat=n) if all(f[f[x]] != x for x in points))


def count_report(f: Formula, n: int, closed: Optional[str] = None, max_bits: int = DEFAULT_MAX_BITS) -> CountReport:
    forms = {"sym": closed_form_symmetric, "anti-involutive": closed_form_anti_involutive}
    if closed is not None and closed not in forms:
        raise CountingError(f"unknown closed form {closed!r}; choose from {sorted(forms)}")
    brute = count_models(f, n, max_bits)
    return CountReport(n, brute, forms[closed](n) if closed else None)

