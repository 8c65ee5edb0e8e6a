"""Minor quantifiers: signed acceptance classes for a unary generalized quantifier.

A minor quantifier pairs an acceptance class for the positive verdict with
one for the negative verdict.  Both are predicates on (|A|, |B+|, |B-|), so
closure under isomorphism is automatic.  The classical base quantifier U is
a predicate on (|A|, |H|).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

Accept = Callable[[int, int, int], bool]
Base = Callable[[int, int], bool]


@dataclass(frozen=True)
class MinorQuantifier:
    name: str
    accept_pos: Accept
    accept_neg: Accept
    base: Base

    def complement_base(self) -> Base:
        return lambda n, h: not self.base(n, h)


MINOR_EXISTS = MinorQuantifier(
    "exists",
    accept_pos=lambda n, s, t: s >= 1,
    accept_neg=lambda n, s, t: s == 0 and t == n,
    base=lambda n, h: h >= 1,
)

MINOR_FORALL = MinorQuantifier(
    "forall",
    accept_pos=lambda n, s, t: s == n,
    accept_neg=lambda n, s, t: t >= 1,
    base=lambda n, h: h == n,
)

# "more than half": positive needs a strict majority of verified instances,
# negative needs at least half refuted (then no majority can exist).
MAJORITY = MinorQuantifier(
    "most",
    accept_pos=lambda n, s, t: 2 * s > n,
    accept_neg=lambda n, s, t: 2 * t >= n,
    base=lambda n, h: 2 * h > n,
)

ALWAYS_ACCEPT = MinorQuantifier(
    "always",
    accept_pos=lambda n, s, t: True,
    accept_neg=lambda n, s, t: True,
    base=lambda n, h: h >= 1,
)

BUILTINS: dict[str, MinorQuantifier] = {q.name: q for q in (MINOR_EXISTS, MINOR_FORALL, MAJORITY)}


def admissible_sizes(positive: int, negative: int, both: int) -> Iterator[tuple[int, int]]:
    """Sizes (s, t) of disjoint B+ and B- drawable from the verified and refuted items.

    ``positive`` items are verified only, ``negative`` refuted only and
    ``both`` are both; each of the latter can go to at most one side.
    """
    for s in range(positive + both + 1):
        for t in range(negative + both + 1):
            if max(0, s - positive) + max(0, t - negative) <= both:
                yield s, t


def accepts(accept: Accept, n: int, verified: set, refuted: set) -> bool:
    both = len(verified & refuted)
    return any(
        accept(n, s, t)
        for s, t in admissible_sizes(len(verified) - both, len(refuted) - both, both)
    )


def _witnesses(accept: Accept, base: Base, n: int) -> list[str]:
    """Violations of the three witnessing conditions at domain size n."""
    problems = []
    in_base = [h for h in range(n + 1) if base(n, h)]
    outside = [h for h in range(n + 1) if not base(n, h)]
    for s in range(n + 1):
        for t in range(n + 1 - s):
            if not accept(n, s, t):
                continue
            # a set H with B+ <= H and B- disjoint from H has s <= |H| <= n - t
            if not any(s <= h <= n - t for h in in_base):
                problems.append(f"n={n} (s={s}, t={t}) accepted but no base set contains it")
            if any(s <= h <= n - t for h in outside):
                problems.append(f"n={n} (s={s}, t={t}) accepted but compatible with a rejected set")
    for h in in_base:
        if not any(accept(n, s, t) for s in range(h + 1) for t in range(n - h + 1)):
            problems.append(f"n={n} base set of size {h} has no accepted witness")
    return problems


def witness_violations(q: MinorQuantifier, base: Base, max_size: int) -> list[str]:
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    complement = lambda n, h: not base(n, h)
    out = []
    for n in range(1, max_size + 1):
        out += [f"positive: {p}" for p in _witnesses(q.accept_pos, base, n)]
        out += [f"negative: {p}" for p in _witnesses(q.accept_neg, complement, n)]
    return out


def witness_check(q: MinorQuantifier, base: Base, max_size: int) -> bool:
    """Whether accept_pos witnesses ``base`` and accept_neg its complement, for
    every domain size up to max_size."""
    return not witness_violations(q, base, max_size)
