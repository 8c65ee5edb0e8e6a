"""Weighted properties of a universe model set.

A property is a subset of the universe, given by member ids (positions in
the universe's canonical order).  Weights are exact rationals and an
aggregator folds the multiset of weights of a set of properties into one
value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from msl.models import ModelSet


class WeightError(ValueError):
    pass


def _count_positive(ws: Sequence[Fraction]) -> Fraction:
    return Fraction(sum(1 for w in ws if w > 0))


def _min(ws: Sequence[Fraction]) -> Fraction:
    if not ws:
        raise WeightError("min of an empty multiset is undefined")
    return min(ws)


def _max(ws: Sequence[Fraction]) -> Fraction:
    if not ws:
        raise WeightError("max of an empty multiset is undefined")
    return max(ws)


AGGREGATORS: dict[str, Callable[[Sequence[Fraction]], Fraction]] = {
    "sum": lambda ws: sum(ws, Fraction(0)),
    "min": _min,
    "max": _max,
    "count-positive": _count_positive,
}


@dataclass(frozen=True)
class Property:
    name: str
    members: frozenset[int]


@dataclass
class WeightedUniverse:
    universe: ModelSet
    properties: dict[str, Property] = field(default_factory=dict)
    weights: dict[str, Fraction] = field(default_factory=dict)
    aggregator: str = "sum"
    threshold: Fraction = Fraction(0)

    def __post_init__(self):
        if self.aggregator not in AGGREGATORS:
            raise WeightError(f"unknown aggregator {self.aggregator!r}; choose from {sorted(AGGREGATORS)}")

    def add(self, name: str, members: Iterable[int], weight) -> Property:
        ids = frozenset(members)
        bad = sorted(i for i in ids if not 0 <= i < len(self.universe))
        if bad:
            raise WeightError(f"property {name!r} names members {bad} outside the universe of size {len(self.universe)}")
        if name in self.properties:
            raise WeightError(f"property {name!r} defined twice")
        prop = Property(name, ids)
        self.properties[name] = prop
        self.weights[name] = Fraction(weight)
        return prop

    def weight(self, name: str) -> Fraction:
        try:
            return self.weights[name]
        except KeyError:
            raise WeightError(f"unknown property {name!r}") from None

    def weight_of_set(self, members: frozenset[int]) -> Fraction:
        """Weight of whichever property has exactly these members."""
        found = {self.weights[p.name] for p in self.properties.values() if p.members == members}
        if not found:
            raise WeightError(f"no weighted property has members {sorted(members)}")
        if len(found) > 1:
            raise WeightError(f"properties with members {sorted(members)} carry different weights")
        return found.pop()

    def truth(self, value: Fraction) -> bool:
        return value >= self.threshold


def value_of(wu: WeightedUniverse, names: Iterable[str]) -> Fraction:
    """Aggregate the weights of a set of properties (repeated names count once)."""
    ws = [wu.weight(n) for n in sorted(set(names))]
    return AGGREGATORS[wu.aggregator](ws)


def full_value(wu: WeightedUniverse) -> Fraction:
    return value_of(wu, wu.properties)


def intersect_then_weigh(wu: WeightedUniverse, names: Iterable[str]) -> Fraction:
    """Weight of the intersection of the named properties."""
    chosen = sorted(set(names))
    if not chosen:
        raise WeightError("intersection of no properties")
    for n in chosen:
        wu.weight(n)  # unknown names raise here
    common = frozenset.intersection(*(wu.properties[n].members for n in chosen))
    return wu.weight_of_set(common)


def build(universe: ModelSet, rows: Iterable[tuple[str, Iterable[int], object]], aggregator: str = "sum") -> WeightedUniverse:
    wu = WeightedUniverse(universe, aggregator=aggregator)
    for name, members, weight in rows:
        wu.add(name, members, weight)
    return wu

