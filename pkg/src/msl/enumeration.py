"""Exhaustive enumeration of labelled structures over {0..n-1}.

The hot loops of counting and bounded search only need ``elements`` and
``rel(name)``, so they run on a light stand-in and convert to a validated
``Structure`` only when a witness is reported.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from msl.models import Structure

_EMPTY: frozenset = frozenset()


class LightStructure:
    __slots__ = ("elements", "rels")

    def __init__(self, elements: tuple[int, ...], rels: dict[str, frozenset]):
        self.elements = elements
        self.rels = rels

    def rel(self, name: str) -> frozenset:
        return self.rels.get(name, _EMPTY)

    def freeze(self) -> Structure:
        return Structure(self.elements, self.rels)


CHUNK = 12


class RelationSpace:
    """All interpretations of ``sig`` on {0..n-1}, indexed by a bitmask."""

    def __init__(self, sig: Mapping[str, int], n: int):
        if n < 1:
            raise ValueError("domain size must be at least 1")
        self.n = n
        self.elements = tuple(range(n))
        self.names = sorted(sig)
        self.spaces = [list(itertools.product(self.elements, repeat=sig[name])) for name in self.names]
        self.bits = sum(len(s) for s in self.spaces)
        self._tables: list | None = None

    @staticmethod
    def _subsets(space: list[tuple]) -> list[frozenset]:
        table = [frozenset()]
        for t in space:
            table = table + [s | {t} for s in table]
        return table

    def _chunks(self) -> list:
        """Per relation, (width, subset table) pieces of at most CHUNK bits, built on first use."""
        if self._tables is None:
            self._tables = [
                [(len(space[k:k + CHUNK]), self._subsets(space[k:k + CHUNK])) for k in range(0, len(space), CHUNK)]
                for space in self.spaces
            ]
        return self._tables

    def __len__(self) -> int:
        return 1 << self.bits

    def structure(self, mask: int) -> LightStructure:
        rels = {}
        for name, pieces in zip(self.names, self._chunks()):
            found = frozenset()
            for width, table in pieces:
                found |= table[mask & ((1 << width) - 1)]
                mask >>= width
            rels[name] = found
        return LightStructure(self.elements, rels)

    def __iter__(self) -> Iterator[LightStructure]:
        for mask in range(len(self)):
            yield self.structure(mask)
