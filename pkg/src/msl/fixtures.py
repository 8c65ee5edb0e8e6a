"""Small hand-built inputs shared by the golden checks, the suite and the tests."""

from __future__ import annotations

from msl.models import Interpretation, ModelSet, Structure
from msl.perspectives import Perspective
from msl.syntax import Signature
from msl.systems import System, SystemFrame, build_base

PQ = Signature({"p": 1, "q": 1})


def disjoint_model_set() -> ModelSet:
    """Two one-element members with disjoint domains, so the common domain is empty."""
    return ModelSet.of_structures([Structure([0]), Structure([1])])


def pointed(props=(), domain=(0,), point: int = 0, sig: Signature = PQ) -> Interpretation:
    """A pointed model whose listed propositions hold at the point."""
    return Interpretation(Structure(domain, {p: [(point,)] for p in props}, sig), {"x": point})


def even_odd() -> Perspective:
    """Two ways the world might be: x is even, or x is odd."""
    sig = Signature({"even": 1, "odd": 1})
    return Perspective(1, [pointed(["even"], sig=sig), pointed(["odd"], sig=sig)])


def toggle_system(selector=None) -> System:
    """Two states, one agent with one action, F sends each state to the other."""
    states = {"s0": Structure([0]), "s1": Structure([0], {"P": [(0,)]})}
    base = build_base(
        states,
        ["a"],
        ["go"],
        {("s0", ("go",)): {"s1"}, ("s1", ("go",)): {"s0"}},
    )
    return System(SystemFrame(base, selector=selector), {"a": {"s0": "go", "s1": "go"}})


def broken_toggle() -> System:
    """The toggle with a selector that ignores F and always stays at s0."""
    return toggle_system(selector=lambda history: "s0")
