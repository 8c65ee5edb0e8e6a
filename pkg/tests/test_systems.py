import pytest

from msl.fixtures import broken_toggle, toggle_system
from msl.models import Structure
from msl.systems import (
    Evolution,
    SelectorViolation,
    System,
    SystemDefinitionError,
    SystemFrame,
    build_base,
    proper_evolutions,
    run_system,
    with_perception,
)


def test_toggle_alternates():
    ev = run_system(toggle_system(), "s0", 10)
    assert ev.states() == ["s0", "s1"] * 5 + ["s0"]
    assert all(a == ("go",) for _, a in ev.steps)
    assert ev.is_proper(toggle_system().base)


def test_broken_selector_is_caught():
    with pytest.raises(SelectorViolation):
        run_system(broken_toggle(), "s0", 10)


def test_tampered_trace_is_flagged():
    base = toggle_system().base
    ev = run_system(toggle_system(), "s0", 4)
    bad = Evolution(ev.steps[:2] + (("s1", ("go",)),) + ev.steps[3:], ev.final)
    assert bad.violations(base)


def test_proper_evolution_count():
    base = toggle_system().base
    # one profile, one successor per state: two evolutions per length
    assert len(proper_evolutions(base, 3)) == 2 * 4
    assert all(e.is_proper(base) for e in proper_evolutions(base, 3))


def test_branching_counts_grow():
    states = {"s": Structure([0]), "t": Structure([0, 1])}
    base = build_base(states, ["a"], ["x"], {("s", ("x",)): {"s", "t"}, ("t", ("x",)): {"s", "t"}})
    assert [len(proper_evolutions(base, k)) for k in range(3)] == [2, 6, 14]


def test_definition_errors():
    base = toggle_system().base
    with pytest.raises(SystemDefinitionError):
        System(SystemFrame(base), {})
    with pytest.raises(SystemDefinitionError):
        System(SystemFrame(base), {"a": {"s0": "go"}})
    with pytest.raises(SystemDefinitionError):
        System(SystemFrame(base), {"a": {"s0": "jump", "s1": "go"}})
    with pytest.raises(SystemDefinitionError):
        run_system(toggle_system(), "s9", 1)


def test_perception_drives_the_strategy():
    states = {"s0": Structure([0]), "s1": Structure([0], {"P": [(0,)]})}
    base = build_base(
        states,
        ["a"],
        ["stay", "go"],
        {(s, (x,)): ({s} if x == "stay" else {"s1" if s == "s0" else "s0"}) for s in states for x in ("stay", "go")},
    )
    sysm = System(SystemFrame(base), {"a": {"s0": "stay", "s1": "stay"}})
    lit = lambda m: "go" if not m.rel("P") else "stay"
    seen = with_perception(sysm, "a", lambda m: m, lit)
    assert run_system(seen, "s0", 3).states() == ["s0", "s1", "s1", "s1"]
