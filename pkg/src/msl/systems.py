"""Evolving systems over a finite set of states.

A frame base is a set of named states (structures) with a transition map
F: (state, action profile) -> non-empty set of states.  A frame adds a
selector G that picks the next state from the whole history, and a system
adds one strategy per agent mapping the current state to an action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

from msl.models import Structure

Profile = tuple[str, ...]
Step = tuple[str, Profile]


class SystemDefinitionError(ValueError):
    pass


class SelectorViolation(SystemDefinitionError):
    def __init__(self, step: int, chosen: str, allowed: frozenset[str]):
        self.step = step
        super().__init__(f"step {step}: selector chose {chosen!r}, transitions allow {sorted(allowed)}")


@dataclass(frozen=True)
class SystemFrameBase:
    states: Mapping[str, Structure]
    agents: tuple[str, ...]
    actions: tuple[str, ...]
    transitions: Mapping[tuple[str, Profile], frozenset[str]]

    def __post_init__(self):
        if not self.states:
            raise SystemDefinitionError("a frame base needs at least one state")
        if not self.agents:
            raise SystemDefinitionError("a frame base needs at least one agent")
        if not self.actions:
            raise SystemDefinitionError("a frame base needs at least one action")
        for s in self.states:
            for a in self.profiles():
                out = self.transitions.get((s, a))
                if out is None:
                    raise SystemDefinitionError(f"F is undefined at ({s}, {','.join(a)})")
                if not out:
                    raise SystemDefinitionError(f"F({s}, {','.join(a)}) is empty")
                unknown = set(out) - set(self.states)
                if unknown:
                    raise SystemDefinitionError(f"F({s}, {','.join(a)}) names unknown states {sorted(unknown)}")

    def profiles(self) -> list[Profile]:
        return list(itertools.product(self.actions, repeat=len(self.agents)))

    def ordered_states(self) -> list[str]:
        return sorted(self.states)

    def successors(self, state: str, profile: Profile) -> frozenset[str]:
        try:
            return self.transitions[(state, profile)]
        except KeyError:
            raise SystemDefinitionError(f"F is undefined at ({state}, {','.join(profile)})") from None


@dataclass(frozen=True)
class Evolution:
    steps: tuple[Step, ...]
    final: Optional[str] = None

    def states(self) -> list[str]:
        out = [s for s, _ in self.steps]
        if self.final is not None:
            out.append(self.final)
        return out

    def truncate(self, length: int) -> "Evolution":
        return Evolution(self.steps[:length])

    def violations(self, base: SystemFrameBase) -> list[str]:
        """Every place where consecutive states break the transition map."""
        out = []
        for i, (s, a) in enumerate(self.steps):
            if s not in base.states:
                out.append(f"step {i}: unknown state {s!r}")
                continue
            if len(a) != len(base.agents) or any(x not in base.actions for x in a):
                out.append(f"step {i}: bad action profile {a}")
                continue
            nxt = self.steps[i + 1][0] if i + 1 < len(self.steps) else self.final
            if nxt is not None and nxt not in base.successors(s, a):
                out.append(f"step {i}: {nxt!r} not in F({s}, {','.join(a)})")
        return out

    def is_proper(self, base: SystemFrameBase) -> bool:
        return not self.violations(base)


def proper_evolutions(base: SystemFrameBase, k: int) -> list[Evolution]:
    """All finite proper evolutions with at most k + 1 steps (indices 0..j, j <= k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    profiles = base.profiles()
    layer = [((s, a),) for s in base.ordered_states() for a in profiles]
    out = [Evolution(t) for t in layer]
    for _ in range(k):
        nxt = []
        for t in layer:
            s, a = t[-1]
            for s2 in sorted(base.successors(s, a)):
                nxt.extend(t + ((s2, b),) for b in profiles)
        layer = nxt
        out.extend(Evolution(t) for t in layer)
    return out


Selector = Callable[[tuple[Step, ...]], str]


class SystemFrame:
    """A base plus a selector G choosing the next state from a history."""

    def __init__(self, base: SystemFrameBase, selector: Union[Selector, None] = None,
                 table: Optional[Mapping[tuple[Step, ...], str]] = None):
        self.base = base
        self._selector = selector
        self._table = dict(table or {})

    def default_choice(self, history: tuple[Step, ...]) -> str:
        s, a = history[-1]
        return min(self.base.successors(s, a))

    def select(self, history: tuple[Step, ...]) -> str:
        if history in self._table:
            return self._table[history]
        if self._selector is not None:
            return self._selector(history)
        return self.default_choice(history)


Strategy = Union[Mapping[str, str], Callable[[str], str]]


class System:
    def __init__(self, frame: SystemFrame, strategies: Mapping[str, Strategy]):
        base = frame.base
        missing = set(base.agents) - set(strategies)
        if missing:
            raise SystemDefinitionError(f"no strategy for agents {sorted(missing)}")
        self.frame = frame
        self.strategies: dict[str, Callable[[str], str]] = {}
        for agent in base.agents:
            strat = strategies[agent]
            fn = strat.__getitem__ if isinstance(strat, Mapping) else strat
            for s in base.ordered_states():
                try:
                    act = fn(s)
                except LookupError:
                    raise SystemDefinitionError(f"strategy of {agent!r} is undefined at {s!r}") from None
                if act not in base.actions:
                    raise SystemDefinitionError(f"strategy of {agent!r} picks unknown action {act!r} at {s!r}")
            self.strategies[agent] = fn

    @property
    def base(self) -> SystemFrameBase:
        return self.frame.base

    def profile(self, state: str) -> Profile:
        return tuple(self.strategies[i](state) for i in self.base.agents)


def run_system(system: System, start: str, steps: int) -> Evolution:
    """Deterministic run: a_j = (f_i(M_j))_i and M_{j+1} = G(history up to j)."""
    base = system.base
    if start not in base.states:
        raise SystemDefinitionError(f"unknown start state {start!r}")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    history: tuple[Step, ...] = ()
    state = start
    for j in range(steps):
        profile = system.profile(state)
        history = history + ((state, profile),)
        chosen = system.frame.select(history)
        allowed = base.successors(state, profile)
        if chosen not in allowed:
            raise SelectorViolation(j, chosen, allowed)
        state = chosen
    return Evolution(history, state)


def with_perception(
    system: System,
    agent: str,
    perceive: Union[Mapping[str, Structure], Callable[[Structure], Structure]],
    decide: Union[Mapping[Structure, str], Callable[[Structure], str]],
) -> System:
    """Replace one agent's strategy by decide(perceive(state))."""
    base = system.base
    if agent not in base.agents:
        raise SystemDefinitionError(f"unknown agent {agent!r}")

    def view(state: str) -> Structure:
        if isinstance(perceive, Mapping):
            return perceive[state]
        return perceive(base.states[state])

    act = decide.__getitem__ if isinstance(decide, Mapping) else decide
    strategies: dict[str, Strategy] = dict(system.strategies)
    strategies[agent] = lambda state: act(view(state))
    return System(system.frame, strategies)


def build_base(
    states: Mapping[str, Structure],
    agents: Iterable[str],
    actions: Iterable[str],
    transitions: Mapping[tuple[str, Profile], Iterable[str]],
) -> SystemFrameBase:
    return SystemFrameBase(
        dict(states),
        tuple(agents),
        tuple(actions),
        {k: frozenset(v) for k, v in transitions.items()},
    )
