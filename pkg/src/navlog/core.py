"""Finite epistemic transition systems and single-strategy checking.

A system is a finite set of states, each observing exactly one view, plus a
family of labelled transition relations (one per instruction).  Nondeterminism
and dead ends are both permitted, and a view may be observed by no state at
all.  A forgetful agent acts through a strategy that picks one instruction per
view; `check_strategy` decides whether every maximal run from a given start
region stays inside a corridor of views until it reaches a target view, and
produces a replayable counterexample when it does not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")

# Counterexample categories for check_strategy.
LEFT_CORRIDOR = "left_corridor"    # stepped onto a view outside corridor and target
DEAD_END = "dead_end"              # run halted before reaching the target
NEVER_REACHES = "never_reaches"    # run cycles forever short of the target

_UNSEEN, _ON_PATH, _SAFE = 0, 1, 2


class SystemValidationError(ValueError):
    """Raised when a system description breaks a structural invariant.

    Carries every violation found, not just the first.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class Universe:
    """Ordered, interned view identifiers with bitmask helpers.

    View sets are represented as Python ints: bit k stands for the view
    declared k-th.  Declaration order is the canonical order everywhere.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(names)
        self._index: dict[str, int] = {}
        for k, name in enumerate(self.names):
            if name in self._index:
                raise SystemValidationError([f"duplicate view {name!r}"])
            self._index[name] = k

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"

    @property
    def full(self) -> int:
        """Mask with every declared view set."""
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown view {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        """View names in a mask, in declaration order."""
        return tuple(n for k, n in enumerate(self.names) if mask >> k & 1)


@dataclass
class RawSystem:
    """Unchecked system description; the optional ints are source line numbers.

    views/instructions: (name, line); states: (name, view, line);
    transitions: (source, instruction, target, line).
    """

    views: list[tuple[str, Optional[int]]]
    instructions: list[tuple[str, Optional[int]]]
    states: list[tuple[str, str, Optional[int]]]
    transitions: list[tuple[str, str, str, Optional[int]]]


class EpistemicTransitionSystem:
    """Validated system with interned states, views and instructions.

    Construct through `validate_system` or the `build` convenience wrapper;
    `__init__` trusts its arguments.
    """

    def __init__(
        self,
        universe: Universe,
        instructions: tuple[str, ...],
        states: tuple[str, ...],
        observation: tuple[int, ...],
        succ: tuple[tuple[tuple[int, ...], ...], ...],
    ):
        self.universe = universe
        self.instructions = instructions
        self.states = states
        self._observation = observation                     # state idx -> view idx
        self._obs_mask = tuple(1 << v for v in observation)  # state idx -> view bit
        self._succ = succ                                    # [state][instr] -> state idxs
        self._state_index = {name: k for k, name in enumerate(states)}
        self._instr_index = {name: k for k, name in enumerate(instructions)}
        per_view: list[list[int]] = [[] for _ in range(len(universe))]
        for k, v in enumerate(observation):
            per_view[v].append(k)
        self._view_states = tuple(tuple(ks) for ks in per_view)

    @classmethod
    def build(
        cls,
        views: Iterable[str],
        instructions: Iterable[str],
        states: Iterable[tuple[str, str]],
        transitions: Iterable[tuple[str, str, str]] = (),
    ) -> "EpistemicTransitionSystem":
        raw = RawSystem(
            views=[(v, None) for v in views],
            instructions=[(i, None) for i in instructions],
            states=[(s, v, None) for s, v in states],
            transitions=[(s, i, t, None) for s, i, t in transitions],
        )
        return validate_system(raw)

    def __repr__(self) -> str:
        return (
            f"<EpistemicTransitionSystem {len(self.states)} states, "
            f"{len(self.universe)} views, {len(self.instructions)} instructions>"
        )

    def state_index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise KeyError(f"unknown state {name!r}") from None

    def instruction_index(self, name: str) -> int:
        try:
            return self._instr_index[name]
        except KeyError:
            raise KeyError(f"unknown instruction {name!r}") from None

    def observation(self, state: str) -> str:
        """View observed in a state."""
        return self.universe.names[self._observation[self.state_index(state)]]

    def states_observing(self, view: str) -> tuple[str, ...]:
        """States whose observation is `view`, in declaration order."""
        ks = self._view_states[self.universe.index(view)]
        return tuple(self.states[k] for k in ks)

    def successors(self, state: str, instruction: str) -> tuple[str, ...]:
        """Targets reachable from `state` in one `instruction` step."""
        ks = self._succ[self.state_index(state)][self.instruction_index(instruction)]
        return tuple(self.states[k] for k in ks)

    def transition_triples(self) -> tuple[tuple[str, str, str], ...]:
        """Every (source, instruction, target), in declaration order."""
        out = []
        for s, rows in enumerate(self._succ):
            for i, targets in enumerate(rows):
                for t in targets:
                    out.append((self.states[s], self.instructions[i], self.states[t]))
        return tuple(out)


def validate_system(raw: RawSystem) -> EpistemicTransitionSystem:
    """Check a raw description and intern it.

    Reports every violated invariant at once, naming source lines when the
    description came from text.  Duplicate transitions collapse silently (the
    relation is a set); everything else duplicated or dangling is an error.
    """
    problems: list[str] = []

    def where(line: Optional[int]) -> str:
        return f" (line {line})" if line is not None else ""

    view_line: dict[str, Optional[int]] = {}
    for name, line in raw.views:
        if not _IDENT.match(name):
            problems.append(f"bad view identifier {name!r}{where(line)}")
        elif name in view_line:
            problems.append(f"duplicate view {name!r}{where(line)}")
        else:
            view_line[name] = line

    instr_line: dict[str, Optional[int]] = {}
    for name, line in raw.instructions:
        if not _IDENT.match(name):
            problems.append(f"bad instruction identifier {name!r}{where(line)}")
        elif name in instr_line:
            problems.append(f"duplicate instruction {name!r}{where(line)}")
        else:
            instr_line[name] = line
    if not instr_line:
        problems.append("at least one instruction is required (strategies must be total)")

    state_line: dict[str, Optional[int]] = {}
    state_view: dict[str, str] = {}
    for name, view, line in raw.states:
        if not _IDENT.match(name):
            problems.append(f"bad state identifier {name!r}{where(line)}")
            continue
        if name in state_line:
            problems.append(f"duplicate state {name!r}{where(line)}")
            continue
        if view not in view_line:
            problems.append(f"state {name!r} observes undeclared view {view!r}{where(line)}")
            continue
        if line is not None and view_line[view] is not None and view_line[view] > line:
            problems.append(f"state {name!r} uses view {view!r} before its declaration{where(line)}")
            continue
        state_line[name] = line
        state_view[name] = view

    triples: list[tuple[str, str, str]] = []
    for src, instr, dst, line in raw.transitions:
        ok = True
        for role, name, table in (("source state", src, state_line),
                                  ("target state", dst, state_line)):
            if name not in table:
                problems.append(f"transition {role} {name!r} is undeclared{where(line)}")
                ok = False
            elif line is not None and table[name] is not None and table[name] > line:
                problems.append(f"transition uses {role} {name!r} before its declaration{where(line)}")
                ok = False
        if instr not in instr_line:
            problems.append(f"transition instruction {instr!r} is undeclared{where(line)}")
            ok = False
        elif line is not None and instr_line[instr] is not None and instr_line[instr] > line:
            problems.append(f"transition uses instruction {instr!r} before its declaration{where(line)}")
            ok = False
        if ok:
            triples.append((src, instr, dst))

    if problems:
        raise SystemValidationError(problems)

    universe = Universe(name for name, _ in raw.views)
    instructions = tuple(name for name, _ in raw.instructions)
    instr_index = {name: k for k, name in enumerate(instructions)}
    states = tuple(name for name, _, _ in raw.states)
    state_index = {name: k for k, name in enumerate(states)}
    observation = tuple(universe.index(state_view[name]) for name in states)

    buckets: list[list[set[int]]] = [
        [set() for _ in instructions] for _ in states
    ]
    for src, instr, dst in triples:
        buckets[state_index[src]][instr_index[instr]].add(state_index[dst])
    succ = tuple(
        tuple(tuple(sorted(cell)) for cell in row) for row in buckets
    )
    return EpistemicTransitionSystem(universe, instructions, states, observation, succ)


@dataclass(frozen=True)
class AmnesicStrategy:
    """Total choice of one instruction per view (no memory of the run).

    `choices[k]` is the instruction index picked for the view with index k.
    """

    choices: tuple[int, ...]

    @classmethod
    def from_map(cls, system: EpistemicTransitionSystem,
                 mapping: Mapping[str, str]) -> "AmnesicStrategy":
        missing = [v for v in system.universe if v not in mapping]
        if missing:
            raise ValueError(f"strategy is not total; missing views {missing}")
        extra = [v for v in mapping if v not in system.universe]
        if extra:
            raise ValueError(f"strategy names unknown views {extra}")
        return cls(tuple(system.instruction_index(mapping[v]) for v in system.universe))

    @classmethod
    def constant(cls, system: EpistemicTransitionSystem, instruction: str) -> "AmnesicStrategy":
        k = system.instruction_index(instruction)
        return cls((k,) * len(system.universe))

    def as_map(self, system: EpistemicTransitionSystem) -> dict[str, str]:
        return {
            view: system.instructions[self.choices[k]]
            for k, view in enumerate(system.universe.names)
        }


@dataclass(frozen=True)
class UntilObjective:
    """Bitmask triple (start, corridor, target) over a system's universe."""

    start: int
    corridor: int
    target: int

    @classmethod
    def from_names(cls, universe: Universe, start: Iterable[str],
                   corridor: Iterable[str], target: Iterable[str]) -> "UntilObjective":
        return cls(universe.mask(start), universe.mask(corridor), universe.mask(target))


@dataclass(frozen=True)
class PathWitness:
    """Replayable evidence that one strategy misses an objective.

    `states` is a nonempty run under the strategy starting from a start-view
    state.  For `never_reaches` the run is a lasso: the final state steps back
    to `states[loop_start]`.  For the other two reasons `loop_start` is None
    and the run is a simple prefix ending at the offending state.
    """

    states: tuple[str, ...]
    reason: str
    loop_start: Optional[int] = None


def check_strategy(
    system: EpistemicTransitionSystem,
    strategy: AmnesicStrategy,
    objective: UntilObjective,
) -> Optional[PathWitness]:
    """Decide one strategy against an objective; None means it succeeds.

    Succeeds when every maximal run from every start-view state keeps its
    views inside the corridor until (immediately or eventually) a target view
    appears; a start already on a target view succeeds with zero steps.
    Exploration is depth-first in declaration order, so the counterexample
    returned for a failing strategy is deterministic.  States observing a
    target view are success leaves: the run is not extended past them.
    """
    a_mask, b_mask, c_mask = objective.start, objective.corridor, objective.target
    obs = system._obs_mask
    view_of = system._observation
    table = system._succ
    choices = strategy.choices
    n = len(system.states)

    status = [_UNSEEN] * n
    path: list[int] = []
    pos: dict[int, int] = {}
    iters: list[Iterator[int]] = []

    def names(seq: list[int]) -> tuple[str, ...]:
        return tuple(system.states[k] for k in seq)

    def enter(u: int):
        """Returns a PathWitness, True (pushed), or None (closed off)."""
        m = obs[u]
        if m & c_mask:
            return None
        if not m & b_mask:
            return PathWitness(names(path + [u]), LEFT_CORRIDOR)
        st = status[u]
        if st == _SAFE:
            return None
        if st == _ON_PATH:
            return PathWitness(names(path), NEVER_REACHES, loop_start=pos[u])
        nxt = table[u][choices[view_of[u]]]
        if not nxt:
            return PathWitness(names(path + [u]), DEAD_END)
        status[u] = _ON_PATH
        pos[u] = len(path)
        path.append(u)
        iters.append(iter(nxt))
        return True

    for root in range(n):
        if not obs[root] & a_mask:
            continue
        r = enter(root)
        if isinstance(r, PathWitness):
            return r
        while path:
            child = next(iters[-1], -1)
            if child < 0:
                done = path.pop()
                iters.pop()
                del pos[done]
                status[done] = _SAFE
                continue
            r = enter(child)
            if isinstance(r, PathWitness):
                return r
    return None


def verify_witness(
    system: EpistemicTransitionSystem,
    strategy: AmnesicStrategy,
    objective: UntilObjective,
    witness: PathWitness,
) -> list[str]:
    """Independently replay a counterexample; returns all defects found.

    An empty list means the witness is genuine: the run starts on a start
    view, follows the strategy's instructions, and exhibits its stated reason
    (corridor exit, halt short of the target, or a strategy-closed lasso that
    never meets the target).
    """
    problems: list[str] = []
    sts = witness.states
    if not sts:
        return ["witness has no states"]
    try:
        idxs = [system.state_index(s) for s in sts]
    except KeyError as e:
        return [str(e)]
    a_mask, b_mask, c_mask = objective.start, objective.corridor, objective.target
    obs = system._obs_mask

    if not obs[idxs[0]] & a_mask:
        problems.append(f"first state {sts[0]!r} does not observe a start view")
    for here, there in zip(idxs, idxs[1:]):
        instr = strategy.choices[system._observation[here]]
        if there not in system._succ[here][instr]:
            problems.append(
                f"{system.states[here]!r} does not step to {system.states[there]!r} "
                f"under the strategy"
            )
    body = idxs if witness.reason == NEVER_REACHES else idxs[:-1]
    for k in body:
        m = obs[k]
        if m & c_mask or not m & b_mask:
            problems.append(f"state {system.states[k]!r} is not strictly inside the corridor")

    last = idxs[-1]
    if witness.reason == LEFT_CORRIDOR:
        if witness.loop_start is not None:
            problems.append("left_corridor witness carries a loop_start")
        if obs[last] & (b_mask | c_mask):
            problems.append(f"final state {sts[-1]!r} still observes a corridor or target view")
    elif witness.reason == DEAD_END:
        if witness.loop_start is not None:
            problems.append("dead_end witness carries a loop_start")
        if obs[last] & c_mask:
            problems.append(f"final state {sts[-1]!r} observes a target view")
        instr = strategy.choices[system._observation[last]]
        if system._succ[last][instr]:
            problems.append(f"final state {sts[-1]!r} still has successors under the strategy")
    elif witness.reason == NEVER_REACHES:
        ls = witness.loop_start
        if ls is None or not 0 <= ls < len(idxs):
            problems.append("never_reaches witness needs a loop_start inside the run")
        else:
            instr = strategy.choices[system._observation[last]]
            if idxs[ls] not in system._succ[last][instr]:
                problems.append("lasso does not close under the strategy")
    else:
        problems.append(f"unknown witness reason {witness.reason!r}")
    return problems
