"""Randomized soundness checks tying the proof rules to model truth.

Each trial draws a small random system (trial 0 is the fixed eight-state
fixture) and checks semantic forms of every proof rule, the corridor
agreement lemma (only corridor choices matter to a witness), and two bridge
properties.  Where a rule's soundness argument names an explicit witness
(augmentation and corridor trimming reuse the found strategy, transitivity
splices two strategies along the first corridor), the transferred witness
itself is replayed, not just the decision bit.  Violations carry the offending
system in portable text form so a failure replays outside the fuzzer.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .amnesic import check_atom_amnesic
from .core import (AmnesicStrategy, EpistemicTransitionSystem, UntilObjective,
                   check_strategy)
from .fixtures import T0_ETS, load_t0
from .recall import check_atom_recall
from .syntax import Atom, render_system

__all__ = ["FuzzConfig", "FuzzViolation", "FuzzReport",
           "generate_random_system", "fuzz_soundness"]


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 500
    max_states: int = 6
    max_views: int = 4
    max_instructions: int = 2
    density: float = 0.5


@dataclass(frozen=True)
class FuzzViolation:
    trial: int
    prop: str
    detail: str
    system_text: str


@dataclass(frozen=True)
class FuzzReport:
    config: FuzzConfig
    trials_run: int
    checks: Dict[str, int]
    violations: Tuple[FuzzViolation, ...]
    notes: Tuple[str, ...]
    elapsed_s: float

    @property
    def ok(self) -> bool:
        return not self.violations


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random((seed << 32) ^ trial)


def _random_system(rng: random.Random, config: FuzzConfig) -> EpistemicTransitionSystem:
    n_views = rng.randint(1, config.max_views)
    n_instructions = rng.randint(1, config.max_instructions)
    n_states = rng.randint(1, config.max_states)
    views = tuple(f"v{k}" for k in range(n_views))
    instructions = tuple(str(i) for i in range(n_instructions))
    states = [(f"s{j}", views[rng.randrange(n_views)]) for j in range(n_states)]
    transitions = []
    for j in range(n_states):
        for instr in instructions:
            for t in range(n_states):
                if rng.random() < config.density:
                    transitions.append((f"s{j}", instr, f"s{t}"))
    return EpistemicTransitionSystem.build(views, instructions, states, transitions)


def generate_random_system(config: FuzzConfig, trial: int) -> EpistemicTransitionSystem:
    """Deterministic in (seed, trial); always within the configured bounds."""
    return _random_system(_trial_rng(config.seed, trial), config)


class _TrialChecker:
    """Runs every property bundle against one system."""

    def __init__(self, trial: int, system: EpistemicTransitionSystem,
                 rng: random.Random, system_text: str,
                 checks: Dict[str, int], violations: List[FuzzViolation]):
        self.trial = trial
        self.system = system
        self.rng = rng
        self.system_text = system_text
        self.checks = checks
        self.violations = violations
        self.side = 1 << len(system.universe)

    def _fail(self, prop: str, detail: str) -> None:
        self.violations.append(
            FuzzViolation(self.trial, prop, detail, self.system_text))

    def _count(self, prop: str) -> None:
        self.checks[prop] = self.checks.get(prop, 0) + 1

    def _atom(self, a: int, b: int, c: int) -> Atom:
        return Atom.from_masks(self.system.universe, a, b, c)

    def _amnesic(self, a: int, b: int, c: int):
        return check_atom_amnesic(self.system, self._atom(a, b, c),
                                  canonical_witness=False)

    def _recall_holds(self, a: int, b: int, c: int) -> bool:
        return check_atom_recall(self.system, self._atom(a, b, c)).holds

    def _replay(self, prop: str, strategy: AmnesicStrategy,
                a: int, b: int, c: int, context: str) -> None:
        self._count(prop)
        objective = UntilObjective(a, b, c)
        witness = check_strategy(self.system, strategy, objective)
        if witness is not None:
            self._fail(prop, f"{context}: transferred strategy "
                             f"{strategy.as_map(self.system)} fails "
                             f"{self._atom(a, b, c)!r} ({witness.reason})")

    def _draw(self) -> int:
        return self.rng.randrange(self.side)

    def run(self) -> None:
        self.reflexivity()
        for _ in range(5):
            self.rule_bundle(self._draw(), self._draw(), self._draw())
        for _ in range(3):
            self.transitivity()
        for _ in range(2):
            self.recall_transitivity()

    def reflexivity(self) -> None:
        for _ in range(2):
            c = self._draw()
            a = c & self._draw()
            b = self._draw()
            self._count("reflexivity")
            if not self._amnesic(a, b, c).holds:
                self._fail("reflexivity",
                           f"start inside target yet {self._atom(a, b, c)!r} fails")

    def rule_bundle(self, a: int, b: int, c: int) -> None:
        decision = self._amnesic(a, b, c)
        if decision.holds:
            strategy = decision.witness
            assert strategy is not None or decision.note is not None
            self._count("amnesic_implies_recall")
            if not self._recall_holds(a, b, c):
                self._fail("amnesic_implies_recall",
                           f"{self._atom(a, b, c)!r} holds amnesically but not with recall")
            if strategy is not None:
                d = self._draw()
                self._replay("augmentation", strategy, a | d, b, c | d,
                             f"widening {self._atom(a, b, c)!r} by mask {d:#x}")
                self._replay("trim_corridor", strategy, a, b & ~c, c,
                             f"trimming {self._atom(a, b, c)!r}")
                mutated = _mutate_off_corridor(strategy, b,
                                               len(self.system.instructions),
                                               self.rng)
                self._replay("corridor_agreement", mutated, a, b, c,
                             f"re-rolling off-corridor choices of "
                             f"{self._atom(a, b, c)!r}")
        if not b:
            self._count("zero_step")
            if decision.holds and not self._amnesic(a & ~c, 0, 0).holds:
                self._fail("zero_step",
                           f"{self._atom(a, 0, c)!r} holds but leftover starts are populated")
        self._count("empty_target")
        if self._amnesic(a, b, 0).holds and not self._amnesic(a, 0, 0).holds:
            self._fail("empty_target",
                       f"{self._atom(a, b, 0)!r} holds on populated starts")

    def transitivity(self) -> None:
        a, b, c, e = self._draw(), self._draw(), self._draw(), self._draw()
        d = self._draw() & ~b
        first = self._amnesic(a, b, c)
        if not first.holds:
            return
        second = self._amnesic(c, d, e)
        if not second.holds:
            return
        self._count("transitivity")
        if not self._amnesic(a, b | d, e).holds:
            self._fail("transitivity",
                       f"{self._atom(a, b, c)!r} and {self._atom(c, d, e)!r} hold "
                       f"but {self._atom(a, b | d, e)!r} fails")
        if first.witness is not None and second.witness is not None:
            spliced = _splice(first.witness, second.witness, b)
            self._replay("transitivity_splice", spliced, a, b | d, e,
                         f"splicing witnesses of {self._atom(a, b, c)!r} "
                         f"and {self._atom(c, d, e)!r}")

    def recall_transitivity(self) -> None:
        full = self.side - 1
        a, c, e = self._draw(), self._draw(), self._draw()
        if not self._recall_holds(a, full, c):
            return
        if not self._recall_holds(c, full, e):
            return
        self._count("recall_transitivity")
        if not self._recall_holds(a, full, e):
            self._fail("recall_transitivity",
                       f"recall reaches {c:#x} from {a:#x} and {e:#x} from {c:#x} "
                       f"but not {e:#x} from {a:#x}")


def _mutate_off_corridor(strategy: AmnesicStrategy, corridor: int,
                         n_instructions: int, rng: random.Random) -> AmnesicStrategy:
    """Re-roll every choice at views outside the corridor.  A successful run
    only ever consults corridor views before reaching the target, so two
    strategies that agree there succeed together."""
    choices = tuple(
        choice if corridor & (1 << k) else rng.randrange(n_instructions)
        for k, choice in enumerate(strategy.choices))
    return AmnesicStrategy(choices)


def _splice(first: AmnesicStrategy, second: AmnesicStrategy,
            corridor: int) -> AmnesicStrategy:
    """First strategy on corridor views, second elsewhere.  Sound exactly when
    the second premise's corridor is disjoint from `corridor`."""
    choices = tuple(
        first.choices[k] if corridor & (1 << k) else second.choices[k]
        for k in range(len(first.choices)))
    return AmnesicStrategy(choices)


def _fixture_note(checks: Dict[str, int], violations: List[FuzzViolation]) -> str:
    """Trial 0 carries a known counterexample: chaining two unrestricted
    amnesic trips can fail when their corridors overlap, which is why the
    transitivity rule demands disjoint corridors.  The shape is asserted so
    the engines cannot drift."""
    system = load_t0()
    universe = system.universe
    full = (1 << len(universe)) - 1
    v1 = 1 << universe.index("v1")
    v2 = 1 << universe.index("v2")
    v6 = 1 << universe.index("v6")
    legs = [
        check_atom_amnesic(system, Atom.from_masks(universe, v1, full, v6),
                           canonical_witness=False).holds,
        check_atom_amnesic(system, Atom.from_masks(universe, v6, full, v2),
                           canonical_witness=False).holds,
        check_atom_amnesic(system, Atom.from_masks(universe, v1, full, v2),
                           canonical_witness=False).holds,
    ]
    checks["fixture_counterexample"] = checks.get("fixture_counterexample", 0) + 1
    if legs != [True, True, False]:
        violations.append(FuzzViolation(
            0, "fixture_counterexample",
            f"expected holds/holds/fails for the chained trips, got {legs}",
            T0_ETS))
    return ("trial 0: v1 reaches v6 and v6 reaches v2, yet v1 does not reach v2 "
            "amnesically; overlapping corridors admit no spliced witness")


def fuzz_soundness(config: FuzzConfig = FuzzConfig()) -> FuzzReport:
    started = time.perf_counter()
    checks: Dict[str, int] = {}
    violations: List[FuzzViolation] = []
    notes: List[str] = []
    for trial in range(config.trials):
        rng = _trial_rng(config.seed, trial)
        if trial == 0:
            system = load_t0()
            system_text = T0_ETS
            notes.append(_fixture_note(checks, violations))
        else:
            system = _random_system(rng, config)
            system_text = render_system(system)
        _TrialChecker(trial, system, rng, system_text, checks, violations).run()
    elapsed = time.perf_counter() - started
    return FuzzReport(config, config.trials, checks, tuple(violations),
                      tuple(notes), elapsed)
