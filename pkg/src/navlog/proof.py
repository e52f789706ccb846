"""Derivability of navigability atoms by forward-chaining saturation.

Atoms are (start, corridor, target) view-set triples, held as bitmask
triples.  Six rules generate the closure of a set of assumed atoms:

    reflexivity     infer (A, B, C) outright whenever A is a subset of C
    augmentation    from (A, B, C) infer (A|D, B, C|D) for every D
    transitivity    from (A, B, C) and (C, D, E) with B, D disjoint
                    infer (A, B|D, E)
    trim_corridor   from (A, B, C) infer (A, B minus C, C)
    zero_step       from (A, {}, C) infer (A minus C, {}, {})
    empty_target    from (A, B, {}) infer (A, {}, {})

Saturation enumerates the whole (2^|V|)^3 atom space in the worst case, so
the universe size is capped (default 5 views; NAVLOG_MAX_VIEWS overrides).
Each derived atom records the first derivation that produced it, and
`explain` rebuilds that derivation as a tree.  `check_derived_lemmas` sweeps
five closure properties that the rules are supposed to subsume; any violation
means the engine itself is broken.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .core import Universe
from .syntax import Atom

__all__ = [
    "ASSUMPTION", "REFLEXIVITY", "AUGMENTATION", "TRANSITIVITY",
    "TRIM_CORRIDOR", "ZERO_STEP", "EMPTY_TARGET",
    "Key", "Closure", "DerivationTree", "UniverseTooLarge",
    "saturate", "is_closed", "derives", "explain",
    "LemmaViolation", "LemmaSweepReport", "check_derived_lemmas",
    "verify_provenance",
]

Key = Tuple[int, int, int]   # (start, corridor, target) masks

ASSUMPTION = "assumption"
REFLEXIVITY = "reflexivity"
AUGMENTATION = "augmentation"
TRANSITIVITY = "transitivity"
TRIM_CORRIDOR = "trim_corridor"
ZERO_STEP = "zero_step"
EMPTY_TARGET = "empty_target"

DEFAULT_MAX_VIEWS = 5


class UniverseTooLarge(ValueError):
    """The view universe exceeds the saturation cap."""


def _submasks(mask: int):
    """All submasks of `mask`, descending, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass
class Closure:
    """Saturated derivability state over one universe.

    `assumptions` and `derived` hold mask triples; `provenance` maps each
    derived triple to (rule, premise triples) for the first derivation found.
    Assumptions are always contained in `derived`.
    """

    universe: Universe
    assumptions: FrozenSet[Key]
    derived: FrozenSet[Key]
    provenance: Dict[Key, Tuple[str, Tuple[Key, ...]]] = field(repr=False)
    sealed: bool = field(default=False, compare=False, repr=False)

    def atom(self, key: Key) -> Atom:
        return Atom.from_masks(self.universe, *key)

    def derived_atoms(self) -> tuple[Atom, ...]:
        return tuple(self.atom(k) for k in sorted(self.derived))

    def assumption_atoms(self) -> tuple[Atom, ...]:
        return tuple(self.atom(k) for k in sorted(self.assumptions))


def saturate(universe: Universe, assumptions: Iterable[Atom] = (),
             max_views: Optional[int] = None) -> Closure:
    """Close a set of assumed atoms under the six rules.

    Deterministic: rule applications fire in a fixed order, so the recorded
    provenance is reproducible.  Raises UniverseTooLarge past the cap
    (max_views argument, else NAVLOG_MAX_VIEWS, else 5).
    """
    cap = max_views
    if cap is None:
        cap = int(os.environ.get("NAVLOG_MAX_VIEWS", DEFAULT_MAX_VIEWS))
    n = len(universe)
    if n > cap:
        raise UniverseTooLarge(
            f"universe has {n} views; saturation is capped at {cap} "
            f"(set NAVLOG_MAX_VIEWS or max_views to raise the cap)")
    full = universe.full

    derived: set[Key] = set()
    provenance: Dict[Key, Tuple[str, Tuple[Key, ...]]] = {}
    by_start: Dict[int, list[Key]] = {}
    by_target: Dict[int, list[Key]] = {}
    queue: deque[Key] = deque()

    def add(key: Key, rule: str, premises: Tuple[Key, ...]) -> None:
        if key in derived:
            return
        derived.add(key)
        provenance[key] = (rule, premises)
        by_start.setdefault(key[0], []).append(key)
        by_target.setdefault(key[2], []).append(key)
        queue.append(key)

    for c in range(full + 1):
        for a in _submasks(c):
            for b in range(full + 1):
                add((a, b, c), REFLEXIVITY, ())

    assumed = frozenset(atom.masks(universe) for atom in assumptions)
    for key in sorted(assumed):
        add(key, ASSUMPTION, ())

    while queue:
        t = queue.popleft()
        a, b, c = t
        for d in range(full + 1):
            add((a | d, b, c | d), AUGMENTATION, (t,))
        add((a, b & ~c, c), TRIM_CORRIDOR, (t,))
        if b == 0:
            add((a & ~c, 0, 0), ZERO_STEP, (t,))
        if c == 0:
            add((a, 0, 0), EMPTY_TARGET, (t,))
        for u in tuple(by_start.get(c, ())):
            if not b & u[1]:
                add((a, b | u[1], u[2]), TRANSITIVITY, (t, u))
        for u in tuple(by_target.get(a, ())):
            if not u[1] & b:
                add((u[0], u[1] | b, c), TRANSITIVITY, (u, t))

    return Closure(universe, assumed, frozenset(derived), provenance, sealed=True)


def is_closed(closure: Closure) -> bool:
    """True when no rule application adds an atom to `derived`.

    Single sweep, no worklist: enough because a set is a fixpoint iff one
    round of every rule is a no-op.  Saturate-produced closures pass by
    construction; hand-assembled ones get checked before model building.
    """
    full = closure.universe.full
    derived = closure.derived
    if not closure.assumptions <= derived:
        return False
    for c in range(full + 1):
        for a in _submasks(c):
            for b in range(full + 1):
                if (a, b, c) not in derived:
                    return False
    by_start: Dict[int, list[Key]] = {}
    for key in derived:
        by_start.setdefault(key[0], []).append(key)
    for t in derived:
        a, b, c = t
        for d in range(full + 1):
            if (a | d, b, c | d) not in derived:
                return False
        if (a, b & ~c, c) not in derived:
            return False
        if b == 0 and (a & ~c, 0, 0) not in derived:
            return False
        if c == 0 and (a, 0, 0) not in derived:
            return False
        for u in by_start.get(c, ()):
            if not b & u[1] and (a, b | u[1], u[2]) not in derived:
                return False
    return True


def derives(closure: Closure, atom: Atom) -> bool:
    """Membership of one atom in the saturated closure."""
    return atom.masks(closure.universe) in closure.derived


@dataclass(frozen=True)
class DerivationTree:
    """One derivation: this atom, the rule that produced it, its premises."""

    atom: Atom
    rule: str
    premises: Tuple["DerivationTree", ...]

    def render(self, indent: int = 0) -> str:
        from .syntax import AtomNode, render_formula
        own = "  " * indent + f"{render_formula(AtomNode(self.atom))}  [{self.rule}]"
        return "\n".join([own] + [p.render(indent + 1) for p in self.premises])


def explain(closure: Closure, atom: Atom) -> DerivationTree:
    """Rebuild the recorded derivation of an atom.

    Raises ValueError when the atom is not in the closure.  Shared premises
    become shared subtrees; the recorded provenance is well-founded (every
    premise predates its conclusion), so reconstruction always terminates.
    """
    root = atom.masks(closure.universe)
    if root not in closure.derived:
        raise ValueError(f"atom {atom} is not derivable from the assumptions")
    memo: Dict[Key, DerivationTree] = {}
    stack = [root]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        rule, premises = closure.provenance[key]
        pending = [p for p in premises if p not in memo]
        if pending:
            stack.extend(pending)
            continue
        memo[key] = DerivationTree(closure.atom(key), rule,
                                   tuple(memo[p] for p in premises))
        stack.pop()
    return memo[root]


@dataclass(frozen=True)
class LemmaViolation:
    lemma: str
    premises: Tuple[Key, ...]
    conclusion: Key


@dataclass(frozen=True)
class LemmaSweepReport:
    """Instance counts and violations from the derived-lemma sweeps."""

    instances: Dict[str, int]
    violations: Tuple[LemmaViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_derived_lemmas(closure: Closure) -> LemmaSweepReport:
    """Sweep five closure properties the six rules are expected to subsume.

    shrink_start             (A,B,C) derived, A' subset of A  => (A',B,C)
    widen_corridor           (A,B,C) derived, B subset of B'  => (A,B',C)
    widen_target             (A,B,C) derived, C subset of C'  => (A,B,C')
    drop_void_views          (Bv,{},{}) and (A,B,C) derived   => (A,B-Bv,C)
    overlapping_transitivity (A,B,C),(C,D,E) derived, B&D<=C  => (A,B|D,E)

    Every instance over the closure is checked; any violation is an engine
    bug, not a property of the assumptions.
    """
    derived = closure.derived
    full = closure.universe.full
    instances = {name: 0 for name in (
        "shrink_start", "widen_corridor", "widen_target",
        "drop_void_views", "overlapping_transitivity")}
    violations: list[LemmaViolation] = []

    def expect(lemma: str, premises: Tuple[Key, ...], conclusion: Key) -> None:
        instances[lemma] += 1
        if conclusion not in derived:
            violations.append(LemmaViolation(lemma, premises, conclusion))

    by_start: Dict[int, list[Key]] = {}
    voids: list[int] = []
    for key in sorted(derived):
        by_start.setdefault(key[0], []).append(key)
        if key[1] == 0 and key[2] == 0:
            voids.append(key[0])

    for key in sorted(derived):
        a, b, c = key
        for a2 in _submasks(a):
            expect("shrink_start", (key,), (a2, b, c))
        for extra in _submasks(full & ~b):
            expect("widen_corridor", (key,), (a, b | extra, c))
        for extra in _submasks(full & ~c):
            expect("widen_target", (key,), (a, b, c | extra))
        for void in voids:
            expect("drop_void_views", ((void, 0, 0), key), (a, b & ~void, c))
        for u in by_start.get(c, ()):
            if not (b & u[1]) & ~c:
                expect("overlapping_transitivity", (key, u), (a, b | u[1], u[2]))

    return LemmaSweepReport(instances, tuple(violations))


def verify_provenance(closure: Closure) -> list[str]:
    """Replay every recorded derivation step; returns all defects found.

    Checks that premises are themselves derived and that each conclusion is
    exactly what its rule yields from its premises (side conditions
    included).
    """
    problems: list[str] = []
    for key, (rule, premises) in closure.provenance.items():
        for p in premises:
            if p not in closure.derived:
                problems.append(f"{key}: premise {p} is not derived")
        if rule == ASSUMPTION:
            ok = not premises and key in closure.assumptions
        elif rule == REFLEXIVITY:
            ok = not premises and not key[0] & ~key[2]
        elif rule == AUGMENTATION:
            if len(premises) != 1:
                ok = False
            else:
                a0, b0, c0 = premises[0]
                d = (key[0] & ~a0) | (key[2] & ~c0)
                ok = key == (a0 | d, b0, c0 | d)
        elif rule == TRANSITIVITY:
            if len(premises) != 2:
                ok = False
            else:
                (a1, b1, c1), (a2, b2, c2) = premises
                ok = c1 == a2 and not b1 & b2 and key == (a1, b1 | b2, c2)
        elif rule == TRIM_CORRIDOR:
            ok = len(premises) == 1 and key == (
                premises[0][0], premises[0][1] & ~premises[0][2], premises[0][2])
        elif rule == ZERO_STEP:
            ok = (len(premises) == 1 and premises[0][1] == 0
                  and key == (premises[0][0] & ~premises[0][2], 0, 0))
        elif rule == EMPTY_TARGET:
            ok = (len(premises) == 1 and premises[0][2] == 0
                  and key == (premises[0][0], 0, 0))
        else:
            ok = False
        if not ok:
            problems.append(f"{key}: rule {rule} does not justify this step")
    return problems
