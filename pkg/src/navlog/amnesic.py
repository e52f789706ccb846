"""Forgetful-agent navigability: existence of a per-view instruction choice.

`check_atom_amnesic` decides whether SOME strategy (one instruction per view,
no memory) drives every maximal run from the start views through the corridor
into the target.  The search assigns instructions lazily, only to views the
exploration actually consults: a partial assignment that already exhibits a
counterexample among consulted views rules out all of its completions, and a
partial assignment under which every run succeeds settles the atom because
unconsulted views are never reached (the agreement property of strategies,
restricted to consulted views).  Verdicts are deterministic: start states,
successors and candidate instructions are always scanned in declaration
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import AmnesicStrategy, EpistemicTransitionSystem
from .syntax import Atom, AtomNode, Formula, Implies, Not
from . import recall as _recall

__all__ = [
    "AmnesicDecision", "check_atom_amnesic", "evaluate",
    "NavigabilityTable", "navigability_table",
]

_UNSEEN, _ON_PATH, _SAFE = 0, 1, 2
_SKIP, _FAIL, _PUSHED = -1, -2, -3


@dataclass(frozen=True)
class AmnesicDecision:
    """Outcome of one atom under forgetful semantics.

    `witness` is present exactly when the atom holds and replays cleanly
    through check_strategy.  `strategies_examined` counts partial assignments
    that reached a definite verdict during the search (each stands for a whole
    class of total strategies).
    """

    holds: bool
    witness: Optional[AmnesicStrategy]
    strategies_examined: int
    note: Optional[str] = None


class _Solver:
    """Backtracking search over partial strategies.

    Restarts the corridor exploration after each assignment, but keeps
    "safe" marks (states whose every run already verified) on a trail so a
    restart skips finished regions; marks are rolled back when the
    assignment they depended on is undone.
    """

    def __init__(self, system: EpistemicTransitionSystem,
                 start: int, corridor: int, target: int,
                 fixed: Optional[dict[int, int]] = None):
        self.obs = system._obs_mask
        self.view_of = system._observation
        self.table = system._succ
        self.n_instr = len(system.instructions)
        self.a_mask, self.b_mask, self.c_mask = start, corridor, target
        self.roots = [k for k in range(len(system.states)) if self.obs[k] & start]
        self.sigma: list[Optional[int]] = [None] * len(system.universe)
        if fixed:
            for v, i in fixed.items():
                self.sigma[v] = i
        self.status = [_UNSEEN] * len(system.states)
        self.trail: list[int] = []
        self.path: list[int] = []
        self.iters: list = []
        self.examined = 0

    def _enter(self, u: int) -> int:
        """SKIP/FAIL/PUSHED, or a view index (>= 0) that needs an instruction."""
        m = self.obs[u]
        if m & self.c_mask:
            return _SKIP
        if not m & self.b_mask:
            return _FAIL
        st = self.status[u]
        if st == _SAFE:
            return _SKIP
        if st == _ON_PATH:
            return _FAIL
        v = self.view_of[u]
        ins = self.sigma[v]
        if ins is None:
            return v
        nxt = self.table[u][ins]
        if not nxt:
            return _FAIL
        self.status[u] = _ON_PATH
        self.path.append(u)
        self.iters.append(iter(nxt))
        return _PUSHED

    def _unwind(self) -> None:
        for u in self.path:
            self.status[u] = _UNSEEN
        self.path.clear()
        self.iters.clear()

    def _attempt(self) -> int:
        """Explore under the current partial assignment.

        Returns _SKIP when every run verifies, _FAIL on a counterexample,
        or the first consulted view that lacks an instruction.
        """
        path, iters, status, trail = self.path, self.iters, self.status, self.trail
        for root in self.roots:
            r = self._enter(root)
            if r == _FAIL or r >= 0:
                self._unwind()
                return r
            while path:
                child = next(iters[-1], -1)
                if child < 0:
                    done = path.pop()
                    iters.pop()
                    status[done] = _SAFE
                    trail.append(done)
                    continue
                r = self._enter(child)
                if r == _FAIL or r >= 0:
                    self._unwind()
                    return r
        return _SKIP

    def solve(self) -> bool:
        r = self._attempt()
        if r == _SKIP:
            self.examined += 1
            return True
        if r == _FAIL:
            self.examined += 1
            return False
        v = r
        mark = len(self.trail)
        for i in range(self.n_instr):
            self.sigma[v] = i
            if self.solve():
                return True
            while len(self.trail) > mark:
                self.status[self.trail.pop()] = _UNSEEN
        self.sigma[v] = None
        return False


def _solve_partial(system: EpistemicTransitionSystem, start: int, corridor: int,
                   target: int, fixed: dict[int, int]) -> tuple[Optional[dict[int, int]], int]:
    """First successful assignment extending `fixed` (declaration-ordered
    search), or None; plus the number of definite verdicts reached."""
    solver = _Solver(system, start, corridor, target, fixed)
    if solver.solve():
        found = {v: i for v, i in enumerate(solver.sigma) if i is not None}
        return found, solver.examined
    return None, solver.examined


def check_atom_amnesic(system: EpistemicTransitionSystem, atom: Atom,
                       canonical_witness: bool = True) -> AmnesicDecision:
    """Decide one atom for a forgetful agent.

    With `canonical_witness` (the default) a positive verdict reports the
    lexicographically least successful strategy under view declaration order,
    found by fixing each view in turn to its least workable instruction;
    views the objective never consults end up with instruction index 0.
    Passing False skips that minimization and reports the raw assignment the
    search found first (still a valid witness) -- useful in bulk sweeps where
    only the verdict matters.  No results are cached across atoms.
    """
    start, corridor, target = atom.masks(system.universe)
    note = None
    if not any(m & start for m in system._obs_mask):
        note = "no state observes a start view; holds vacuously"
    found, examined = _solve_partial(system, start, corridor, target, {})
    if found is None:
        return AmnesicDecision(False, None, examined)
    n_views = len(system.universe)
    if canonical_witness:
        fixed: dict[int, int] = {}
        for v in range(n_views):
            for i in range(len(system.instructions)):
                fixed[v] = i
                sol, more = _solve_partial(system, start, corridor, target, fixed)
                examined += more
                if sol is not None:
                    break
            else:
                raise AssertionError("witness vanished during minimization")
        choices = tuple(fixed[v] for v in range(n_views))
    else:
        choices = tuple(found.get(v, 0) for v in range(n_views))
    return AmnesicDecision(True, AmnesicStrategy(choices), examined, note)


def evaluate(system: EpistemicTransitionSystem, formula: Formula) -> bool:
    """Truth of a formula: atoms under forgetful semantics, connectives classical."""
    if isinstance(formula, AtomNode):
        return check_atom_amnesic(system, formula.atom, canonical_witness=False).holds
    if isinstance(formula, Not):
        return not evaluate(system, formula.operand)
    if isinstance(formula, Implies):
        return (not evaluate(system, formula.antecedent)) or evaluate(system, formula.consequent)
    raise TypeError(f"not a formula: {formula!r}")


@dataclass(frozen=True)
class NavigabilityTable:
    """Pairwise unrestricted navigability between view classes.

    Cell [row][col]: 'a' when a forgetful strategy reaches col from row,
    else 'r' when a perfect-recall agent can, else '-'.
    """

    classes: tuple[str, ...]
    grid: tuple[tuple[str, ...], ...]

    def render(self) -> str:
        width = max((len(c) for c in self.classes), default=1)
        head = " " * (width + 2) + "  ".join(c.rjust(width) for c in self.classes)
        rows = [head]
        for name, cells in zip(self.classes, self.grid):
            rows.append(name.ljust(width + 2) + "  ".join(c.rjust(width) for c in cells))
        return "\n".join(rows)


def navigability_table(system: EpistemicTransitionSystem, classes: Sequence[str],
                       modes: Sequence[str] = ("amnesic", "recall")) -> NavigabilityTable:
    """Grid of nav({row}; ALL; {col}) verdicts over the given view classes."""
    universe = system.universe
    for mode in modes:
        if mode not in ("amnesic", "recall"):
            raise ValueError(f"unknown mode {mode!r}")
    grid = []
    for row in classes:
        cells = []
        for col in classes:
            atom = Atom.over(universe, [row], universe.names, [col])
            if "amnesic" in modes and check_atom_amnesic(
                    system, atom, canonical_witness=False).holds:
                cells.append("a")
            elif "recall" in modes and _recall.check_atom_recall(system, atom).holds:
                cells.append("r")
            else:
                cells.append("-")
        grid.append(tuple(cells))
    return NavigabilityTable(tuple(classes), tuple(grid))
