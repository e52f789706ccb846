import random

import pytest

from navlog.core import EpistemicTransitionSystem
from navlog.fixtures import load_t0, load_t1

# Pairwise navigability of the eight-state fixture over its six view classes,
# corridor unrestricted: rows are start classes, columns target classes;
# 'a' amnesically navigable, 'r' only with perfect recall, '-' neither.
T0_GRID = {
    "v1": "a r a r r a",
    "v2": "a a a a r a",
    "v3": "- - a r - -",
    "v4": "- - - a - -",
    "v5": "a r a a a a",
    "v6": "a a a a a a",
}


@pytest.fixture(scope="session")
def t0() -> EpistemicTransitionSystem:
    return load_t0()


@pytest.fixture(scope="session")
def t1() -> EpistemicTransitionSystem:
    return load_t1()


def small_random_system(rng: random.Random, max_views: int = 3,
                        max_instructions: int = 2, max_states: int = 4,
                        density: float = 0.5) -> EpistemicTransitionSystem:
    """Tiny independent generator for property tests.

    Deliberately not navlog.fuzz.generate_random_system, so tests of that
    function have something to disagree with.
    """
    n_views = rng.randint(1, max_views)
    views = tuple(f"v{k}" for k in range(n_views))
    instructions = tuple(str(i) for i in range(rng.randint(1, max_instructions)))
    states = [(f"s{j}", views[rng.randrange(n_views)])
              for j in range(rng.randint(1, max_states))]
    transitions = []
    for name, _ in states:
        for instr in instructions:
            for other, _ in states:
                if rng.random() < density:
                    transitions.append((name, instr, other))
    return EpistemicTransitionSystem.build(views, instructions, states, transitions)
