"""Two small hand-built systems used across tests, docs, and the CLI.

`T0` has eight states over six views and exercises every interesting cell of
the navigability table: unreachable targets, corridor effects, and the
amnesic/recall gap.  `T1` is the minimal example where recall strictly beats
amnesia: two states share the middle view but need opposite instructions, so
no single memoryless choice serves both start views at once.
"""

from __future__ import annotations

from .core import EpistemicTransitionSystem
from .syntax import parse_system

__all__ = ["T0_ETS", "T1_ETS", "load_t0", "load_t1", "FIXTURES"]

T0_ETS = """\
# eight states, six views, two instructions
views v1 v2 v3 v4 v5 v6
instructions 0 1
state a v1
state b v2
state c v3
state d v4
state e v3
state f v5
state g v1
state h v6
trans a 0 h
trans a 1 b
trans b 0 a
trans b 1 c
trans c 0 b
trans c 1 d
trans d 0 d
trans d 1 d
trans e 0 d
trans e 1 f
trans f 0 g
trans f 1 e
trans g 0 h
trans g 1 f
trans h 0 g
trans h 1 a
"""

T1_ETS = """\
# five states, four views; c and e share view vc but need opposite moves
views vb vc vd vf
instructions 0 1
state b vb
state c vc
state d vd
state e vc
state f vf
trans b 0 c
trans b 1 c
trans c 0 b
trans c 1 d
trans e 0 d
trans e 1 f
trans f 0 e
trans f 1 e
"""


def load_t0() -> EpistemicTransitionSystem:
    return parse_system(T0_ETS)


def load_t1() -> EpistemicTransitionSystem:
    return parse_system(T1_ETS)


FIXTURES = {"t0": T0_ETS, "t1": T1_ETS}
