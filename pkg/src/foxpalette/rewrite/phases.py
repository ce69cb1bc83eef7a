"""Phase goals of the five-color reduction.

Each phase names the colors its states may use, the image it must end
with, and a progress measure that is zero exactly when the goal holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..palette import fmt_color
from .state import ColoredDiagram

SIX = frozenset({0, 1, 4, 6, 7, 8})
TARGET_A = frozenset({1, 4, 6, 7, 8})
TARGET_B = frozenset({0, 4, 6, 7, 8})
SEVEN = frozenset({0, 3, 4, 6, 7, 8, 10})
SIX_B = frozenset({0, 3, 4, 6, 7, 8})

# crossing colors allowed to touch 3 or 10 after the 1-removal phase
ALLOWED_3_10 = frozenset({(0, 3, 6), (0, 7, 3), (3, 0, 8), (4, 7, 10), (7, 3, 10), (3, 3, 3)})
FORBIDDEN_TRADE = frozenset({(3, 10, 6), (6, 8, 10), (10, 10, 10)})


def _unordered(t):
    a, c, b = t
    return (a, c, b) if a <= b else (b, c, a)


def count_trivial(cd: ColoredDiagram, color: int) -> int:
    return sum(1 for t in cd.crossing_colors().values() if t == (color, color, color))


def count_over(cd: ColoredDiagram, color: int) -> int:
    return sum(1 for t in cd.crossing_colors().values() if t[1] == color)


def count_arcs(cd: ColoredDiagram, color: int) -> int:
    col = cd.colors
    return sum(1 for a in cd.diagram.arc_list if col[a.edges[0]] == color)


def count_pattern(cd: ColoredDiagram, pattern) -> int:
    want = _unordered(pattern)
    return sum(1 for t in cd.crossing_colors().values() if _unordered(t) == want)


def bad_3_10(cd: ColoredDiagram) -> int:
    n = 0
    for t in cd.crossing_colors().values():
        if {3, 10} & set(t) and _unordered(t) not in ALLOWED_3_10:
            n += 1
    return n


@dataclass(frozen=True)
class PhaseGoal:
    name: str
    description: str
    palette: frozenset            # colors any intermediate state may use
    image: frozenset              # required image at the end of the phase
    terms: tuple                  # (label, fn(cd) -> int) summed into the measure
    checks: tuple = field(default=())  # extra boundary conditions (label, fn -> bool)
    hot: tuple = field(default=())     # ("over"|"triv"|"arc"|"bad310", color) site selectors

    def measure(self, cd: ColoredDiagram) -> int:
        missing = len(self.image - cd.image)
        return missing + sum(fn(cd) for _, fn in self.terms)

    def breakdown(self, cd: ColoredDiagram) -> dict:
        out = {"missing_colors": sorted(self.image - cd.image)}
        for label, fn in self.terms:
            out[label] = fn(cd)
        return out

    def admissible(self, cd: ColoredDiagram) -> bool:
        return cd.image <= self.palette

    def hot_crossings(self, cd: ColoredDiagram) -> list:
        """Crossings that currently count against the measure, lowest id first."""
        out = []
        for c, t in sorted(cd.crossing_colors().items()):
            for kind, col in self.hot:
                if ((kind == "over" and t[1] == col) or (kind == "triv" and t == (col, col, col))
                        or (kind == "arc" and col in t)
                        or (kind == "bad310" and {3, 10} & set(t) and _unordered(t) not in ALLOWED_3_10)):
                    out.append(c)
                    break
        return out

    def hot_edges(self, cd: ColoredDiagram) -> set:
        D = cd.diagram
        out = set()
        for c in self.hot_crossings(cd):
            out.update(D.crossings[c])
        for kind, col in self.hot:
            if kind == "arc":
                out.update(e for e, x in cd.colors.items() if x == col)
        return out

    def satisfied(self, cd: ColoredDiagram) -> bool:
        return (cd.image == self.image and self.measure(cd) == 0
                and all(fn(cd) for _, fn in self.checks))


def _no_color(c):
    return (f"{c}-arcs", lambda cd: count_arcs(cd, c))


def _triv(c):
    return (fmt_color(c, c, c), lambda cd: count_trivial(cd, c))


def _over(c):
    return (fmt_color("*", c, "*"), lambda cd: count_over(cd, c))


def _no_forbidden_trade(cd):
    return not any(_unordered(t) in FORBIDDEN_TRADE for t in cd.crossing_colors().values())


CLEAR_OVER_0 = PhaseGoal("clear-over-0", "no crossing with over-color 0", SIX, SIX, (_over(0),), hot=(("over", 0),))
DROP_0 = PhaseGoal("drop-0", "no 0-arc", SIX, TARGET_A, (_no_color(0),), hot=(("arc", 0),))
CLEAR_TRIV_6 = PhaseGoal("clear-666", "no {6|6|6}", SIX, SIX, (_triv(6),), hot=(("triv", 6),))
CLEAR_TRIV_1 = PhaseGoal("clear-111", "no {1|1|1} or {6|6|6}", SIX, SIX, (_triv(1), _triv(6)), hot=(("triv", 1), ("triv", 6)))
CLEAR_OVER_1 = PhaseGoal("clear-over-1", "no {*|1|*} or {6|6|6}", SIX, SIX, (_over(1), _triv(6)), hot=(("over", 1), ("triv", 6)))
TRADE_1 = PhaseGoal(
    "trade-1", "remove 1, creating 3 and 10 only at the listed crossing colors",
    SIX | SEVEN, SEVEN,
    (_no_color(1), _triv(6), ("bad-3/10-crossings", bad_3_10)),
    (("no {3|10|6},{6|8|10},{10|10|10}", _no_forbidden_trade),),
    hot=(("arc", 1), ("triv", 6), ("bad310", None)),
)
DROP_10 = PhaseGoal("drop-10", "no 10-arc", SEVEN, SIX_B, (_no_color(10), _triv(6)),
                     hot=(("arc", 10), ("triv", 6)))
CLEAR_TRIV_3_4 = PhaseGoal("clear-333-444", "no {3|3|3}, {4|4|4}, {6|6|6}", SIX_B, SIX_B,
                      (_triv(3), _triv(4), _triv(6)),
                      hot=(("triv", 3), ("triv", 4), ("triv", 6)))
CLEAR_OVER_3 = PhaseGoal("clear-over-3", "no {*|3|*}, {4|4|4}, {6|6|6}", SIX_B, SIX_B,
                      (_over(3), _triv(4), _triv(6)),
                      hot=(("over", 3), ("triv", 4), ("triv", 6)))
DROP_3 = PhaseGoal("drop-3", "no 3-arc", SIX_B, TARGET_B, (_no_color(3),), hot=(("arc", 3),))

PIPELINE_A = (CLEAR_OVER_0, DROP_0)
PIPELINE_B = (CLEAR_TRIV_6, CLEAR_TRIV_1, CLEAR_OVER_1, TRADE_1, DROP_10, CLEAR_TRIV_3_4, CLEAR_OVER_3, DROP_3)
