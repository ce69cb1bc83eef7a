"""Phase elimination by bounded gadget search, with traces and invariant checks.

A *gadget* is a short sequence of primitive moves that lowers a phase's
measure.  Gadgets are found by best-first search over moves near the
offending sites and are cached for reuse on identical states.
"""

from __future__ import annotations

import heapq
import itertools
import os
from collections import deque
from dataclasses import dataclass, field

from ..coloring import coloring_rank, determinant
from ..modp import Prime
from .moves import Move, MoveError, apply_move, r2_push, _face_of
from .phases import PhaseGoal
from .state import ColoredDiagram

DEFAULT_DEPTH = 12
DEFAULT_BUDGET = 100_000
BUDGET_ENV = "FOXPALETTE_BUDGET"


class RewriteError(RuntimeError):
    pass


class PreconditionError(RewriteError):
    """The input state does not meet the phase's entry condition."""


class BudgetExhausted(RewriteError):
    """Search ran out of primitive-move budget; carries the best state reached."""

    def __init__(self, msg, state=None, trace=None, phase=None):
        super().__init__(msg)
        self.state = state
        self.trace = trace
        self.phase = phase


class InvariantViolation(RewriteError):
    pass


class DetourError(RewriteError):
    def __init__(self, msg, cut=()):
        super().__init__(msg)
        self.cut = tuple(cut)


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        val = int(raw)
    except ValueError:
        raise PreconditionError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    if val <= 0:
        raise PreconditionError(f"{BUDGET_ENV} must be positive")
    return val


# -- traces --------------------------------------------------------------------

@dataclass
class TraceStep:
    move: Move
    image_after: tuple
    hash_after: str

    def to_json(self):
        return {"kind": self.move.kind, "site": self.move.to_json()["site"],
                "image_after": list(self.image_after), "hash_after": self.hash_after}


@dataclass
class RewriteTrace:
    initial: ColoredDiagram
    steps: list = field(default_factory=list)
    final: ColoredDiagram | None = None
    phases: list = field(default_factory=list)   # (phase name, first step, last step)

    def __post_init__(self):
        if self.final is None:
            self.final = self.initial

    def __len__(self):
        return len(self.steps)

    def record(self, move: Move, state: ColoredDiagram):
        self.steps.append(TraceStep(move, tuple(sorted(state.image)), state.hash))
        self.final = state

    def to_json(self):
        return {
            "initial": self.initial.to_json(),
            "initial_hash": self.initial.hash,
            "moves": [s.to_json() for s in self.steps],
            "final": self.final.to_json(),
            "final_hash": self.final.hash,
            "phases": [{"name": n, "start": a, "end": b} for n, a, b in self.phases],
        }

    @classmethod
    def from_json(cls, obj):
        init = ColoredDiagram.from_json(obj["initial"])
        steps = [TraceStep(Move(m["kind"], m["site"]), tuple(m["image_after"]), m["hash_after"])
                 for m in obj["moves"]]
        final = ColoredDiagram.from_json(obj["final"])
        phases = [(p["name"], p["start"], p["end"]) for p in obj.get("phases", [])]
        return cls(init, steps, final, phases)

    def replay(self, checker=None) -> ColoredDiagram:
        """Re-apply every move from the initial state, checking each recorded hash."""
        state = self.initial
        for i, step in enumerate(self.steps):
            state = apply_move(state, Move.from_json(step.move.to_json()))
            if state.hash != step.hash_after:
                raise InvariantViolation(f"replay diverged at step {i} ({step.move})")
            if tuple(sorted(state.image)) != tuple(step.image_after):
                raise InvariantViolation(f"image mismatch at step {i}")
            if checker is not None:
                checker.step(state)
        if state.hash != self.final.hash:
            raise InvariantViolation("replay does not reach the recorded final state")
        return state


# -- invariants ------------------------------------------------------------------

class InvariantChecker:
    """Checks that hold for every state; rank and determinant only at boundaries."""

    def __init__(self, cd: ColoredDiagram):
        D = cd.diagram
        self.p = cd.p
        self.rank = coloring_rank(D, cd.p)
        self.det = determinant(D)
        self.min_image = Prime(cd.p).log2_bound()
        self.states = 0

    def step(self, cd: ColoredDiagram):
        self.states += 1
        bad = cd.violations()
        D = cd.diagram
        if len(D.faces()) != len(D) + 2:
            bad.append("Euler face count fails")
        bad += cd.palette_violations()
        if len(cd.image) > 1 and len(cd.image) < self.min_image:
            bad.append(f"#Im={len(cd.image)} below the lower bound {self.min_image}")
        if bad:
            raise InvariantViolation("; ".join(bad))

    def boundary(self, cd: ColoredDiagram):
        self.step(cd)
        D = cd.diagram
        rank = coloring_rank(D, cd.p)
        det = determinant(D)
        if rank != self.rank or det != self.det:
            raise InvariantViolation(f"rank/determinant changed: {rank}/{det} vs {self.rank}/{self.det}")


# -- local move generation -------------------------------------------------------

def _dart_faces(D):
    faces = D.faces()
    edge_faces = {}
    for i, f in enumerate(faces):
        for c, s in f:
            edge_faces.setdefault(D.crossings[c][s], set()).add(i)
    return faces, edge_faces


def local_moves(cd: ColoredDiagram, hot_edges, radius=1, kinks=False):
    """Moves on faces within ``radius`` steps of the hot edges, plus every R1-."""
    D = cd.diagram
    faces, edge_faces = _dart_faces(D)
    near = set()
    for e in hot_edges:
        near |= edge_faces.get(e, set())
    for _ in range(radius):
        grown = set(near)
        for i in near:
            for c, s in faces[i]:
                grown |= edge_faces[D.crossings[c][s]]
        near = grown
    out = []
    for c in sorted(D.crossings):
        s = D.crossings[c]
        if any(s[i] == s[(i + 1) % 4] for i in range(4)):
            out.append(Move("R1-", {"crossing": c}))
    for i in sorted(near):
        f = faces[i]
        if len(f) == 2:
            out.append(Move("R2-", {"face": f[0]}))
        elif len(f) == 3:
            out.append(Move("R3", {"face": f[0]}))
        for a in range(len(f)):
            for b in range(a + 1, len(f)):
                if D.crossings[f[a][0]][f[a][1]] == D.crossings[f[b][0]][f[b][1]]:
                    continue
                for over in (True, False):
                    out.append(Move("R2+", {"moving": f[a], "target": f[b], "over": over}))
    if kinks:
        for e in sorted(hot_edges):
            for side in (1, 3):
                for of in (True, False):
                    out.append(Move("R1+", {"edge": e, "side": side, "over_first": of}))
    return out


@dataclass
class SearchStats:
    nodes: int = 0
    gadgets: int = 0
    cache_hits: int = 0


class GadgetCache:
    """Maps (phase, state hash) to the gadget found there."""

    def __init__(self):
        self._by_state = {}

    def get(self, phase, cd):
        return self._by_state.get((phase, cd.hash))

    def put(self, phase, cd, moves):
        self._by_state[(phase, cd.hash)] = list(moves)

    def __len__(self):
        return len(self._by_state)


def find_gadget(cd, goal: PhaseGoal, depth=DEFAULT_DEPTH, node_limit=DEFAULT_BUDGET,
                radius=1, growth=8, kinks=False, stats=None):
    """Best-first search for a move sequence that strictly lowers ``goal.measure``.

    Intermediate states must stay inside the phase palette.  Returns the move
    list or ``None`` when the node limit or the depth bound is reached.
    """
    stats = stats or SearchStats()
    m0 = goal.measure(cd)
    tick = itertools.count()
    heap = [(m0, 0, next(tick), cd, ())]
    seen = {cd.diagram.canonical_key(cd.colors)}
    cap = len(cd) + growth
    while heap:
        m, d, _, s, path = heapq.heappop(heap)
        if m < m0:
            return list(path)
        if d >= depth:
            continue
        for mv in local_moves(s, goal.hot_edges(s), radius, kinks):
            if stats.nodes >= node_limit:
                return None
            try:
                t = apply_move(s, mv)
            except MoveError:
                continue
            stats.nodes += 1
            if not goal.admissible(t) or len(t) > cap:
                continue
            key = t.diagram.canonical_key(t.colors)
            if key in seen:
                continue
            seen.add(key)
            heapq.heappush(heap, (goal.measure(t), d + 1, next(tick), t, path + (mv,)))
    return None


def eliminate_phase(cd: ColoredDiagram, goal: PhaseGoal, budget=None, depth=DEFAULT_DEPTH,
                    radius=1, cache=None, trace=None, checker=None, stats=None):
    """Drive ``goal.measure`` to zero; returns ``(state, trace)``.

    ``budget`` bounds the primitive moves tried by the searches of this phase.
    """
    budget = default_budget() if budget is None else budget
    if not goal.admissible(cd):
        raise PreconditionError(f"{goal.name}: image {sorted(cd.image)} leaves the palette")
    trace = trace if trace is not None else RewriteTrace(cd)
    checker = checker or InvariantChecker(cd)
    cache = cache if cache is not None else GadgetCache()
    stats = stats or SearchStats()
    start_nodes, start_len = stats.nodes, len(trace)
    state = cd
    while goal.measure(state) > 0:
        left = budget - (stats.nodes - start_nodes)
        moves = cache.get(goal.name, state)
        if moves is not None:
            stats.cache_hits += 1
        else:
            moves = None
            if left > 0:
                for r in (radius, radius + 1):
                    moves = find_gadget(state, goal, depth, start_nodes + budget, r, stats=stats)
                    if moves is not None or stats.nodes >= start_nodes + budget:
                        break
            if moves is None:
                trace.phases.append((goal.name, start_len, len(trace)))
                raise BudgetExhausted(
                    f"{goal.name}: no gadget within budget {budget} "
                    f"(measure {goal.measure(state)}, {goal.breakdown(state)})",
                    state, trace, goal.name)
            cache.put(goal.name, state, moves)
        before = goal.measure(state)
        for mv in moves:
            state = apply_move(state, mv)
            checker.step(state)
            trace.record(mv, state)
        if goal.measure(state) >= before:
            raise InvariantViolation(f"{goal.name}: gadget did not lower the measure")
        stats.gadgets += 1
    if not goal.satisfied(state):
        raise InvariantViolation(f"{goal.name}: postcondition fails {goal.breakdown(state)}")
    checker.boundary(state)
    trace.phases.append((goal.name, start_len, len(trace)))
    return state, trace


# -- detours ---------------------------------------------------------------------

def _other_side(D, dart):
    return D.other_end(*dart)


def detour_route(cd: ColoredDiagram, moving_edge, target_edge, forbidden=()):
    """Shortest list of edges the moving strand must cross to share a face with the target.

    Crossing an edge colored y is admissible when neither y nor 2x-y is forbidden
    (x is the moving color).  Ties go to the lowest face index.
    """
    D = cd.diagram
    faces = D.faces()
    fid = {d: i for i, f in enumerate(faces) for d in f}
    p, x = cd.p, cd.colors[moving_edge]
    forbidden = {v % p for v in forbidden}
    edge = lambda d: D.crossings[d[0]][d[1]]
    starts = sorted({fid[d] for d in fid if edge(d) == moving_edge})
    goal = {fid[d] for d in fid if edge(d) == target_edge}
    prev = {i: None for i in starts}
    todo = deque(starts)
    cut = set()
    while todo:
        i = todo.popleft()
        if i in goal:
            path = []
            while prev[i] is not None:
                i, e = prev[i]
                path.append(e)
            return path[::-1]
        for d in faces[i]:
            e = edge(d)
            if e == moving_edge:
                continue
            y = cd.colors[e]
            if y in forbidden or (2 * x - y) % p in forbidden:
                cut.add(e)
                continue
            j = fid[_other_side(D, d)]
            if j not in prev:
                prev[j] = (i, e)
                todo.append(j)
    raise DetourError(f"no admissible route from edge {moving_edge} to edge {target_edge}",
                      sorted(cut))


def _common_face_darts(D, e, f):
    for dm in sorted(d for d in ((c, s) for c in D.crossings for s in range(4))
                     if D.crossings[d[0]][d[1]] == e):
        face = _face_of(D, dm)
        for dt in face:
            if D.crossings[dt[0]][dt[1]] == f:
                return dm, dt
    return None


def detour_over(cd: ColoredDiagram, moving_edge, target_edge, forbidden=(), trace=None,
                checker=None):
    """Push a finger of the moving edge over the strands on the shortest route to the target.

    Returns ``(state, tip_edge)``; the tip edge carries the moving color and
    shares a face with ``target_edge``.
    """
    route = detour_route(cd, moving_edge, target_edge, forbidden)
    state, tip = cd, moving_edge
    for e in route:
        D = state.diagram
        pair = _common_face_darts(D, tip, e)
        if pair is None:
            raise DetourError(f"route broke at edge {e}")
        mv = Move("R2+", {"moving": pair[0], "target": pair[1], "over": True})
        before = set(D.ends)
        state = apply_move(state, mv)
        new = sorted(set(state.diagram.ends) - before)
        tip = new[0]          # the finger tip is the first fresh edge id
        if checker is not None:
            checker.step(state)
        if trace is not None:
            trace.record(mv, state)
    return state, tip


__all__ = [
    "BUDGET_ENV", "BudgetExhausted", "DEFAULT_BUDGET", "DEFAULT_DEPTH", "DetourError",
    "GadgetCache", "InvariantChecker", "InvariantViolation", "PreconditionError",
    "RewriteError", "RewriteTrace", "SearchStats", "TraceStep", "default_budget",
    "detour_over", "detour_route", "eliminate_phase", "find_gadget", "local_moves",
    "r2_push",
]
