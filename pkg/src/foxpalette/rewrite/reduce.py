"""Entry normalization and the two five-color reduction pipelines (p = 11)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..modp import AffineMap, all_affine_maps
from .moves import Move, MoveError, apply_move
from .phases import PIPELINE_A, PIPELINE_B, SIX, TARGET_A, TARGET_B, PhaseGoal
from .search import (DEFAULT_DEPTH, BudgetExhausted, GadgetCache, InvariantChecker,
                     PreconditionError, RewriteError, RewriteTrace, SearchStats,
                     default_budget, eliminate_phase)
from .state import ColoredDiagram

TARGETS = {"A": TARGET_A, "B": TARGET_B}
PIPELINES = {TARGET_A: PIPELINE_A, TARGET_B: PIPELINE_B}


class NormalizationObstruction(PreconditionError):
    """No affine map sends the image into {0,1,4,6,7,8}."""


@dataclass
class ReductionResult:
    state: ColoredDiagram
    trace: RewriteTrace
    recolor: AffineMap | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    phase_log: list = field(default_factory=list)

    def to_json(self):
        return {
            "image": sorted(self.state.image),
            "crossings": len(self.state),
            "moves": len(self.trace),
            "recolor": str(self.recolor) if self.recolor else None,
            "nodes": self.stats.nodes,
            "gadgets": self.stats.gadgets,
            "phases": self.phase_log,
        }


def recolor_state(cd: ColoredDiagram, f: AffineMap) -> ColoredDiagram:
    return ColoredDiagram(cd.diagram, {e: f(c) for e, c in cd.colors.items()}, cd.p)


def affine_into(image, target=SIX, p=11):
    """First affine map (ordered by slope, then shift) sending ``image`` into ``target``."""
    image = set(image)
    for f in all_affine_maps(p):
        if f.image(image) <= target:
            return f
    return None


def _creation_sites(cd: ColoredDiagram, target: int):
    """Co-facial (a-dart, c-dart) pairs with 2c - a = target, lowest ids first."""
    D = cd.diagram
    p = cd.p
    out = []
    for f in D.faces():
        for i, da in enumerate(f):
            for j, dc in enumerate(f):
                if i == j:
                    continue
                ea, ec = D.crossings[da[0]][da[1]], D.crossings[dc[0]][dc[1]]
                a, c = cd.colors[ea], cd.colors[ec]
                if ea != ec and a != c and (2 * c - a) % p == target % p:
                    out.append((da, dc))
    return sorted(set(out))


def create_color(cd: ColoredDiagram, target: int, trace=None, checker=None, budget=None,
                 depth=DEFAULT_DEPTH, stats=None):
    """Make ``target`` appear in the image by pushing an a-strand under a co-facial c-strand.

    Falls back to a gadget search for the image goal when no such pair shares a face.
    """
    target %= cd.p
    trace = trace if trace is not None else RewriteTrace(cd)
    if target in cd.image:
        return cd, trace
    for da, dc in _creation_sites(cd, target):
        mv = Move("R2+", {"moving": da, "target": dc, "over": False})
        try:
            state = apply_move(cd, mv)
        except MoveError:
            continue
        if checker is not None:
            checker.step(state)
        trace.record(mv, state)
        return state, trace
    want = frozenset(cd.image | {target})
    goal = PhaseGoal(f"create-{target}", f"make color {target} appear", want, want, ())
    return eliminate_phase(cd, goal, budget, depth, radius=99, trace=trace,
                           checker=checker, stats=stats)


def normalize_image(cd: ColoredDiagram, budget=None, depth=DEFAULT_DEPTH):
    """Bring a nontrivial 11-coloring to image {0,1,4,6,7,8}.

    Step (a) recolors affinely; step (b) creates each missing color.  The
    recoloring is not a diagram move, so the trace starts at the recolored state.
    """
    if cd.p != 11:
        raise PreconditionError("normalization is defined for p = 11")
    if len(cd.image) < 2:
        raise PreconditionError("coloring is trivial")
    f = affine_into(cd.image)
    if f is None:
        raise NormalizationObstruction(
            f"image {sorted(cd.image)} is not affinely inside {sorted(SIX)}")
    state = recolor_state(cd, f)
    trace = RewriteTrace(state)
    checker = InvariantChecker(state)
    stats = SearchStats()
    for t in sorted(SIX - state.image):
        state, trace = create_color(state, t, trace, checker, budget, depth, stats)
    if state.image != SIX:
        raise RewriteError(f"normalization ended with image {sorted(state.image)}")
    checker.boundary(state)
    return ReductionResult(state, trace, f, stats)


def reduce_to_five(cd: ColoredDiagram, target, budget=None, depth=DEFAULT_DEPTH, radius=1,
                   cache=None, on_phase=None):
    """Run the phase pipeline for ``target`` (a set, or "A"/"B") from image {0,1,4,6,7,8}.

    ``budget`` applies to each phase.  Raises :class:`BudgetExhausted` with the
    best state and partial trace when a phase cannot finish.
    """
    target = TARGETS.get(target, target)
    target = frozenset(target)
    if target not in PIPELINES:
        raise PreconditionError(f"unknown target {sorted(target)}")
    if cd.p != 11:
        raise PreconditionError("reduction is defined for p = 11")
    trace = RewriteTrace(cd)
    stats = SearchStats()
    if cd.image == target:
        return ReductionResult(cd, trace, None, stats)
    if cd.image != SIX:
        raise PreconditionError(f"entry image must be {sorted(SIX)}, got {sorted(cd.image)}")
    budget = default_budget() if budget is None else budget
    checker = InvariantChecker(cd)
    cache = cache if cache is not None else GadgetCache()
    state = cd
    log = []
    for goal in PIPELINES[target]:
        n0, k0 = stats.nodes, len(trace)
        try:
            state, trace = eliminate_phase(state, goal, budget, depth, radius, cache,
                                           trace, checker, stats)
        finally:
            log.append({"phase": goal.name, "moves": len(trace) - k0, "nodes": stats.nodes - n0,
                        "satisfied": goal.satisfied(state), "image": sorted(state.image),
                        "crossings": len(state)})
            if on_phase is not None:
                on_phase(log[-1])
    if state.image != target:
        raise RewriteError(f"pipeline ended with image {sorted(state.image)}")
    return ReductionResult(state, trace, None, stats, log)


__all__ = ["NormalizationObstruction", "ReductionResult", "TARGETS", "affine_into",
           "create_color", "normalize_image", "recolor_state", "reduce_to_five", "BudgetExhausted"]
