import json
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from rewrite_helpers import colored, cofacial, entry_6_2
from foxpalette.modp import AffineMap, Prime
from foxpalette.coloring import coloring_space, determinant
from foxpalette.rewrite.moves import (Move, MoveError, apply_move, candidate_moves, r1_add,
                                      r1_remove, r2_pull, r2_push, r3_slide)
from foxpalette.rewrite.phases import (CLEAR_OVER_0, CLEAR_TRIV_6, CLEAR_OVER_1, PIPELINE_B, SIX,
                                       TARGET_A, count_over)
from foxpalette.rewrite.reduce import (create_color, normalize_image, recolor_state,
                                       reduce_to_five)
from foxpalette.rewrite.search import (BudgetExhausted, InvariantChecker, PreconditionError,
                                       RewriteTrace, detour_over, detour_route, eliminate_phase)
from foxpalette.rewrite.state import ColoredDiagram, InvalidColoring


def new_crossing_colors(before, after):
    return sorted(after.crossing_color(c) for c in set(after.diagram.crossings) - set(before.diagram.crossings))


def test_kink_on_4_arc():
    cd = entry_6_2()
    e = min(e for e, c in cd.colors.items() if c == 4)
    for side in (1, 3):
        for of in (True, False):
            k = r1_add(cd, e, side, of)
            assert new_crossing_colors(cd, k) == [(4, 4, 4)]
            assert k.image == cd.image
            c = max(k.diagram.crossings)
            assert r1_remove(k, c).hash == cd.hash


def test_push_4_over_0():
    cd = entry_6_2()
    pair = cofacial(cd, 4, 0)
    assert pair is not None
    t = r2_push(cd, pair[0], pair[1], over=True)
    assert sorted(set(new_crossing_colors(cd, t))) == [(0, 4, 8), (8, 4, 0)] or \
        {tuple(sorted((a, b))) + (c,) for a, c, b in new_crossing_colors(cd, t)} == {(0, 8, 4)}
    assert not t.violations()


def test_push_equal_colors_trivial():
    cd = entry_6_2()
    # a kink splits an edge into same-colored pieces that share faces
    cd = r1_add(cd, min(cd.colors), 1, True)
    D = cd.diagram
    for f in D.faces():
        for a in f:
            for b in f:
                ea, eb = D.crossings[a[0]][a[1]], D.crossings[b[0]][b[1]]
                if ea != eb and cd.colors[ea] == cd.colors[eb]:
                    x = cd.colors[ea]
                    t = r2_push(cd, a, b, True)
                    assert new_crossing_colors(cd, t) == [(x, x, x)] * 2
                    return
    pytest.skip("no same-colored co-facial pair")


def test_push_1_under_6_creates_0():
    cd = recolor_state(colored("6_2", 11), AffineMap(9, 8, Prime(11)))
    pair = cofacial(cd, 1, 6)
    assert pair is not None
    t = r2_push(cd, pair[0], pair[1], over=False)
    cols = new_crossing_colors(cd, t)
    assert all(c[1] == 6 and {c[0], c[2]} == {1, 0} for c in cols)


def test_push_then_pull_is_identity():
    cd = entry_6_2()
    D = cd.diagram
    f = next(f for f in D.faces() if len(f) >= 3)
    t = r2_push(cd, f[0], f[1], over=True)
    bigons = [g for g in t.diagram.faces() if len(g) == 2]
    back = [r2_pull(t, g[0]) for g in bigons if _pullable(t, g)]
    assert any(b.hash == cd.hash for b in back)


def _pullable(t, g):
    try:
        r2_pull(t, g[0])
        return True
    except MoveError:
        return False


def test_r2_rejects_non_cofacial():
    cd = entry_6_2()
    faces = cd.diagram.faces()
    a = faces[0][0]
    b = next(d for f in faces for d in f if d not in faces[0]
             and cd.diagram.crossings[d[0]][d[1]] not in {cd.diagram.crossings[x[0]][x[1]] for x in faces[0]})
    with pytest.raises(MoveError):
        r2_push(cd, a, b, True)


def test_r3_requires_triangle():
    cd = entry_6_2()
    f = next(f for f in cd.diagram.faces() if len(f) != 3)
    with pytest.raises(MoveError):
        r3_slide(cd, f[0])


def test_invalid_coloring_rejected():
    cd = entry_6_2()
    bad = dict(cd.colors)
    bad[min(bad)] = (bad[min(bad)] + 1) % 11
    with pytest.raises(InvalidColoring):
        ColoredDiagram(cd.diagram, bad, 11)


@pytest.mark.parametrize("moving,forbidden,allowed", [
    (4, {6}, {(0, 4, 8), (1, 4, 7), (4, 4, 4), (7, 4, 1), (8, 4, 0)}),
    (0, {6}, {(0, 0, 0), (1, 0, 10), (4, 0, 7), (7, 0, 4), (8, 0, 3)}),
])
def test_detour_colors(moving, forbidden, allowed):
    cd = entry_6_2()
    m = min(e for e, c in cd.colors.items() if c == moving)
    for target in sorted(e for e, c in cd.colors.items() if c != moving):
        try:
            route = detour_route(cd, m, target, forbidden)
        except Exception:
            continue
        t, tip = detour_over(cd, m, target, forbidden)
        assert t.colors[tip] == moving
        new = new_crossing_colors(cd, t)
        assert len(new) == 2 * len(route)
        for a, c, b in new:
            assert c == moving and ((a, c, b) in allowed or (b, c, a) in allowed)
        # tip now shares a face with the target edge
        D = t.diagram
        assert any({D.crossings[x][y] for x, y in f} >= {tip} and
                   any(D.crossings[x][y] in (target,) or t.colors[D.crossings[x][y]] == cd.colors[target]
                       for x, y in f) for f in D.faces())


def test_create_color_examples():
    cd = entry_6_2()
    a = reduce_to_five(cd, "A").state
    assert 0 not in a.image
    t, tr = create_color(a, 0)
    assert t.image == SIX and len(tr) == 1
    same, tr2 = create_color(t, 0)
    assert same is t and len(tr2) == 0


def test_eliminate_conforming_is_empty():
    cd = entry_6_2()
    assert CLEAR_TRIV_6.satisfied(cd)
    s, tr = eliminate_phase(cd, CLEAR_TRIV_6, budget=10)
    assert s is cd and len(tr) == 0


def test_clear_over_0_phase():
    cd = entry_6_2()
    s, tr = eliminate_phase(cd, CLEAR_OVER_0, budget=20_000)
    assert count_over(s, 0) == 0 and s.image == SIX
    assert tr.replay().hash == s.hash


def test_budget_vs_precondition():
    cd = entry_6_2()
    with pytest.raises(BudgetExhausted) as ei:
        eliminate_phase(cd, CLEAR_OVER_1, budget=50)
    assert ei.value.state is not None and ei.value.phase == "clear-over-1"
    a = reduce_to_five(cd, "A").state
    with pytest.raises(PreconditionError):
        eliminate_phase(recolor_state(a, AffineMap(2, 1, Prime(11))),
                        CLEAR_OVER_1, budget=50)
    assert not issubclass(BudgetExhausted, PreconditionError)


def test_reduce_identity_at_target():
    cd = entry_6_2()
    a = reduce_to_five(cd, "A")
    again = reduce_to_five(a.state, "A")
    assert len(again.trace) == 0 and again.state is a.state


def test_reduce_requires_entry_image():
    cd = colored("6_2", 11)
    with pytest.raises(PreconditionError):
        reduce_to_five(cd, "A")


def test_normalize_identity():
    cd = entry_6_2()
    r = normalize_image(cd)
    assert len(r.trace) == 0 and r.state.image == SIX


def test_trace_json_roundtrip_and_tamper():
    cd = entry_6_2()
    res = reduce_to_five(cd, "A")
    obj = json.loads(json.dumps(res.trace.to_json()))
    assert set(obj) >= {"initial", "moves", "final"}
    assert set(obj["moves"][0]) == {"kind", "site", "image_after", "hash_after"}
    tr = RewriteTrace.from_json(obj)
    assert tr.replay(InvariantChecker(cd)).hash == res.state.hash
    obj["moves"][-1]["hash_after"] = "0" * 16
    with pytest.raises(Exception):
        RewriteTrace.from_json(obj).replay()


def test_budget_env(monkeypatch):
    from foxpalette.rewrite.search import default_budget
    monkeypatch.setenv("FOXPALETTE_BUDGET", "123")
    assert default_budget() == 123
    monkeypatch.setenv("FOXPALETTE_BUDGET", "x")
    with pytest.raises(PreconditionError):
        default_budget()


START = {}


def _start(name):
    if name not in START:
        START[name] = colored(name, {"trefoil": 3, "figure8": 5, "6_2": 11}[name])
    return START[name]


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(["trefoil", "figure8", "6_2"]), st.lists(st.integers(0, 10**6), max_size=12))
def test_random_moves_preserve_invariants(name, picks):
    s = _start(name)
    ck = InvariantChecker(s)
    for k in picks:
        moves = candidate_moves(s, kinks=len(s) < 12)
        for j in range(len(moves)):
            try:
                s = apply_move(s, moves[(k + j) % len(moves)])
                break
            except MoveError:
                continue
        ck.boundary(s)
