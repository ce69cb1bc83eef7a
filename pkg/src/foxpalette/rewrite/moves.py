"""Colored Reidemeister moves on PD diagrams.

Sites are given in terms of edge ids, crossing ids and darts ``(cid, slot)``
of the current state, and new ids are allocated deterministically (one past
the current maximum), so a recorded move sequence replays exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagram import Diagram, DiagramError
from .state import ColoredDiagram


class MoveError(ValueError):
    """The requested site does not admit the move."""


KINDS = ("R1+", "R1-", "R2+", "R2-", "R3")


@dataclass(frozen=True)
class Move:
    kind: str
    site: dict = field(hash=False)

    def to_json(self):
        return {"kind": self.kind, "site": _jsonable(self.site)}

    @classmethod
    def from_json(cls, obj):
        site = {k: tuple(v) if isinstance(v, list) else v for k, v in obj["site"].items()}
        return cls(obj["kind"], site)

    def __str__(self):
        args = ",".join(f"{k}={v}" for k, v in sorted(self.site.items()))
        return f"{self.kind}({args})"


def _jsonable(site):
    return {k: list(v) if isinstance(v, tuple) else v for k, v in site.items()}


def _next_id(D: Diagram):
    return max(D.ends, default=0) + 1


def _finish(cd: ColoredDiagram, crossings, over_in, colors):
    try:
        D = Diagram(crossings, over_in)
    except DiagramError as exc:
        raise MoveError(f"move produced an invalid diagram: {exc}") from None
    colors = {e: colors[e] for e in D.ends}
    return ColoredDiagram(D, colors, cd.p)


# -- R1 -----------------------------------------------------------------------

def r1_add(cd: ColoredDiagram, edge: int, side: int, over_first: bool) -> ColoredDiagram:
    """Put a kink on ``edge``; ``side`` (1 or 3) picks the slot the loop re-enters."""
    D = cd.diagram
    if edge not in D.ends:
        raise MoveError(f"no edge {edge}")
    if side not in (1, 3):
        raise MoveError("side must be 1 or 3")
    (c2, s2) = D.edge_tail_head[edge][1]
    nid = _next_id(D)
    loop, e2 = nid, nid + 1
    x = max(D.crossings) + 1
    k = side
    slots = [None] * 4
    if over_first:
        slots[k], slots[(k + 2) % 4], slots[0], slots[2] = edge, loop, loop, e2
    else:
        slots[0], slots[2], slots[k], slots[(k + 2) % 4] = edge, loop, loop, e2
    cr = dict(D.crossings)
    row = list(cr[c2])
    row[s2] = e2
    cr[c2] = tuple(row)
    cr[x] = tuple(slots)
    oi = dict(D.over_in)
    oi[x] = k
    col = dict(cd.colors)
    col[loop] = col[e2] = col[edge]
    return _finish(cd, cr, oi, col)


def _splice_out(cd: ColoredDiagram, dead: set):
    """Delete crossings, joining the strands straight through them."""
    D = cd.diagram
    if len(dead) >= len(D.crossings):
        raise MoveError("move would remove every crossing")
    th = D.edge_tail_head
    seq = D.traversal()
    i0 = next(i for i, e in enumerate(seq) if th[e][0][0] not in dead)
    seq = seq[i0:] + seq[:i0]
    cr = {c: list(s) for c, s in D.crossings.items() if c not in dead}
    col = dict(cd.colors)
    i = 0
    while i < len(seq):
        run = [seq[i]]
        while th[run[-1]][1][0] in dead:
            i += 1
            run.append(seq[i])
        i += 1
        if col[run[0]] != col[run[-1]]:
            raise MoveError("strand ends disagree in color")
        hc, hs = th[run[-1]][1]
        cr[hc][hs] = run[0]
    return _finish(cd, {c: tuple(s) for c, s in cr.items()},
                   {c: D.over_in[c] for c in cr}, col)


def r1_remove(cd: ColoredDiagram, crossing: int) -> ColoredDiagram:
    D = cd.diagram
    if crossing not in D.crossings:
        raise MoveError(f"no crossing {crossing}")
    s = D.crossings[crossing]
    if not any(s[i] == s[(i + 1) % 4] for i in range(4)):
        raise MoveError(f"crossing {crossing} is not a kink")
    return _splice_out(cd, {crossing})


# -- R2 -----------------------------------------------------------------------

def r2_push(cd: ColoredDiagram, moving: tuple, target: tuple, over: bool) -> ColoredDiagram:
    """Push a finger of the moving edge across the target edge.

    ``moving`` and ``target`` are darts ``(cid, slot)`` on the same face (the
    face lies to the left when leaving through that slot).  With ``over`` the
    moving strand (color x) passes over the target (color y), whose middle
    piece becomes 2x-y; otherwise the moving strand's middle becomes 2y-x.
    """
    D = cd.diagram
    face = _face_of(D, moving)
    if target not in face:
        raise MoveError("edges are not on a common face")
    c1, s1 = moving
    c3, s3 = target
    e = D.crossings[c1][s1]
    f = D.crossings[c3][s3]
    if e == f:
        raise MoveError("cannot push an edge across itself")
    c2, s2 = D.other_end(c1, s1)
    c4, s4 = D.other_end(c3, s3)
    th = D.edge_tail_head
    efwd = th[e][0] == (c1, s1)
    ffwd = th[f][0] == (c3, s3)
    nid = _next_id(D)
    m, e2, g, f2 = nid, nid + 1, nid + 2, nid + 3
    A = max(D.crossings) + 1
    B = A + 1
    # ccw around each new crossing, starting east (see module docs)
    ring = {A: [g, m, f2, e], B: [f, m, g, e2]}
    e_in = {A: e if efwd else m, B: m if efwd else e2}
    f_in = {A: g if ffwd else f2, B: f if ffwd else g}
    cr = {c: list(s) for c, s in D.crossings.items()}
    cr[c2][s2] = e2
    cr[c4][s4] = f2
    oi = dict(D.over_in)
    for X in (A, B):
        r = ring[X]
        under_in, over_edge = (f_in[X], e_in[X]) if over else (e_in[X], f_in[X])
        k = r.index(under_in)
        rot = r[k:] + r[:k]
        cr[X] = rot
        oi[X] = rot.index(over_edge)
    x, y = cd.colors[e], cd.colors[f]
    p = cd.p
    col = dict(cd.colors)
    if over:
        col[m] = col[e2] = x
        col[g] = (2 * x - y) % p
        col[f2] = y
    else:
        col[m] = (2 * y - x) % p
        col[e2] = x
        col[g] = col[f2] = y
    return _finish(cd, {c: tuple(s) for c, s in cr.items()}, oi, col)


def r2_pull(cd: ColoredDiagram, face_dart: tuple) -> ColoredDiagram:
    """Remove the bigon containing ``face_dart`` if one strand is over at both corners."""
    D = cd.diagram
    face = _face_of(D, face_dart)
    if len(face) != 2:
        raise MoveError("face is not a bigon")
    (P, sp), (Q, sq) = face
    if P == Q:
        raise MoveError("degenerate bigon")
    # the two sides of the bigon sit on the same strand-level at both corners
    parity = {sp % 2, D.other_end(P, sp)[1] % 2}
    if len(parity) != 1:
        raise MoveError("bigon strands alternate; not removable")
    return _splice_out(cd, {P, Q})


# -- R3 -----------------------------------------------------------------------

def r3_slide(cd: ColoredDiagram, face_dart: tuple) -> ColoredDiagram:
    """Slide a strand across the opposite crossing of a triangular face."""
    D = cd.diagram
    face = _face_of(D, face_dart)
    if len(face) != 3:
        raise MoveError("face is not a triangle")
    if len({c for c, _ in face}) != 3:
        raise MoveError("degenerate triangle")
    sides = []
    for c, s in face:
        c2, s2 = D.other_end(c, s)
        sides.append(((c, s), (c2, s2)))
    if not any(a[1] % 2 == 1 and b[1] % 2 == 1 for a, b in sides):
        raise MoveError("no strand passes over both of its triangle corners")
    cr = {c: list(s) for c, s in D.crossings.items()}
    tri_edges = set()
    outer = set()
    updates = []
    for (X, sx), (Y, sy) in sides:
        a = D.crossings[X][sx]
        pa = D.crossings[X][(sx + 2) % 4]
        qa = D.crossings[Y][(sy + 2) % 4]
        tri_edges.add(a)
        outer.update((pa, qa))
        updates.append((X, sx, qa))
        updates.append((X, (sx + 2) % 4, a))
        updates.append((Y, sy, pa))
        updates.append((Y, (sy + 2) % 4, a))
    if outer & tri_edges:
        raise MoveError("triangle edges close up on themselves")
    for c, s, e in updates:
        cr[c][s] = e
    crt = {c: tuple(s) for c, s in cr.items()}
    col = {e: v for e, v in cd.colors.items() if e not in tri_edges}
    col = _propagate(crt, col, cd.p)
    return _finish(cd, crt, dict(D.over_in), col)


def _propagate(crossings, known, p):
    col = dict(known)
    changed = True
    while changed:
        changed = False
        for s in crossings.values():
            o1, o3 = s[1], s[3]
            if (o1 in col) != (o3 in col):
                col[o3 if o1 in col else o1] = col[o1 if o1 in col else o3]
                changed = True
            if o1 in col and (s[0] in col) != (s[2] in col):
                a, b = (s[0], s[2]) if s[0] in col else (s[2], s[0])
                col[b] = (2 * col[o1] - col[a]) % p
                changed = True
    return col


# -- sites ---------------------------------------------------------------------

def _face_of(D: Diagram, dart):
    for f in D.faces():
        if dart in f:
            return f
    raise MoveError(f"no dart {dart}")


def apply_move(cd: ColoredDiagram, move: Move) -> ColoredDiagram:
    s = move.site
    if move.kind == "R1+":
        return r1_add(cd, s["edge"], s["side"], s["over_first"])
    if move.kind == "R1-":
        return r1_remove(cd, s["crossing"])
    if move.kind == "R2+":
        return r2_push(cd, tuple(s["moving"]), tuple(s["target"]), s["over"])
    if move.kind == "R2-":
        return r2_pull(cd, tuple(s["face"]))
    if move.kind == "R3":
        return r3_slide(cd, tuple(s["face"]))
    raise MoveError(f"unknown move kind {move.kind!r}")


def candidate_moves(cd: ColoredDiagram, kinks=True):
    """Every move site of the current state, in a deterministic order."""
    D = cd.diagram
    out = []
    faces = D.faces()
    for c in sorted(D.crossings):
        s = D.crossings[c]
        if any(s[i] == s[(i + 1) % 4] for i in range(4)):
            out.append(Move("R1-", {"crossing": c}))
    for f in faces:
        if len(f) == 2:
            out.append(Move("R2-", {"face": f[0]}))
        elif len(f) == 3:
            out.append(Move("R3", {"face": f[0]}))
    for f in faces:
        for i in range(len(f)):
            for j in range(i + 1, len(f)):
                if D.crossings[f[i][0]][f[i][1]] == D.crossings[f[j][0]][f[j][1]]:
                    continue
                for over in (True, False):
                    out.append(Move("R2+", {"moving": f[i], "target": f[j], "over": over}))
    if kinks:
        for e in sorted(D.ends):
            for side in (1, 3):
                for of in (True, False):
                    out.append(Move("R1+", {"edge": e, "side": side, "over_first": of}))
    return out
