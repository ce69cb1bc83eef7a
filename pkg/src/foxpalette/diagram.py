"""Planar diagram (PD) model of knot diagrams.

A crossing is four edge ids listed counterclockwise from the incoming
under-edge, so slot 0 is the incoming under-edge and slot 2 the outgoing
one.  ``over_in`` records which of slots 1/3 carries the incoming
over-edge.  Edge ids are arbitrary positive ints; each occurs in exactly two
slots.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from functools import cached_property


class DiagramError(ValueError):
    """Input does not describe a (realizable, one-component) knot diagram."""


class PDSyntaxError(DiagramError):
    pass


@dataclass(frozen=True)
class Arc:
    id: int
    edges: tuple


@dataclass(frozen=True)
class CrossingIncidence:
    crossing: int
    over: int
    under: tuple  # (incoming-side arc, outgoing-side arc)


def is_incoming(over_in: int, slot: int) -> bool:
    return slot == 0 or slot == over_in


class Diagram:
    """Immutable PD diagram; derived views are computed lazily."""

    __slots__ = ("crossings", "over_in", "__dict__")

    def __init__(self, crossings, over_in=None, check=True):
        # crossings: {cid: (e0, e1, e2, e3)}
        self.crossings = {c: tuple(s) for c, s in crossings.items()}
        if over_in is None:
            over_in = _derive_over_in(self.crossings)
        self.over_in = dict(over_in)
        if check:
            self.validate()

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.crossings == other.crossings
                and self.over_in == other.over_in)

    def __hash__(self):
        return hash(tuple(sorted(self.crossings.items())))

    def __repr__(self):
        return f"Diagram({self.to_pd()!r})"

    def __len__(self):
        return len(self.crossings)

    # -- structure ----------------------------------------------------------

    @cached_property
    def ends(self):
        """edge -> [(cid, slot), (cid, slot)]."""
        out: dict = {}
        for c, slots in self.crossings.items():
            for s, e in enumerate(slots):
                out.setdefault(e, []).append((c, s))
        return out

    @cached_property
    def edge_tail_head(self):
        """edge -> (tail dart, head dart) along the knot orientation."""
        out = {}
        for e, darts in self.ends.items():
            (c1, s1), (c2, s2) = darts
            if is_incoming(self.over_in[c1], s1):
                out[e] = ((c2, s2), (c1, s1))
            else:
                out[e] = ((c1, s1), (c2, s2))
        return out

    def other_end(self, c, s):
        e = self.crossings[c][s]
        a, b = self.ends[e]
        return b if a == (c, s) else a

    @property
    def edges(self):
        return sorted(self.ends)

    def validate(self):
        if not self.crossings:
            return
        for c, slots in self.crossings.items():
            if len(slots) != 4:
                raise DiagramError(f"crossing {c} does not have 4 slots")
            if self.over_in.get(c) not in (1, 3):
                raise DiagramError(f"crossing {c} has no over-strand direction")
        for e, darts in self.ends.items():
            if len(darts) != 2:
                raise DiagramError(
                    f"edge {e} used {len(darts)} times; each edge label must occur exactly twice")
            inc = [is_incoming(self.over_in[c], s) for c, s in darts]
            if inc[0] == inc[1]:
                raise DiagramError(f"edge {e} has inconsistent orientation")
        seq = self.traversal()
        if len(seq) != len(self.ends):
            raise DiagramError("diagram has more than one component (links are not supported)")
        nf = len(self.faces())
        if nf != len(self.crossings) + 2:
            raise DiagramError(
                f"not realizable on the sphere: {nf} faces, expected {len(self.crossings) + 2}")

    def traversal(self, start=None):
        """Edges in knot order, starting from ``start`` (default: the least edge)."""
        if not self.crossings:
            return []
        th = self.edge_tail_head
        e = min(th) if start is None else start
        seq = []
        seen = set()
        while e not in seen:
            seen.add(e)
            seq.append(e)
            c, s = th[e][1]
            e = self.crossings[c][(s + 2) % 4]
        return seq

    def faces(self):
        """Faces as cyclic lists of darts (cid, slot), each traversed with the face on the left.

        Cached; treat the result as read-only.
        """
        if "_faces" in self.__dict__:
            return self.__dict__["_faces"]
        if not self.crossings:
            return [[], []]
        seen = set()
        faces = []
        for c in sorted(self.crossings):
            for s in range(4):
                if (c, s) in seen:
                    continue
                face = []
                d = (c, s)
                while d not in seen:
                    seen.add(d)
                    face.append(d)
                    c2, s2 = self.other_end(*d)
                    d = (c2, (s2 - 1) % 4)
                faces.append(face)
        self.__dict__["_faces"] = faces
        return faces

    def face_edges(self, face):
        return [self.crossings[c][s] for c, s in face]

    @cached_property
    def arc_list(self):
        if not self.crossings:
            return [Arc(0, ())]
        th = self.edge_tail_head
        # start right after an under-pass so that the first arc is whole
        start = min(e for e, (t, _) in th.items() if t[1] == 2)
        seq = self.traversal(start)
        arcs, cur = [], []
        for e in seq:
            cur.append(e)
            c, s = th[e][1]
            if s == 0:
                arcs.append(cur)
                cur = []
        if cur:
            arcs[0] = cur + arcs[0]
        arcs.sort(key=lambda a: min(a))
        return [Arc(i, tuple(a)) for i, a in enumerate(arcs)]

    @cached_property
    def arc_of_edge(self):
        return {e: a.id for a in self.arc_list for e in a.edges}

    def arcs(self):
        """Arc partition and, per crossing, (over arc, under arcs)."""
        aoe = self.arc_of_edge
        inc = []
        for c in sorted(self.crossings):
            sl = self.crossings[c]
            inc.append(CrossingIncidence(c, aoe[sl[1]], (aoe[sl[0]], aoe[sl[2]])))
        return self.arc_list, inc

    # -- serialization ------------------------------------------------------

    def to_pd(self) -> str:
        return ";".join("X({},{},{},{})".format(*self.crossings[c]) for c in sorted(self.crossings))

    def to_json(self):
        return {"crossings": [list(self.crossings[c]) for c in sorted(self.crossings)]}

    def relabeled(self, start=None):
        """Copy with edges renumbered 1..2n in knot order and crossings 0..n-1."""
        seq = self.traversal(start)
        new = {e: i + 1 for i, e in enumerate(seq)}
        order = sorted(self.crossings, key=lambda c: new[self.crossings[c][0]])
        cmap = {c: i for i, c in enumerate(order)}
        cr = {cmap[c]: tuple(new[e] for e in self.crossings[c]) for c in order}
        oi = {cmap[c]: self.over_in[c] for c in order}
        return Diagram(cr, oi, check=False), new

    def canonical_key(self, edge_colors=None):
        """Labeling-independent key: least relabeled serialization over all start edges."""
        if not self.crossings:
            return ((), tuple(sorted(set((edge_colors or {}).values()))))
        best = None
        for e in self.ends:
            d, new = self.relabeled(e)
            key = tuple((d.crossings[c], d.over_in[c]) for c in sorted(d.crossings))
            if edge_colors is not None:
                inv = {v: k for k, v in new.items()}
                key = (key, tuple(edge_colors[inv[i + 1]] for i in range(len(new))))
            if best is None or key < best:
                best = key
        return best


def state_hash(diagram: Diagram, edge_colors=None) -> str:
    key = diagram.canonical_key(edge_colors)
    return hashlib.sha256(json.dumps(key, separators=(",", ":")).encode()).hexdigest()[:16]


def _derive_over_in(crossings):
    """Orient over-strands so that every edge has one tail and one head."""
    ends: dict = {}
    for c, slots in crossings.items():
        for s, e in enumerate(slots):
            ends.setdefault(e, []).append((c, s))
    for e, darts in ends.items():
        if len(darts) != 2:
            raise DiagramError(
                f"edge {e} used {len(darts)} times; each edge label must occur exactly twice")
    over_in: dict = {}
    changed = True
    while changed:
        changed = False
        for e, ((c1, s1), (c2, s2)) in ends.items():
            for (ca, sa), (cb, sb) in (((c1, s1), (c2, s2)), ((c2, s2), (c1, s1))):
                if sa % 2 == 0:
                    a_in = sa == 0
                elif ca in over_in:
                    a_in = over_in[ca] == sa
                else:
                    continue
                if sb % 2 == 1 and cb not in over_in:
                    # b is the opposite end, so it points the other way
                    over_in[cb] = (sb + 2) % 4 if a_in else sb
                    changed = True
    for c, (a, b, _, d) in crossings.items():
        # strands with no under-crossing at all (extra components): use labels
        over_in.setdefault(c, 1 if d == b + 1 else 3)
    return over_in


_X = re.compile(r"X\s*[\(\[]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\)\]]")


def parse_pd(text: str) -> Diagram:
    """Parse ``X(a,b,c,d)`` entries separated by ``;`` or newlines."""
    body = text.strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    body = re.sub(r"#.*", "", body)
    crossings = {}
    pos = 0
    for m in _X.finditer(body):
        gap = body[pos:m.start()]
        if gap.strip(" \t\r\n;,"):
            raise PDSyntaxError(f"unexpected text {gap.strip()!r}")
        crossings[len(crossings)] = tuple(int(g) for g in m.groups())
        pos = m.end()
    if body[pos:].strip(" \t\r\n;,"):
        raise PDSyntaxError(f"unexpected text {body[pos:].strip()!r}")
    if any(e <= 0 for s in crossings.values() for e in s):
        raise PDSyntaxError("edge labels must be positive")
    return Diagram(crossings)


def from_json(obj) -> Diagram:
    try:
        rows = obj["crossings"]
        crossings = {i: tuple(int(v) for v in r) for i, r in enumerate(rows)}
    except (KeyError, TypeError, ValueError) as exc:
        raise PDSyntaxError(f"bad diagram JSON: {exc}") from None
    if any(len(r) != 4 for r in crossings.values()):
        raise PDSyntaxError("each crossing needs four edge labels")
    return Diagram(crossings)


def load_diagram(text: str) -> Diagram:
    s = text.lstrip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise PDSyntaxError(f"bad diagram JSON: {exc}") from None
        return from_json(obj)
    return parse_pd(text)


def arcs(D: Diagram):
    return D.arcs()


def faces(D: Diagram):
    return D.faces()


UNKNOT = Diagram({})
