"""Fox p-colorings: the coloring space of a diagram and its images."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .diagram import Diagram
from .linalg import int_det, nullspace_mod, unit_reduce
from .modp import AffineMap, ModulusError, Prime, as_prime
from .palette import build_palette_graph, fmt_color, is_connected


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class FoxColoring:
    modulus: Prime
    assignment: tuple  # color of arc i at index i

    def __getitem__(self, arc):
        return self.assignment[arc]

    @property
    def image(self) -> frozenset:
        return frozenset(self.assignment)

    def is_trivial(self):
        return len(self.image) == 1

    def to_json(self):
        return {"p": self.modulus.value,
                "arcs": {str(i): c for i, c in enumerate(self.assignment)}}

    @classmethod
    def from_json(cls, obj):
        p = as_prime(obj["p"])
        arcs = obj["arcs"]
        return cls(p, tuple(int(arcs[str(i)]) % p.value for i in range(len(arcs))))


@dataclass(frozen=True)
class ColoringSpace:
    modulus: Prime
    basis: tuple
    rank: int


@dataclass(frozen=True)
class ColorImage:
    colors: frozenset
    crossing_colors: tuple  # (under, over, under) per crossing

    def nontrivial(self):
        return [t for t in self.crossing_colors if not t[0] == t[1] == t[2]]

    def labels(self):
        return [fmt_color(*t) for t in self.crossing_colors]


def relation_matrix(D: Diagram):
    """Rows a + b - 2c, one per crossing, over the arcs."""
    arcs, inc = D.arcs()
    rows = []
    for ci in inc:
        row = [0] * len(arcs)
        row[ci.under[0]] += 1
        row[ci.under[1]] += 1
        row[ci.over] -= 2
        rows.append(row)
    return rows, len(arcs)


def _sparse_relations(D: Diagram):
    """Relation rows as {arc: coefficient} dicts, cached on the diagram."""
    if "_relations" not in D.__dict__:
        arcs, inc = D.arcs()
        rows = []
        for ci in inc:
            d = {}
            for a in ci.under:
                d[a] = d.get(a, 0) + 1
            d[ci.over] = d.get(ci.over, 0) - 2
            rows.append(d)
        D.__dict__["_relations"] = (rows, len(arcs))
    return D.__dict__["_relations"]


def coloring_space(D: Diagram, p) -> ColoringSpace:
    p = as_prime(p)
    rows, n = relation_matrix(D)
    basis = nullspace_mod(rows, n, p.value)
    return ColoringSpace(p, tuple(tuple(v) for v in basis), len(basis))


def is_colorable(D: Diagram, p) -> bool:
    return coloring_space(D, p).rank >= 2


def determinant(D: Diagram) -> int:
    """|det| of the relation matrix with its last row and column removed, over Z."""
    rows, n = _sparse_relations(D)
    if n <= 1:
        return 1
    last = n - 1
    _, res = unit_reduce([{j: v for j, v in r.items() if j != last} for r in rows[:-1]], last)
    return abs(int_det(res))


def coloring_rank(D: Diagram, p) -> int:
    """Dimension of the coloring space, without building a basis."""
    p = as_prime(p).value
    rows, n = _sparse_relations(D)
    k, res = unit_reduce(rows, n)
    return n - k - (len(res[0]) - len(nullspace_mod(res, len(res[0]), p)) if res and res[0] else 0)


def is_valid(C: FoxColoring, D: Diagram) -> bool:
    p = C.modulus.value
    _, inc = D.arcs()
    if len(C.assignment) != len(D.arc_list):
        return False
    return all((C[ci.under[0]] + C[ci.under[1]] - 2 * C[ci.over]) % p == 0 for ci in inc)


def image(C: FoxColoring, D: Diagram) -> ColorImage:
    if not is_valid(C, D):
        raise ColoringError("not a valid coloring of this diagram")
    _, inc = D.arcs()
    cc = tuple((C[ci.under[0]], C[ci.over], C[ci.under[1]]) for ci in inc)
    return ColorImage(C.image, cc)


def recolor(C: FoxColoring, f: AffineMap) -> FoxColoring:
    if f.modulus != C.modulus:
        raise ModulusError("modulus mismatch")
    return FoxColoring(C.modulus, tuple(f(x) for x in C.assignment))


def _nonconstant_direction(space: ColoringSpace):
    p = space.modulus.value
    for v in space.basis:
        w = [(x - v[0]) % p for x in v]
        if any(w):
            k = next(x for x in w if x)
            inv = pow(k, -1, p)
            return tuple(x * inv % p for x in w)
    return None


def enumerate_nontrivial(D: Diagram, p, limit=None):
    """Yield nonconstant colorings.

    For rank 2 these are lam*v + mu*1 with lam != 0, v a fixed nonconstant
    kernel vector normalised to v[0] = 0; otherwise every kernel vector that
    is not constant.
    """
    p = as_prime(p)
    space = coloring_space(D, p)
    if space.rank < 2:
        raise ColoringError(f"diagram is not {p.value}-colorable")
    P = p.value
    n = len(D.arc_list)
    count = 0
    if space.rank == 2:
        v = _nonconstant_direction(space)
        for lam in range(1, P):
            for mu in range(P):
                if limit is not None and count >= limit:
                    return
                yield FoxColoring(p, tuple((lam * x + mu) % P for x in v))
                count += 1
        return
    for coeffs in product(range(P), repeat=space.rank):
        vec = [0] * n
        for k, b in zip(coeffs, space.basis):
            for i in range(n):
                vec[i] = (vec[i] + k * b[i]) % P
        if len(set(vec)) == 1:
            continue
        if limit is not None and count >= limit:
            return
        yield FoxColoring(p, tuple(vec))
        count += 1


def first_nontrivial(D: Diagram, p):
    return next(enumerate_nontrivial(D, p, limit=1))


def check_palette_support(C: FoxColoring, D: Diagram):
    """Nontrivial crossing colors are palette edges, and the palette graph is connected.

    Returns a list of violation messages (empty when both hold).
    """
    img = image(C, D)
    G = build_palette_graph(img.colors, C.modulus)
    edges = {(a, b) for a, _, b in G.edges}
    bad = []
    for a, c, b in img.nontrivial():
        if (min(a, b), max(a, b)) not in edges:
            bad.append(f"crossing color {fmt_color(a, c, b)} is not an edge of G(Im)")
    if not is_connected(G):
        bad.append(f"G(Im) is disconnected for Im={sorted(img.colors)}")
    return bad
