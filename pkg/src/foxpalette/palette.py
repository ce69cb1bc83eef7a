"""Palette graphs of color sets in Z/p and their affine classification."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .linalg import int_det
from .modp import AffineMap, Prime, all_affine_maps, as_prime


class PaletteError(ValueError):
    pass


def fmt_color(a, c, b) -> str:
    return f"{{{a}|{c}|{b}}}"


@dataclass(frozen=True)
class PaletteGraph:
    """Simple graph on S joining a, b whenever (a+b)/2 lies in S.

    Edges are stored as (a, c, b) with a < b and c = (a+b)/2.
    """

    modulus: Prime
    vertices: tuple
    edges: tuple

    def __str__(self):
        return " ".join(fmt_color(*e) for e in self.edges)

    def edge_strings(self):
        return [fmt_color(*e) for e in self.edges]

    def neighbors(self):
        adj = {v: [] for v in self.vertices}
        for a, _, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj:
            adj[v].sort()
        return adj

    def has_edge(self, a, b) -> bool:
        a, b = min(a, b), max(a, b)
        return any(e[0] == a and e[2] == b for e in self.edges)

    def components(self):
        adj = self.neighbors()
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = [], [v]
            seen.add(v)
            while todo:
                u = todo.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            comps.append(tuple(sorted(comp)))
        return comps


def _edges_of(S, p: Prime):
    Sset = set(S)
    out = []
    for a, b in combinations(sorted(Sset), 2):
        c = p.half(a, b)
        if c in Sset:
            out.append((a, c, b))
    return tuple(out)


def build_palette_graph(S: Iterable[int], p) -> PaletteGraph:
    p = as_prime(p)
    verts = tuple(sorted({int(x) % p.value for x in S}))
    if not verts:
        raise PaletteError("palette graph needs a nonempty set")
    return PaletteGraph(p, verts, _edges_of(verts, p))


def is_connected(G: PaletteGraph) -> bool:
    return len(G.components()) == 1


def restrict(G: PaletteGraph, S: Iterable[int]) -> PaletteGraph:
    """Delete the vertices outside S and every edge labelled outside S."""
    keep = set(S)
    if not keep <= set(G.vertices):
        raise PaletteError("restriction set is not a subset of the vertices")
    if not keep:
        raise PaletteError("palette graph needs a nonempty set")
    edges = tuple(e for e in G.edges if e[0] in keep and e[2] in keep and e[1] in keep)
    return PaletteGraph(G.modulus, tuple(sorted(keep)), edges)


def spanning_tree(G: PaletteGraph):
    """Breadth-first tree grown from the lowest vertex, lowest neighbours first."""
    if not is_connected(G):
        raise PaletteError("graph is disconnected")
    by_pair = {(a, b): (a, c, b) for a, c, b in G.edges}
    adj = G.neighbors()
    root = G.vertices[0]
    seen = {root}
    queue = deque([root])
    tree = []
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
                tree.append(by_pair[(min(u, w), max(u, w))])
    return tree


@dataclass(frozen=True)
class TreeMatrix:
    vertex_order: tuple
    edge_order: tuple
    rows: tuple

    def reduced(self):
        """Drop the last vertex column, giving a square matrix."""
        return [list(r[:-1]) for r in self.rows]


def tree_matrix(G: PaletteGraph, T) -> TreeMatrix:
    verts = G.vertices
    k = len(verts)
    T = sorted(T)
    if len(T) != k - 1 or not set(T) <= set(G.edges):
        raise PaletteError("not a spanning tree of the graph")
    # k-1 edges of G covering all vertices in one component is a tree
    if not is_connected(PaletteGraph(G.modulus, verts, tuple(T))):
        raise PaletteError("not a spanning tree of the graph")
    col = {v: j for j, v in enumerate(verts)}
    rows = []
    for a, c, b in T:
        row = [0] * k
        row[col[a]] = 1
        row[col[b]] = 1
        row[col[c]] = -2
        rows.append(tuple(row))
    return TreeMatrix(verts, tuple(T), tuple(rows))


@dataclass
class DetReport:
    det: int
    odd: bool
    below_power: bool
    divisible: bool
    equals_p: bool

    @property
    def passed(self):
        return self.odd and self.below_power and self.divisible and self.equals_p


def verify_det_properties(M: TreeMatrix, p) -> DetReport:
    p = as_prime(p)
    k = len(M.vertex_order)
    if k != p.log2_bound():
        raise PaletteError(f"subset size must be {p.log2_bound()}, got {k}")
    d = int_det(M.reduced())
    return DetReport(
        det=d,
        odd=d % 2 == 1,
        below_power=abs(d) < 2 ** (k - 1),
        divisible=d % p.value == 0,
        equals_p=abs(d) == p.value,
    )


def palette_isomorphic(S, S2, p):
    """A bijection f: S -> S2 preserving the palette edge relation, or None."""
    p = as_prime(p)
    A = sorted(set(S))
    B = sorted(set(S2))
    if len(A) != len(B):
        return None
    GA, GB = build_palette_graph(A, p), build_palette_graph(B, p)
    if len(GA.edges) != len(GB.edges):
        return None
    adjA = {v: set(n) for v, n in GA.neighbors().items()}
    adjB = {v: set(n) for v, n in GB.neighbors().items()}
    assign: dict = {}
    used: set = set()

    def extend(i):
        if i == len(A):
            return True
        a = A[i]
        for b in B:
            if b in used or len(adjA[a]) != len(adjB[b]):
                continue
            if all((x in adjA[a]) == (assign[x] in adjB[b]) for x in A[:i]):
                assign[a] = b
                used.add(b)
                if extend(i + 1):
                    return True
                del assign[a]
                used.discard(b)
        return False

    return dict(assign) if extend(0) else None


def affine_equivalent(S, S2, p):
    """Some affine map f with f(S) = S2, or None."""
    p = as_prime(p)
    S = frozenset(S)
    S2 = frozenset(S2)
    if len(S) != len(S2):
        return None
    for f in all_affine_maps(p):
        if f.image(S) == S2:
            return f
    return None


def affine_orbit(S, p) -> frozenset:
    p = as_prime(p)
    return frozenset(f.image(S) for f in all_affine_maps(p))


def canonical_form(S, p):
    """Lexicographically least member of the affine orbit, with a map reaching it."""
    p = as_prime(p)
    best, best_f = None, None
    for f in all_affine_maps(p):
        img = tuple(sorted(f.image(S)))
        if best is None or img < best:
            best, best_f = img, f
    return best, best_f


@dataclass
class PaletteClass:
    representative: tuple
    size: int
    members: list = field(repr=False)


@dataclass
class ClassificationReport:
    modulus: int
    subset_size: int
    total_subsets: int
    connected_count: int
    classes: list

    def to_dict(self, members=False):
        out = {
            "p": self.modulus,
            "size": self.subset_size,
            "total_subsets": self.total_subsets,
            "connected": self.connected_count,
            "classes": [],
        }
        for c in self.classes:
            d = {"representative": list(c.representative), "orbit_size": c.size}
            if members:
                d["members"] = [list(m) for m in c.members]
            out["classes"].append(d)
        return out


def classify_subsets(p, size: int) -> ClassificationReport:
    p = as_prime(p)
    if not 2 <= size <= p.value:
        raise PaletteError(f"size must be in [2, {p.value}], got {size}")
    maps = list(all_affine_maps(p))
    total = 0
    connected = []
    for S in combinations(range(p.value), size):
        total += 1
        if is_connected(build_palette_graph(S, p)):
            connected.append(S)
    remaining = set(connected)
    classes = []
    for S in connected:  # lexicographic, so the first unseen member is least
        if S not in remaining:
            continue
        orbit = {tuple(sorted(f.image(S))) for f in maps}
        members = sorted(orbit)
        remaining -= orbit
        classes.append(PaletteClass(S, len(members), members))
    return ClassificationReport(p.value, size, total, len(connected), classes)


CANONICAL_A = (1, 4, 6, 7, 8)
CANONICAL_B = (0, 4, 6, 7, 8)


# family keys; "3.2" and "6.3" are accepted as aliases of A and B
FAMILY_KEYS = {"A": "A", "B": "B", "3.2": "A", "6.3": "B"}


def _family(key):
    try:
        return FAMILY_KEYS[str(key).upper()]
    except KeyError:
        raise PaletteError(f"unknown family {key!r}") from None


def family_map(family: str, a: int, b: int) -> AffineMap:
    """Affine map sending the canonical palette's first two colors to (a, b)."""
    p = Prime(11)
    fam = _family(family)
    if (a - b) % 11 == 0:
        raise PaletteError("family needs a != b")
    if fam == "A":
        # f(x) = 4(b-a)(x-1) + a
        k = 4 * (b - a)
        return AffineMap(k, a - k, p)
    # f(x) = 3(b-a)x + a
    return AffineMap(3 * (b - a), a, p)


def palette_family(family: str, a: int, b: int) -> frozenset:
    """Five-color set from the closed-form family A (from {1,4,6,7,8}) or B (from {0,4,6,7,8})."""
    fam = _family(family)
    if (a - b) % 11 == 0:
        raise PaletteError("family needs a != b")
    a %= 11
    b %= 11
    if fam == "A":
        terms = (a, b, 3 * a + 9 * b, 6 * a + 6 * b, 10 * a + 2 * b)
    else:
        terms = (a, b, 5 * a + 7 * b, 2 * a + 10 * b, 10 * a + 2 * b)
    return frozenset(t % 11 for t in terms)


G1_EXTRA_EDGES = ((0, 3, 6), (0, 7, 3), (3, 0, 8), (4, 7, 10), (7, 3, 10))
G1_DROPPED_EDGES = ((3, 10, 6), (6, 8, 10))
G1_SET = (0, 3, 4, 6, 7, 8, 10)
G1_SET_AS_PRINTED = (0, 3, 4, 5, 6, 8, 10)


def g1_edges():
    """Edges of the auxiliary graph: G({0,4,6,7,8}) plus vertices 3, 10 and five edges."""
    base = build_palette_graph(CANONICAL_B, 11)
    return tuple(sorted(set(base.edges) | {_canon(e) for e in G1_EXTRA_EDGES}))


def _canon(e):
    a, c, b = e
    return (a, c, b) if a < b else (b, c, a)


def g1_consistency():
    """Structural checks on the auxiliary graph; returns a dict of named booleans."""
    p = Prime(11)
    full = build_palette_graph(G1_SET, p)
    dropped = {_canon(e) for e in G1_DROPPED_EDGES}
    printed = build_palette_graph(G1_SET_AS_PRINTED, p)
    return {
        "extra_edges_satisfy_fox_rule": all(
            (a + b - 2 * c) % 11 == 0 for a, c, b in G1_EXTRA_EDGES),
        "dropped_edges_in_full_graph": dropped <= set(full.edges),
        "full_minus_dropped_equals_g1": set(full.edges) - dropped == set(g1_edges()),
        "printed_set_matches": set(printed.edges) - dropped == set(g1_edges()),
    }


def injective_labelings(S, p) -> int:
    """Number of injective solutions of the spanning-tree system of G(S) mod p.

    Counts vectors x with x_a + x_b = 2 x_c along every tree edge and all
    entries distinct, i.e. labelled copies of G(S) inside Z/p.
    """
    from .linalg import nullspace_mod
    p = as_prime(p)
    G = build_palette_graph(S, p)
    M = tree_matrix(G, spanning_tree(G))
    basis = nullspace_mod(M.rows, len(M.vertex_order), p.value)
    P = p.value
    count = 0
    from itertools import product
    for coeffs in product(range(P), repeat=len(basis)):
        vec = [sum(k * b[i] for k, b in zip(coeffs, basis)) % P for i in range(len(M.vertex_order))]
        if len(set(vec)) == len(vec):
            count += 1
    return count
