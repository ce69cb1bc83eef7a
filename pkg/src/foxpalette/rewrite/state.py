"""Colored diagrams: a PD diagram with a Fox color on every edge."""

from __future__ import annotations

from functools import cached_property

from ..coloring import FoxColoring
from ..diagram import Diagram, state_hash
from ..modp import as_prime
from ..palette import build_palette_graph, fmt_color, is_connected


class InvalidColoring(ValueError):
    pass


class ColoredDiagram:
    """Diagram plus edge colors; edges on one arc share a color."""

    def __init__(self, diagram: Diagram, colors: dict, p, check=True):
        self.diagram = diagram
        self.colors = dict(colors)
        self.p = as_prime(p).value
        if check:
            bad = self.violations()
            if bad:
                raise InvalidColoring("; ".join(bad))

    @classmethod
    def from_coloring(cls, D: Diagram, C: FoxColoring):
        aoe = D.arc_of_edge
        return cls(D, {e: C[aoe[e]] for e in D.ends}, C.modulus)

    def to_coloring(self) -> FoxColoring:
        D = self.diagram
        return FoxColoring(as_prime(self.p),
                           tuple(self.colors[a.edges[0]] for a in D.arc_list))

    def __len__(self):
        return len(self.diagram)

    def crossing_color(self, c):
        s = self.diagram.crossings[c]
        k = self.colors
        return (k[s[0]], k[s[1]], k[s[2]])

    def crossing_colors(self):
        return {c: self.crossing_color(c) for c in self.diagram.crossings}

    def violations(self):
        out = []
        k = self.colors
        for c, s in self.diagram.crossings.items():
            if k[s[1]] != k[s[3]]:
                out.append(f"over-strand changes color at crossing {c}")
            elif (k[s[0]] + k[s[2]] - 2 * k[s[1]]) % self.p:
                out.append(f"Fox rule fails at crossing {c}: {fmt_color(*self.crossing_color(c))}")
        return out

    @property
    def image(self) -> frozenset:
        return frozenset(self.colors.values())

    @cached_property
    def hash(self) -> str:
        return state_hash(self.diagram, self.colors)

    def palette_violations(self):
        """Nontrivial crossing colors must be palette edges; the palette graph connected."""
        G = build_palette_graph(self.image, self.p)
        edges = {(a, b) for a, _, b in G.edges}
        out = []
        for a, c, b in self.crossing_colors().values():
            if not a == b == c and (min(a, b), max(a, b)) not in edges:
                out.append(f"{fmt_color(a, c, b)} not an edge of G(Im)")
        if len(self.image) > 1 and not is_connected(G):
            out.append(f"G(Im) disconnected for Im={sorted(self.image)}")
        return out

    def to_json(self):
        D = self.diagram
        return {
            "p": self.p,
            "ids": sorted(D.crossings),
            "crossings": [list(D.crossings[c]) for c in sorted(D.crossings)],
            "over_in": [D.over_in[c] for c in sorted(D.crossings)],
            "colors": {str(e): self.colors[e] for e in sorted(self.colors)},
        }

    @classmethod
    def from_json(cls, obj):
        rows = obj["crossings"]
        ids = obj.get("ids", range(len(rows)))
        D = Diagram({i: tuple(r) for i, r in zip(ids, rows)},
                    {i: v for i, v in zip(ids, obj["over_in"])})
        return cls(D, {int(e): c for e, c in obj["colors"].items()}, obj["p"])
