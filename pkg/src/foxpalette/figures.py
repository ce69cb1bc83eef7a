"""Matplotlib renderings for CLI reports (written to files, never shown)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .palette import build_palette_graph  # noqa: E402


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def palette_graph_figure(S, p, path):
    """Residues on a circle; palette edges drawn as chords labelled by their midpoint color."""
    G = build_palette_graph(S, p)
    pos = {k: (math.sin(2 * math.pi * k / p), math.cos(2 * math.pi * k / p)) for k in range(p)}
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    for a, c, b in G.edges:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.35", lw=1.5, zorder=1)
        ax.text((x0 + x1) / 2, (y0 + y1) / 2, str(c), fontsize=9, color="tab:red",
                ha="center", va="center", bbox=dict(fc="white", ec="none", pad=0.5))
    for k, (x, y) in pos.items():
        on = k in G.vertices
        ax.scatter([x], [y], s=260 if on else 90, zorder=2,
                   color="tab:blue" if on else "0.85", edgecolor="k" if on else "0.6")
        ax.text(x, y, str(k), ha="center", va="center", fontsize=9,
                color="white" if on else "0.4", zorder=3)
    ax.set_title(f"G({{{','.join(map(str, sorted(G.vertices)))}}}) mod {p}")
    ax.set_aspect("equal")
    ax.axis("off")
    return _save(fig, path)


def census_figure(report: dict, path):
    """Bar chart of affine class sizes from a classification report dict."""
    classes = report["classes"]
    fig, ax = plt.subplots(figsize=(max(3, 1.2 * len(classes) + 1), 3.2))
    labels = ["{" + ",".join(map(str, c["representative"])) + "}" for c in classes]
    ax.bar(range(len(classes)), [c["orbit_size"] for c in classes], color="tab:blue")
    ax.set_xticks(range(len(classes)), labels, rotation=20, fontsize=8)
    ax.set_ylabel("orbit size")
    ax.set_title(f"p={report['p']}, size {report['size']}: {report['connected']} connected")
    return _save(fig, path)


def reduction_figure(trace_json: dict, path):
    """Image size and crossing count after every move of a trace."""
    moves = trace_json["moves"]
    n0 = len(trace_json["initial"]["crossings"])
    counts, sizes = [n0], [len(set(trace_json["initial"]["colors"].values()))]
    n = n0
    for m in moves:
        n += {"R1+": 1, "R1-": -1, "R2+": 2, "R2-": -2}.get(m["kind"], 0)
        counts.append(n)
        sizes.append(len(m["image_after"]))
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.step(range(len(counts)), counts, where="post", label="crossings")
    ax.step(range(len(sizes)), sizes, where="post", label="#Im")
    for ph in trace_json.get("phases", []):
        ax.axvline(ph["end"], color="0.8", lw=0.8)
    ax.set_xlabel("move")
    ax.legend(fontsize=8)
    return _save(fig, path)


def coloring_histogram(sizes, path, title=""):
    """Histogram of image sizes over enumerated colorings."""
    fig, ax = plt.subplots(figsize=(4, 3))
    vals = sorted(set(sizes))
    ax.bar(vals, [sizes.count(v) for v in vals], color="tab:green")
    ax.set_xlabel("#Im")
    ax.set_ylabel("colorings")
    ax.set_title(title)
    return _save(fig, path)
