"""``foxpalette`` command line: color, palette, reduce, verify.

Exit codes: 0 ok, 1 verification or budget failure, 2 input error.
Every command builds one report dict; ``--json`` prints it, otherwise a
text projection of the same dict is printed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coloring import coloring_space, determinant, enumerate_nontrivial
from .diagram import DiagramError, load_diagram
from .modp import ModulusError, Prime
from .palette import (PaletteError, affine_equivalent, build_palette_graph, classify_subsets,
                      fmt_color, is_connected, palette_family)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SCHEMA_VERSION = 1


class InputError(Exception):
    pass


def _prime(text):
    try:
        return Prime(int(text)).value
    except (ValueError, ModulusError):
        raise InputError("p must be an odd prime") from None


def _read_diagram(path):
    p = Path(path)
    if not p.exists():
        from .verify import fixture_text
        try:
            text = fixture_text(p.stem)
        except (FileNotFoundError, OSError):
            raise InputError(f"no such file: {path}") from None
    else:
        text = p.read_text()
    try:
        return load_diagram(text)
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None


def _parse_set(text):
    try:
        return sorted({int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip()})
    except ValueError:
        raise InputError(f"bad set {text!r}") from None


# -- color -------------------------------------------------------------------------

def cmd_color(args):
    D = _read_diagram(args.diagram)
    p = _prime(args.p)
    space = coloring_space(D, p)
    det = determinant(D)
    rep = {"command": "color", "p": p, "crossings": len(D), "arcs": len(D.arc_list),
           "determinant": det, "rank": space.rank, "colorable": space.rank >= 2}
    if args.basis:
        rep["basis"] = [list(v) for v in space.basis]
    if space.rank >= 2 and (args.all or args.min_image or args.figures):
        cols = list(enumerate_nontrivial(D, p, None if args.min_image else args.limit))
        sizes = [len(c.image) for c in cols]
        rep["nontrivial_count"] = len(cols)
        if args.all:
            rep["colorings"] = [list(c.assignment) for c in cols[:args.limit]]
        if cols:
            rep["min_image"] = min(sizes)
            best = min(cols, key=lambda c: (len(c.image), c.assignment))
            rep["min_image_set"] = sorted(best.image)
            reps = []
            for c in cols:
                if len(c.image) == rep["min_image"] and not any(
                        affine_equivalent(c.image, r, p) for r in reps):
                    reps.append(sorted(c.image))
            rep["image_classes"] = reps
        if args.figures:
            from .figures import coloring_histogram, palette_graph_figure
            out = Path(args.figures)
            rep["figures"] = [coloring_histogram(sizes, out / "image_sizes.png", f"p={p}")]
            if cols:
                rep["figures"].append(palette_graph_figure(rep["min_image_set"], p,
                                                           out / "min_image_palette.png"))
    ok = not (args.expect_colorable and space.rank < 2)
    return rep, EXIT_OK if ok else EXIT_FAIL


def _text_color(rep):
    lines = [f"p={rep['p']} crossings={rep['crossings']} arcs={rep['arcs']} "
             f"det={rep['determinant']} rank={rep['rank']}"]
    if not rep["colorable"]:
        lines.append(f"not {rep['p']}-colorable")
    for v in rep.get("basis", []):
        lines.append(f"basis {v}")
    if "nontrivial_count" in rep:
        lines.append(f"nontrivial colorings: {rep['nontrivial_count']}")
    for c in rep.get("colorings", []):
        lines.append(f"  {c}")
    if "min_image" in rep:
        lines.append(f"min #Im = {rep['min_image']}, e.g. {rep['min_image_set']}; "
                     f"affine classes: {rep['image_classes']}")
    return "\n".join(lines)


# -- palette -----------------------------------------------------------------------

def cmd_palette(args):
    p = _prime(args.p)
    rep = {"command": "palette", "p": p}
    figs = Path(args.figures) if args.figures else None
    try:
        if args.set is not None:
            S = _parse_set(args.set)
            G = build_palette_graph(S, p)
            rep.update(set=S, edges=G.edge_strings(), connected=is_connected(G),
                       components=[list(c) for c in G.components()])
            if figs:
                from .figures import palette_graph_figure
                rep["figures"] = [palette_graph_figure(S, p, figs / "palette.png")]
        elif args.classify is not None:
            cr = classify_subsets(p, args.classify).to_dict(members=args.members)
            rep["classification"] = cr
            if figs:
                from .figures import census_figure
                rep["figures"] = [census_figure(cr, figs / "census.png")]
        else:
            fkey, a, b = args.family
            fam = sorted(palette_family(fkey, int(a), int(b)))
            rep.update(family=fkey.upper(), a=int(a), b=int(b), set=fam)
    except (PaletteError, ModulusError, ValueError) as exc:
        raise InputError(str(exc)) from None
    return rep, EXIT_OK


def _text_palette(rep):
    if "edges" in rep:
        return (f"G({rep['set']}) mod {rep['p']}: {len(rep['edges'])} edges "
                f"{' '.join(rep['edges'])}; {'connected' if rep['connected'] else 'disconnected'}")
    if "classification" in rep:
        c = rep["classification"]
        lines = [f"p={c['p']} size {c['size']}: {c['connected']} of {c['total_subsets']} connected, "
                 f"{len(c['classes'])} affine classes"]
        for k in c["classes"]:
            lines.append(f"  {k['representative']} x {k['orbit_size']}")
        return "\n".join(lines)
    return "{" + ",".join(map(str, rep["set"])) + "}"


# -- reduce ------------------------------------------------------------------------

def cmd_reduce(args):
    from .rewrite.reduce import normalize_image, reduce_to_five
    from .rewrite.search import BudgetExhausted, PreconditionError, default_budget
    from .rewrite.state import ColoredDiagram
    D = _read_diagram(args.diagram)
    p = _prime(args.p)
    try:
        budget = args.budget if args.budget is not None else default_budget()
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    if budget <= 0:
        raise InputError("budget must be positive")
    rep = {"command": "reduce", "p": p, "target": args.target, "budget": budget}
    if p != 11:
        rep["error"] = "reduction is defined for p = 11"
        return rep, EXIT_FAIL
    if coloring_space(D, p).rank < 2:
        rep["error"] = f"not {p}-colorable"
        return rep, EXIT_FAIL
    cd = ColoredDiagram.from_coloring(D, next(enumerate_nontrivial(D, p, limit=1)))
    try:
        norm = normalize_image(cd, budget)
        rep["normalize"] = norm.to_json()
        res = reduce_to_five(norm.state, args.target, budget)
    except BudgetExhausted as exc:
        rep["error"] = str(exc)
        rep["status"] = "budget-exhausted"
        rep["phase"] = exc.phase
        rep["best_image"] = sorted(exc.state.image) if exc.state else None
        if args.trace and exc.trace is not None:
            Path(args.trace).write_text(json.dumps(exc.trace.to_json()))
            rep["trace"] = args.trace
        return rep, EXIT_FAIL
    except PreconditionError as exc:
        rep["error"] = str(exc)
        rep["status"] = "precondition"
        return rep, EXIT_FAIL
    res.trace.replay()
    rep.update(status="ok", final_image=sorted(res.state.image), moves=len(res.trace),
               final_crossings=len(res.state), trace_verified=True, phases=res.phase_log,
               nodes=res.stats.nodes)
    tj = res.trace.to_json()
    if args.trace:
        Path(args.trace).write_text(json.dumps(tj))
        rep["trace"] = args.trace
    if args.figures:
        from .figures import palette_graph_figure, reduction_figure
        out = Path(args.figures)
        rep["figures"] = [reduction_figure(tj, out / "reduction.png"),
                          palette_graph_figure(sorted(res.state.image), p, out / "final_palette.png")]
    return rep, EXIT_OK


def _text_reduce(rep):
    if rep.get("status") != "ok":
        return f"reduce: {rep.get('error')}"
    lines = [f"final Im={rep['final_image']} after {rep['moves']} moves "
             f"({rep['final_crossings']} crossings); trace verified"]
    for ph in rep["phases"]:
        lines.append(f"  {ph['phase']}: {ph['moves']} moves, {ph['nodes']} searched")
    return "\n".join(lines)


# -- verify ------------------------------------------------------------------------

def cmd_verify(args):
    from .verify import SUPPORTED_PRIMES, run_verification
    p = _prime(args.p)
    if p not in SUPPORTED_PRIMES:
        raise InputError(f"exhaustive suites support p in {list(SUPPORTED_PRIMES)}")
    report = run_verification(p, args.full, args.workers)
    rep = {"command": "verify", **report.to_json()}
    rep["_text"] = report.to_text()
    return rep, EXIT_OK if report.status == "pass" else EXIT_FAIL


# -- entry point -------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="foxpalette", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print the report as JSON")
        sp.add_argument("--figures", metavar="DIR", help="write PNG figures into DIR")

    c = sub.add_parser("color", help="coloring space, determinant, image sizes")
    c.add_argument("diagram")
    c.add_argument("-p", required=True)
    c.add_argument("--basis", action="store_true")
    c.add_argument("--all", action="store_true")
    c.add_argument("--limit", type=int, default=200)
    c.add_argument("--min-image", action="store_true")
    c.add_argument("--expect-colorable", action="store_true", help="exit 1 when rank < 2")
    common(c)

    pl = sub.add_parser("palette", help="palette graphs, census, families")
    pl.add_argument("-p", required=True)
    g = pl.add_mutually_exclusive_group(required=True)
    g.add_argument("--set")
    g.add_argument("--classify", type=int, metavar="SIZE")
    g.add_argument("--family", nargs=3, metavar=("FAMILY", "a", "b"))
    pl.add_argument("--members", action="store_true")
    common(pl)

    r = sub.add_parser("reduce", help="reduce an 11-colored diagram to five colors")
    r.add_argument("diagram")
    r.add_argument("-p", default="11")
    r.add_argument("--target", choices=("A", "B"), default="A")
    r.add_argument("--budget", type=int)
    r.add_argument("--trace", metavar="OUT")
    common(r)

    v = sub.add_parser("verify", help="run the verification battery")
    v.add_argument("-p", required=True)
    v.add_argument("--full", action="store_true")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--json", action="store_true")
    return ap


HANDLERS = {"color": (cmd_color, _text_color), "palette": (cmd_palette, _text_palette),
            "reduce": (cmd_reduce, _text_reduce), "verify": (cmd_verify, lambda r: r["_text"])}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    run, text = HANDLERS[args.command]
    try:
        rep, code = run(args)
    except InputError as exc:
        rep, code = {"command": args.command, "error": str(exc)}, EXIT_INPUT
        if args.json:
            print(json.dumps({"schema": SCHEMA_VERSION, **rep}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code
    if args.json:
        rep = {k: v for k, v in rep.items() if not k.startswith("_")}
        rep.setdefault("schema", SCHEMA_VERSION)
        print(json.dumps(rep, sort_keys=True))
    else:
        print(text(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
