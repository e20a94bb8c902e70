"""Command-line front end.

Every subcommand writes a single JSON document to stdout (with a short
"summary" field) and exits 0 on success.  Errors print a JSON error document
and exit with the taxonomy code: 2 validation, 3 unrealizable/inapplicable,
4 search budget, 5 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import decomposition as dc
from . import dehn_thurston as dt
from . import fenchel_nielsen as fnmod
from . import klein
from . import moves as mv
from .errors import CrosscapError, ValidationError
from .surfaces import classify, invariants, parse_surface


def _load_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read JSON from {path}: {exc}") from exc


def _load_decomposition(path: str) -> dc.PantsDecomposition:
    d = dc.PantsDecomposition.from_json(_load_json(path))
    dc.validate(d)
    return d


def _emit(doc: dict) -> int:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


# -- surface ---------------------------------------------------------------------


def _cmd_surface_info(args: argparse.Namespace) -> int:
    surface = parse_surface(args.literal)
    inv = invariants(surface)
    return _emit(
        {
            "surface": str(surface),
            "orientable": surface.orientable,
            "genus": surface.genus,
            "boundary": surface.boundary,
            "punctures": surface.punctures,
            "chi": inv.chi,
            "pants_count": inv.pants_count,
            "max_crosscaps": inv.max_crosscaps,
            "admits_pants_decomposition": inv.admits,
            "summary": f"{surface}: chi={inv.chi}, pants={inv.pants_count}, "
            f"max 1-sided curves {inv.max_crosscaps}",
        }
    )


def _cmd_surface_classify(args: argparse.Namespace) -> int:
    surface = classify(args.chi, args.orientable == "yes", args.boundary, args.punctures)
    return _emit({"surface": str(surface), "summary": f"chi={args.chi} -> {surface}"})


# -- pants -----------------------------------------------------------------------


def _cmd_pants_validate(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    surface = dc.validate(d)
    return _emit(
        {
            "surface": str(surface),
            "orientable_decomposition": dc.is_orientable_decomposition(d),
            "canonical_key_digest": dc.key_digest(dc.canonical_key(d, absorb=args.absorption)),
            "summary": f"valid decomposition of {surface}",
        }
    )


def _cmd_pants_enumerate(args: argparse.Namespace) -> int:
    surface = parse_surface(args.surface) if args.surface else None
    reps = dc.enumerate_types(
        args.pants, surface, absorption=args.absorption, jobs=args.jobs
    )
    by_surface: dict[str, int] = {}
    for d in reps:
        name = str(dc.validate(d))
        by_surface[name] = by_surface.get(name, 0) + 1
    return _emit(
        {
            "pants": args.pants,
            "absorption": args.absorption,
            "count": len(reps),
            "by_surface": dict(sorted(by_surface.items())),
            "types": [
                {
                    "surface": str(dc.validate(d)),
                    "key_digest": dc.key_digest(dc.canonical_key(d, absorb=args.absorption)),
                    "decomposition": d.to_json(),
                }
                for d in reps
            ],
            "summary": f"{len(reps)} decomposition types on {args.pants} pants",
        }
    )


def _cmd_pants_census(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    census = dc.curve_census(d)
    return _emit(
        {
            "one_sided": census.one_sided,
            "two_sided_interior": census.two_sided_interior,
            "boundary": census.boundary,
            "punctures": census.punctures,
            "summary": f"{census.one_sided} one-sided, {census.two_sided_interior} interior "
            f"two-sided, {census.boundary} boundary, {census.punctures} punctures",
        }
    )


# -- moves -----------------------------------------------------------------------


def _cmd_moves_list(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    sites = [m.literal for m in mv.applicable_moves(d)]
    return _emit({"moves": sites, "summary": f"{len(sites)} applicable moves"})


def _cmd_moves_apply(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    result = d
    applied = []
    for literal in args.move:
        move = mv.parse_move(literal)
        result = mv.apply_move(result, move)
        applied.append(move.literal)
    return _emit(
        {
            "applied": applied,
            "result": result.to_json(),
            "surface": str(dc.validate(result)),
            "summary": f"applied {len(applied)} move(s)",
        }
    )


def _cmd_moves_path(args: argparse.Namespace) -> int:
    d1 = _load_decomposition(args.src)
    d2 = _load_decomposition(args.dst)
    seq = mv.find_move_path(d1, d2, absorption=args.absorption, budget=args.budget)
    return _emit(
        {
            "moves": seq.literals,
            "length": len(seq.moves),
            "end": seq.end().to_json(),
            "summary": f"path of {len(seq.moves)} move(s)",
        }
    )


def _cmd_moves_graph(args: argparse.Namespace) -> int:
    surface = parse_surface(args.surface)
    graph = mv.build_move_graph(surface, args.pants, absorption=args.absorption)
    doc = {
        "surface": str(surface),
        "pants": args.pants,
        "absorption": args.absorption,
        "nodes": [dc.key_digest(k) for k in sorted(graph.nodes)],
        "edges": [
            [dc.key_digest(k1), dc.key_digest(k2), label]
            for k1, k2, label in graph.undirected_edges
        ],
        "components": graph.components,
        "summary": f"{len(graph.nodes)} types, {graph.components} component(s)",
    }
    if args.dot:
        with open(args.dot, "w") as handle:
            handle.write(mv.to_dot(graph))
        doc["dot_path"] = args.dot
    return _emit(doc)


def _cmd_moves_orientify(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    seq = mv.orientify(d)
    return _emit(
        {
            "moves": seq.literals,
            "end": seq.end().to_json(),
            "summary": f"orientable after {len(seq.moves)} move(s)",
        }
    )


def _cmd_moves_reduce(args: argparse.Namespace) -> int:
    d = _load_decomposition(args.input)
    seq = mv.reduce_crosscaps(d)
    end = seq.end()
    return _emit(
        {
            "moves": seq.literals,
            "end": end.to_json(),
            "one_sided": dc.curve_census(end).one_sided,
            "summary": f"{dc.curve_census(end).one_sided} one-sided curves after "
            f"{len(seq.moves)} move(s)",
        }
    )


# -- dt --------------------------------------------------------------------------


def _load_vector(path: str) -> dt.DTVector:
    return dt.DTVector.from_json(_load_json(path))


def _cmd_dt_realizable(args: argparse.Namespace) -> int:
    v = _load_vector(args.vector)
    real = dt.realizable(v)
    return _emit(
        {
            "realizable": real.ok,
            "reason": real.reason,
            "summary": "realizable" if real.ok else f"unrealizable: {real.reason}",
        }
    )


def _cmd_dt_decode(args: argparse.Namespace) -> int:
    v = _load_vector(args.vector)
    cs = dt.decode(v)
    return _emit({"curve_system": cs.to_json(), "summary": "decoded to standard position"})


def _cmd_dt_encode(args: argparse.Namespace) -> int:
    doc = _load_json(args.system)
    base = dc.PantsDecomposition.from_json(doc["base"])
    arcs = []
    for table in doc.get("arcs", []):
        arcs.append({(int(k[0]), int(k[1])): int(c) for k, c in table.items()})
    pieces = {
        label: (int(val["covers"]), bool(val["core"]))
        for label, val in doc.get("crosscap_pieces", {}).items()
    }
    cs = dt.CurveSystem(
        base,
        tuple(arcs),
        pieces,
        {k: int(v) for k, v in doc.get("parallels", {}).items()},
        {k: int(v) for k, v in doc.get("twists", {}).items()},
    )
    v = dt.encode(cs)
    return _emit({"vector": v.to_json(), "summary": "encoded"})


def _cmd_dt_components(args: argparse.Namespace) -> int:
    v = _load_vector(args.vector)
    report = dt.components(v)
    return _emit(
        {
            "count": len(report),
            "components": [
                {
                    "closed": c.closed,
                    "sided": c.sided,
                    "peripheral": c.peripheral,
                    "strands": c.strands,
                    "kind": c.kind,
                    "detail": c.detail,
                }
                for c in report.components
            ],
            "summary": f"{len(report)} component(s): "
            f"{len(report.closed_components)} closed, {len(report.arc_components)} arcs",
        }
    )


def _cmd_dt_chart(args: argparse.Namespace) -> int:
    v = _load_vector(args.vector)
    image = dt.mf_chart(v)
    return _emit(
        {
            "labels": dt.chart_labels(v.base),
            "point": [float(x) for x in image],
            "summary": f"chart point in R^{image.size}",
        }
    )


def _cmd_dt_project(args: argparse.Namespace) -> int:
    v = _load_vector(args.vector)
    w = dt.projectivize(v)
    return _emit({"vector": w.to_json(), "summary": "projectivized (chart sup-norm 1)"})


# -- k1 --------------------------------------------------------------------------


def _cmd_k1_neighbors(args: argparse.Namespace) -> int:
    c = klein.OneSidedCurve(args.index)
    ns = klein.neighbors(c)
    return _emit(
        {
            "curve": args.index,
            "neighbors": [x.index for x in ns],
            "summary": f"curve {args.index} is disjoint from {ns[0].index} and {ns[1].index}",
        }
    )


def _cmd_k1_path(args: argparse.Namespace) -> int:
    start = klein.parse_k1(args.src)
    goal = klein.parse_k1(args.dst)
    path = klein.k1_bfs_path(start, goal, window=args.window, moves=args.moves)
    return _emit(
        {
            "moves": [m.literal for m in path],
            "length": len(path),
            "summary": f"{len(path)} move(s) from {start} to {goal}",
        }
    )


# -- fn --------------------------------------------------------------------------


def _load_fn(path: str) -> fnmod.FNPoint:
    return fnmod.FNPoint.from_json(_load_json(path))


def _read_probes(args: argparse.Namespace) -> list[str]:
    probes: list[str] = list(args.probe or [])
    if args.probes:
        with open(args.probes) as handle:
            probes.extend(line.strip() for line in handle if line.strip())
    if not probes:
        raise ValidationError("no probe words given (use --probe or --probes)")
    return probes


def _cmd_fn_lengths(args: argparse.Namespace) -> int:
    fn = _load_fn(args.point)
    probes = _read_probes(args)
    spectrum = fnmod.length_spectrum(fn, probes)
    return _emit(
        {
            "probes": probes,
            "lengths": [float(x) for x in spectrum],
            "summary": f"{len(probes)} probe length(s)",
        }
    )


def _cmd_fn_y(args: argparse.Namespace) -> int:
    fn = _load_fn(args.point)
    site = args.site
    if not site.startswith("v"):
        raise ValidationError(f"Y-site must be a vertex like v0, got {site!r}")
    result = fnmod.y_action(fn, int(site[1:]))
    return _emit({"point": result.to_json(), "summary": f"Y-action at {site}"})


def _cmd_fn_twist(args: argparse.Namespace) -> int:
    fn = _load_fn(args.point)
    slope = fnmod.twist_flow_asymptotics(
        fn, args.edge, args.probe[0] if isinstance(args.probe, list) else args.probe,
        args.kappa, args.steps
    )
    return _emit(
        {
            "slope": slope.slope,
            "ell": slope.ell,
            "kappa": slope.kappa,
            "ratio": slope.ratio,
            "summary": f"slope {slope.slope:.6f} over {args.steps} twists"
            + (f", slope/(kappa*ell) = {slope.ratio:.6f}" if slope.ratio is not None else ""),
        }
    )


# -- parser ------------------------------------------------------------------------


def _absorption_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--absorption",
        choices=("on", "off"),
        default="on",
        help="crosscap absorption for canonical keys (default on)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosscap",
        description="Pants decompositions of non-orientable surfaces: moves and coordinates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    surface = sub.add_parser("surface", help="surface invariants").add_subparsers(
        dest="sub", required=True
    )
    info = surface.add_parser("info", help="invariants of F(g,r[,s]) / N(g,r[,s])")
    info.add_argument("literal")
    info.set_defaults(func=_cmd_surface_info)
    cls = surface.add_parser("classify", help="recover a surface from chi")
    cls.add_argument("chi", type=int)
    cls.add_argument("--orientable", choices=("yes", "no"), required=True)
    cls.add_argument("--boundary", type=int, default=0)
    cls.add_argument("--punctures", type=int, default=0)
    cls.set_defaults(func=_cmd_surface_classify)

    pants = sub.add_parser("pants", help="decomposition graphs").add_subparsers(
        dest="sub", required=True
    )
    val = pants.add_parser("validate", help="validate a decomposition JSON document")
    val.add_argument("--in", dest="input", required=True)
    _absorption_flag(val)
    val.set_defaults(func=_cmd_pants_validate)
    enum = pants.add_parser("enumerate", help="all decomposition types on n pants")
    enum.add_argument("--pants", type=int, required=True)
    enum.add_argument("--surface", help="filter to one surface literal")
    enum.add_argument("--jobs", type=int, default=1)
    _absorption_flag(enum)
    enum.set_defaults(func=_cmd_pants_enumerate)
    census = pants.add_parser("census", help="curve counts of a decomposition")
    census.add_argument("--in", dest="input", required=True)
    census.set_defaults(func=_cmd_pants_census)

    moves = sub.add_parser("moves", help="elementary moves").add_subparsers(
        dest="sub", required=True
    )
    lst = moves.add_parser("list", help="applicable moves")
    lst.add_argument("--in", dest="input", required=True)
    lst.set_defaults(func=_cmd_moves_list)
    app = moves.add_parser("apply", help="apply move literals in order")
    app.add_argument("--in", dest="input", required=True)
    app.add_argument("--move", action="append", required=True)
    app.set_defaults(func=_cmd_moves_apply)
    path = moves.add_parser("path", help="BFS move path between two decompositions")
    path.add_argument("--from", dest="src", required=True)
    path.add_argument("--to", dest="dst", required=True)
    path.add_argument("--budget", type=int, default=200_000)
    _absorption_flag(path)
    path.set_defaults(func=_cmd_moves_path)
    graph = moves.add_parser("graph", help="move graph of a surface")
    graph.add_argument("--surface", required=True)
    graph.add_argument("--pants", type=int, required=True)
    graph.add_argument("--dot", help="write a DOT export to this path")
    _absorption_flag(graph)
    graph.set_defaults(func=_cmd_moves_graph)
    ori = moves.add_parser("orientify", help="moves to an orientable decomposition")
    ori.add_argument("--in", dest="input", required=True)
    ori.set_defaults(func=_cmd_moves_orientify)
    red = moves.add_parser("reduce", help="moves to at most two 1-sided curves")
    red.add_argument("--in", dest="input", required=True)
    red.set_defaults(func=_cmd_moves_reduce)

    dtp = sub.add_parser("dt", help="Dehn-Thurston coordinates").add_subparsers(
        dest="sub", required=True
    )
    for name, func, arg in (
        ("realizable", _cmd_dt_realizable, "vector"),
        ("decode", _cmd_dt_decode, "vector"),
        ("components", _cmd_dt_components, "vector"),
        ("chart", _cmd_dt_chart, "vector"),
        ("project", _cmd_dt_project, "vector"),
    ):
        p = dtp.add_parser(name)
        p.add_argument("--vector", required=True, help="DT vector JSON path")
        p.set_defaults(func=func)
    enc = dtp.add_parser("encode")
    enc.add_argument("--system", required=True, help="curve-system JSON path")
    enc.set_defaults(func=_cmd_dt_encode)

    k1 = sub.add_parser("k1", help="Klein bottle minus a disk").add_subparsers(
        dest="sub", required=True
    )
    nb = k1.add_parser("neighbors", help="disjoint 1-sided curves")
    nb.add_argument("index", type=int)
    nb.set_defaults(func=_cmd_k1_neighbors)
    kp = k1.add_parser("path", help="move path between K1 decompositions")
    kp.add_argument("src", help="Pair:<n> or C2")
    kp.add_argument("dst", help="Pair:<n> or C2")
    kp.add_argument("--window", type=int, default=25)
    kp.add_argument("--moves", choices=("all", "III"), default="all")
    kp.set_defaults(func=_cmd_k1_path)

    fn = sub.add_parser("fn", help="Fenchel-Nielsen coordinates").add_subparsers(
        dest="sub", required=True
    )
    lengths = fn.add_parser("lengths", help="length spectrum over probe words")
    lengths.add_argument("--point", required=True)
    lengths.add_argument("--probe", action="append")
    lengths.add_argument("--probes", help="file with one probe word per line")
    lengths.set_defaults(func=_cmd_fn_lengths)
    y = fn.add_parser("y", help="Y-homeomorphism coordinate action")
    y.add_argument("--point", required=True)
    y.add_argument("--site", required=True, help="vertex carrying the crosscap pair, e.g. v0")
    y.set_defaults(func=_cmd_fn_y)
    tw = fn.add_parser("twist-asymptote", help="twist-flow length slope")
    tw.add_argument("--point", required=True)
    tw.add_argument("--edge", required=True)
    tw.add_argument("--probe", required=True)
    tw.add_argument("--kappa", type=int, required=True)
    tw.add_argument("--steps", type=int, default=50)
    tw.set_defaults(func=_cmd_fn_twist)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.absorption = getattr(args, "absorption", "on") == "on"
    try:
        return args.func(args)
    except CrosscapError as exc:
        sys.stdout.write(
            json.dumps(
                {"error": {"code": exc.exit_code, "message": str(exc)}},
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
