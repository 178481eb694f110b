"""Command-line pipeline.

Exit codes follow one rule everywhere: 0 means success (and "yes" for
decision commands), 1 means a sound mathematical "no" (no valid partition,
no arrangement, verification failed), 2 means the run itself went wrong
(bad usage, unreadable file, invalid data).  Results go to stdout or --out
as JSON; progress, timings and warnings go to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from .cgraph import build_collision_graph, induced, is_acyclic, multi_edged_subgraph, to_dot
from .collide import (
    DetectionConfig,
    DetectionError,
    detect_all,
    pairs_from_json,
    pairs_to_json,
)
from .exprs import ExprDomainError
from .families import Dixon1Params, Dixon2Params, S2Params, dixon1, dixon2, s2
from .motion import (
    GraphFormatError,
    MovingGraph,
    eval_position,
    load_graph,
    save_graph,
    validate_edge_lengths,
)
from .plan import (
    SearchCapError,
    assign_heights,
    decide_partition,
    exists_arrangement,
    heights_from_json,
    heights_to_json,
    make_partition,
    verify_collision_free,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph_file(path: str) -> MovingGraph:
    return load_graph(_read(path))


def _csv_floats(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in raw.split(",") if x.strip() != "")
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {raw!r}") from None


_SIGNS = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}


def _csv_signs(raw: str) -> tuple[int, ...]:
    out = []
    for piece in raw.split(","):
        piece = piece.strip()
        if piece == "":
            continue
        if piece not in _SIGNS:
            raise ValueError(f"signs must be '+' or '-', got {piece!r}")
        out.append(_SIGNS[piece])
    return tuple(out)


def _interval(raw: str) -> tuple[float, float]:
    parts = raw.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected an interval 'a:b', got {raw!r}")
    return float(parts[0]), float(parts[1])


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args: argparse.Namespace) -> int:
    fam = args.family
    if fam == "dixon1":
        if args.m is None or args.n is None:
            raise ValueError("dixon1 needs --m and --n")
        m, n = args.m, args.n
        a = _csv_floats(args.a) if args.a else tuple(float(k) for k in range(1, m))
        b = _csv_floats(args.b) if args.b else tuple(float(k) for k in range(1, n))
        sx = _csv_signs(args.sx) if args.sx else (1,) * (m - 1)
        sy = _csv_signs(args.sy) if args.sy else (1,) * (n - 1)
        g = dixon1(Dixon1Params(m, n, a, b, sx, sy))
    elif fam == "dixon2":
        if args.a is None or args.b is None or args.d is None:
            raise ValueError("dixon2 needs --a, --b and --d")
        g = dixon2(Dixon2Params(float(args.a), float(args.b), float(args.d)))
    else:
        p = S2Params(
            float(args.a) if args.a is not None else 1.0,
            float(args.b) if args.b is not None else 11.0 / 5.0,
            float(args.c) if args.c is not None else 1.5,
        )
        g = s2(p)
    _emit(save_graph(g), args.out)
    _say(f"generate: {fam} with {len(g.vertices)} vertices, {len(g.edges)} edges")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    t0 = time.perf_counter()
    report = validate_edge_lengths(g, samples=args.samples, tol=args.tol)
    dt = time.perf_counter() - t0
    data = {
        "pass": report.passed,
        "tol": report.tol,
        "samples": args.samples,
        "edges": [
            {"edge": list(s.edge), "mean": s.mean, "max_deviation": s.max_deviation}
            for s in report.edges
        ],
        "isolated_vertices": list(g.isolated_vertices),
    }
    _emit(_json(data), args.out)
    worst = max((s.max_deviation for s in report.edges), default=0.0)
    _say(f"validate: {len(report.edges)} edges, worst deviation {worst:.17g}, {dt:.3f}s")
    if g.isolated_vertices:
        _say(f"validate: isolated vertices present: {', '.join(g.isolated_vertices)}")
    return EXIT_OK if report.passed else EXIT_NO


def cmd_detect(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    if args.interval is not None:
        g = dataclasses.replace(g, domain=_interval(args.interval))
    cfg = DetectionConfig(
        samples=args.samples, collide_eps=args.eps, report_margin=args.report_margin
    )
    _warn_if_not_periodic(g)
    t0 = time.perf_counter()
    result = detect_all(g, cfg)
    dt = time.perf_counter() - t0
    margin = result.clear_margin if cfg.report_margin else None
    _emit(pairs_to_json(result.pairs, args.graph, margin=margin), args.out)
    _say(f"detect: {result.probed} pairs probed, {len(result.pairs)} collisions, {dt:.3f}s")
    if result.clear_margin is not None:
        _say(f"detect: clear margin {result.clear_margin:.17g}")
    for probe in result.ambiguous:
        _say(
            f"detect: AMBIGUOUS ({probe.vertex}, {probe.edge[0]}-{probe.edge[1]}): "
            f"min gap {probe.min_gap:.17g} at t={probe.witness_t:.17g}"
        )
    return EXIT_OK


def _warn_if_not_periodic(g: MovingGraph, tol: float = 1e-9) -> None:
    t0, t1 = g.domain
    for v in g.vertices:
        x0, y0 = eval_position(g, v, t0)
        x1, y1 = eval_position(g, v, t1)
        if abs(x0 - x1) > tol or abs(y0 - y1) > tol:
            _say(
                f"detect: warning: motion of {v!r} does not return to its start over "
                f"[{t0:.17g}, {t1:.17g}]; collisions outside this window are not seen"
            )
            return


def cmd_cgraph(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    pairs = pairs_from_json(_read(args.pairs), g)
    c = build_collision_graph(g, pairs)
    _emit(to_dot(c), args.dot)
    two = multi_edged_subgraph(c)
    _say(f"cgraph: {len(c.nodes)} nodes, {len(c.arcs)} arcs, {len(two.edges)} two-cycles")
    return EXIT_OK


def cmd_plan(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    pairs = pairs_from_json(_read(args.pairs), g)
    c = build_collision_graph(g, pairs)
    t0 = time.perf_counter()
    if args.upper is not None:
        wanted = tuple(x.strip() for x in args.upper.split(",") if x.strip() != "")
        partition = make_partition(g.edge_labels, wanted)
        for name, side in (("upper", partition.upper), ("lower", partition.lower)):
            ok, cycle = is_acyclic(induced(c, side))
            if not ok:
                data = {
                    "result": "NO",
                    "reason": "partition-not-acyclic",
                    "side": name,
                    "cycle": list(cycle),
                }
                _emit(_json(data), args.out)
                _say(f"plan: the given {name} class contains the cycle {' -> '.join(cycle)}")
                return EXIT_NO
    else:
        decision = decide_partition(c)
        if not decision.found:
            data = {"result": "NO", "reason": decision.reason}
            if decision.odd_cycle is not None:
                data["odd_cycle"] = list(decision.odd_cycle)
            _emit(_json(data), args.out)
            dt = time.perf_counter() - t0
            _say(f"plan: no acyclic bipartition ({decision.reason}), {dt:.3f}s")
            return EXIT_NO
        partition = decision.partition
    heights = assign_heights(g, pairs, partition)
    _emit(heights_to_json(g.edge_labels, heights, partition), args.out)
    dt = time.perf_counter() - t0
    _say(f"plan: heights span [{min(heights.values())}, {max(heights.values())}], {dt:.3f}s")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    pairs = pairs_from_json(_read(args.pairs), g)
    heights, _ = heights_from_json(_read(args.heights))
    report = verify_collision_free(g, pairs, heights)
    data = {
        "ok": report.ok,
        "violations": [
            {
                "vertex": v.vertex,
                "edge": list(v.edge),
                "edge_height": v.edge_height,
                "range": [v.lo, v.hi],
            }
            for v in report.violations
        ],
    }
    _emit(_json(data), args.out)
    _say(f"verify: {len(report.violations)} violation(s) over {len(pairs)} pairs")
    return EXIT_OK if report.ok else EXIT_NO


def cmd_exists(args: argparse.Namespace) -> int:
    g = _load_graph_file(args.graph)
    pairs = pairs_from_json(_read(args.pairs), g)
    t0 = time.perf_counter()
    witness = exists_arrangement(g, pairs)
    dt = time.perf_counter() - t0
    if witness is None:
        _emit(_json({"result": "NO"}), args.out)
        _say(f"exists: no collision-free arrangement, {dt:.3f}s")
        return EXIT_NO
    data = {"result": "YES", "heights": {lab: witness[lab] for lab in g.edge_labels}}
    _emit(_json(data), args.out)
    _say(f"exists: witness found, {dt:.3f}s")
    return EXIT_OK


def _json(data) -> str:
    import json

    return json.dumps(data, indent=2) + "\n"


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lmodel",
        description="Detect vertex-edge collisions in a planar moving graph and "
        "plan collision-free integer heights for its edges.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a built-in family instance as graph JSON")
    g.add_argument("--family", required=True, choices=("dixon1", "dixon2", "s2"))
    g.add_argument("--m", type=int, help="dixon1: size of the x-axis class")
    g.add_argument("--n", type=int, help="dixon1: size of the y-axis class")
    g.add_argument("--a", help="dixon1: csv radii; dixon2/s2: length parameter a")
    g.add_argument("--b", help="dixon1: csv radii; dixon2/s2: length parameter b")
    g.add_argument("--c", help="s2: length parameter c")
    g.add_argument("--d", help="dixon2: length parameter d")
    g.add_argument("--sx", help="dixon1: csv axis-side signs for p1..")
    g.add_argument("--sy", help="dixon1: csv axis-side signs for q1..")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check that every edge length stays constant")
    v.add_argument("graph")
    v.add_argument("--samples", type=int, default=512)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("detect", help="find all vertex-edge collision pairs")
    d.add_argument("graph")
    d.add_argument("--samples", type=int, default=2048)
    d.add_argument("--eps", type=float, default=1e-7)
    d.add_argument("--interval", help="override the analysis interval, as 'a:b'")
    d.add_argument("--report-margin", action="store_true")
    d.add_argument("--out")
    d.set_defaults(func=cmd_detect)

    c = sub.add_parser("cgraph", help="export the collision graph as DOT")
    c.add_argument("graph")
    c.add_argument("pairs")
    c.add_argument("--dot", help="output path (default stdout)")
    c.set_defaults(func=cmd_cgraph)

    p = sub.add_parser("plan", help="find heights via an acyclic bipartition")
    p.add_argument("graph")
    p.add_argument("pairs")
    p.add_argument("--upper", help="csv edge labels to force into the upper class")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan)

    w = sub.add_parser("verify", help="check a height assignment against the pairs")
    w.add_argument("graph")
    w.add_argument("pairs")
    w.add_argument("heights")
    w.add_argument("--out")
    w.set_defaults(func=cmd_verify)

    e = sub.add_parser("exists", help="decide exactly whether any heights work")
    e.add_argument("graph")
    e.add_argument("pairs")
    e.add_argument("--out")
    e.set_defaults(func=cmd_exists)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        GraphFormatError,
        ExprDomainError,
        DetectionError,
        SearchCapError,
        ValueError,
        OSError,
    ) as err:
        _say(f"error: {err}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
