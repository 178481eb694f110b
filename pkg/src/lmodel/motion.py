"""Moving graphs: vertices on planar parametric trajectories, fixed edges.

The data model is deliberately plain.  A graph knows its vertex order, its
edge order (the file order, used everywhere as the canonical order), one
(x, y) expression pair per vertex, and the closed time interval under
analysis.  Edge lengths are *supposed* to stay constant over the interval;
:func:`validate_edge_lengths` checks that numerically rather than trusting
the input.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .exprs import (
    Expr,
    ExprDomainError,
    ExprSyntaxError,
    evaluate,
    evaluate_on,
    parse_expression,
    to_text,
)

__all__ = [
    "TAU",
    "GraphFormatError",
    "MovingGraph",
    "edge_label",
    "eval_position",
    "positions_on_grid",
    "EdgeLengthStats",
    "LengthReport",
    "validate_edge_lengths",
    "load_graph",
    "save_graph",
]

TAU = 2.0 * math.pi

# vertex ids double as halves of edge labels "u-v", so no dashes or whitespace
_ID_BAD = re.compile(r"[\s-]")


class GraphFormatError(ValueError):
    """Invalid graph structure or file content."""


def edge_label(edge: tuple[str, str]) -> str:
    return f"{edge[0]}-{edge[1]}"


@dataclass(frozen=True)
class MovingGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    motion: Mapping[str, tuple[Expr, Expr]]
    domain: tuple[float, float] = (0.0, TAU)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((u, v) for u, v in self.edges))
        object.__setattr__(self, "motion", dict(self.motion))
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))
        self._validate()

    def _validate(self) -> None:
        seen: set[str] = set()
        for v in self.vertices:
            if not isinstance(v, str) or not v or _ID_BAD.search(v):
                raise GraphFormatError(
                    f"bad vertex id {v!r}: ids are nonempty strings without '-' or whitespace"
                )
            if v in seen:
                raise GraphFormatError(f"duplicate vertex {v!r}")
            seen.add(v)
        eseen: set[frozenset[str]] = set()
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"self-loop at {u!r}")
            if u not in seen or v not in seen:
                raise GraphFormatError(f"edge ({u!r}, {v!r}) has a dangling endpoint")
            key = frozenset((u, v))
            if key in eseen:
                raise GraphFormatError(f"duplicate edge {u!r}-{v!r}")
            eseen.add(key)
        for v in self.vertices:
            if v not in self.motion:
                raise GraphFormatError(f"vertex {v!r} has no motion")
        for v in self.motion:
            if v not in seen:
                raise GraphFormatError(f"motion given for unknown vertex {v!r}")
        for v, pair in self.motion.items():
            if len(pair) != 2 or not all(isinstance(c, Expr) for c in pair):
                raise GraphFormatError(f"motion of {v!r} must be a pair of expressions")
        t0, t1 = self.domain
        if not (math.isfinite(t0) and math.isfinite(t1) and t0 < t1):
            raise GraphFormatError(f"bad time domain {self.domain!r}")

    @cached_property
    def edge_labels(self) -> tuple[str, ...]:
        return tuple(edge_label(e) for e in self.edges)

    @cached_property
    def edge_by_label(self) -> dict[str, tuple[str, str]]:
        return {edge_label(e): e for e in self.edges}

    @cached_property
    def incident(self) -> dict[str, tuple[str, ...]]:
        """Labels of the edges at each vertex, in canonical edge order."""
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            lab = edge_label(e)
            inc[e[0]].append(lab)
            inc[e[1]].append(lab)
        return {v: tuple(labs) for v, labs in inc.items()}

    @cached_property
    def isolated_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.incident[v])


def eval_position(g: MovingGraph, v: str, t: float) -> tuple[float, float]:
    if v not in g.motion:
        raise GraphFormatError(f"unknown vertex {v!r}")
    xe, ye = g.motion[v]
    try:
        return float(evaluate(xe, t)), float(evaluate(ye, t))
    except ExprDomainError as err:
        raise ExprDomainError(f"vertex {v!r}: {err.reason}", err.expr, err.t) from None


def positions_on_grid(
    g: MovingGraph, ts: np.ndarray, vertices: Iterable[str] | None = None
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for v in g.vertices if vertices is None else vertices:
        xe, ye = g.motion[v]
        try:
            out[v] = (evaluate_on(xe, ts), evaluate_on(ye, ts))
        except ExprDomainError as err:
            raise ExprDomainError(f"vertex {v!r}: {err.reason}", err.expr, err.t) from None
    return out


@dataclass(frozen=True)
class EdgeLengthStats:
    edge: tuple[str, str]
    mean: float
    max_deviation: float


@dataclass(frozen=True)
class LengthReport:
    edges: tuple[EdgeLengthStats, ...]
    tol: float
    passed: bool


def validate_edge_lengths(g: MovingGraph, samples: int = 512, tol: float = 1e-9) -> LengthReport:
    """Sample every edge length and report the worst deviation from its mean."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ts = np.linspace(g.domain[0], g.domain[1], samples)
    needed = {w for e in g.edges for w in e}
    pos = positions_on_grid(g, ts, [v for v in g.vertices if v in needed])
    stats = []
    for u, v in g.edges:
        xu, yu = pos[u]
        xv, yv = pos[v]
        lens = np.hypot(xu - xv, yu - yv)
        mean = float(lens.mean())
        dev = float(np.max(np.abs(lens - mean)))
        stats.append(EdgeLengthStats((u, v), mean, dev))
    passed = all(s.max_deviation <= tol for s in stats)
    return LengthReport(tuple(stats), tol, passed)


# ---------------------------------------------------------------------------
# file format


def load_graph(text: str) -> MovingGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise GraphFormatError(f"invalid JSON: {err}") from None
    if not isinstance(data, dict):
        raise GraphFormatError("top-level value must be an object")
    verts_raw = data.get("vertices")
    edges_raw = data.get("edges")
    if not isinstance(verts_raw, list) or not isinstance(edges_raw, list):
        raise GraphFormatError("'vertices' and 'edges' must be arrays")

    vertices: list[str] = []
    motion: dict[str, tuple[Expr, Expr]] = {}
    for entry in verts_raw:
        if not isinstance(entry, dict) or not {"id", "x", "y"} <= entry.keys():
            raise GraphFormatError(f"vertex entry {entry!r} needs 'id', 'x' and 'y'")
        vid = entry["id"]
        if not isinstance(vid, str):
            raise GraphFormatError(f"vertex id {vid!r} must be a string")
        exprs = []
        for coord in ("x", "y"):
            raw = entry[coord]
            if not isinstance(raw, str):
                raise GraphFormatError(f"vertex {vid!r}: {coord} must be an expression string")
            try:
                exprs.append(parse_expression(raw))
            except ExprSyntaxError as err:
                raise GraphFormatError(f"vertex {vid!r}, {coord}: {err}") from None
        vertices.append(vid)
        motion[vid] = (exprs[0], exprs[1])

    edges: list[tuple[str, str]] = []
    for raw in edges_raw:
        if not (isinstance(raw, list) and len(raw) == 2 and all(isinstance(x, str) for x in raw)):
            raise GraphFormatError(f"edge entry {raw!r} must be a pair of vertex ids")
        edges.append((raw[0], raw[1]))

    domain_raw = data.get("domain", [0.0, TAU])
    if not (
        isinstance(domain_raw, list)
        and len(domain_raw) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in domain_raw)
    ):
        raise GraphFormatError("'domain' must be a pair of numbers [t0, t1]")

    return MovingGraph(
        tuple(vertices), tuple(edges), motion, (float(domain_raw[0]), float(domain_raw[1]))
    )


def save_graph(g: MovingGraph) -> str:
    data = {
        "domain": [g.domain[0], g.domain[1]],
        "vertices": [
            {"id": v, "x": to_text(g.motion[v][0]), "y": to_text(g.motion[v][1])}
            for v in g.vertices
        ],
        "edges": [[u, v] for u, v in g.edges],
    }
    return json.dumps(data, indent=2) + "\n"
