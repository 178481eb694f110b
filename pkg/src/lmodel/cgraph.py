"""The collision graph: one node per edge of the moving graph.

An arc e -> f means some endpoint of e collides with f, i.e. e must stay
clear of f's layer while that endpoint crosses it.  Node order is inherited
from the canonical edge order and drives every tie-break below, so repeated
runs produce identical output.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .collide import CollisionPair
from .motion import MovingGraph, edge_label

__all__ = [
    "CollisionGraph",
    "MultiEdgedSubgraph",
    "BipartiteResult",
    "build_collision_graph",
    "induced",
    "is_acyclic",
    "multi_edged_subgraph",
    "bipartition",
    "to_dot",
]


@dataclass(frozen=True)
class CollisionGraph:
    nodes: tuple[str, ...]
    arcs: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("duplicate nodes")
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"self-arc at {u!r}")
            if u not in known or v not in known:
                raise ValueError(f"arc ({u!r}, {v!r}) leaves the node set")

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        succ: dict[str, list[str]] = {n: [] for n in self.nodes}
        for u, v in self.arcs:
            succ[u].append(v)
        return {n: tuple(sorted(vs, key=self.index.__getitem__)) for n, vs in succ.items()}


def build_collision_graph(g: MovingGraph, pairs: Iterable[CollisionPair]) -> CollisionGraph:
    labels = g.edge_labels
    known = set(labels)
    arcs: set[tuple[str, str]] = set()
    for p in pairs:
        if p.vertex not in g.incident:
            raise ValueError(f"pair references unknown vertex {p.vertex!r}")
        target = edge_label(p.edge)
        if target not in known:
            raise ValueError(f"pair references unknown edge {target!r}")
        for src in g.incident[p.vertex]:
            if src != target:
                arcs.add((src, target))
    return CollisionGraph(labels, frozenset(arcs))


def induced(c: CollisionGraph, keep: Iterable[str]) -> CollisionGraph:
    keep_set = set(keep)
    unknown = keep_set - set(c.nodes)
    if unknown:
        raise ValueError(f"unknown nodes: {sorted(unknown)}")
    nodes = tuple(n for n in c.nodes if n in keep_set)
    arcs = frozenset((u, v) for (u, v) in c.arcs if u in keep_set and v in keep_set)
    return CollisionGraph(nodes, arcs)


def is_acyclic(c: CollisionGraph) -> tuple[bool, tuple[str, ...] | None]:
    """DFS cycle check. On failure returns a closed node sequence as witness."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in c.nodes}
    path: list[str] = []

    def dfs(start: str) -> tuple[str, ...] | None:
        stack = [(start, iter(c.successors[start]))]
        color[start] = GRAY
        path.append(start)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    i = path.index(nxt)
                    return tuple(path[i:]) + (nxt,)
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, iter(c.successors[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
        return None

    for n in c.nodes:
        if color[n] == WHITE:
            cyc = dfs(n)
            if cyc is not None:
                return False, cyc
    return True, None


@dataclass(frozen=True)
class MultiEdgedSubgraph:
    """Nodes on directed two-cycles, one undirected edge per two-cycle."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def neighbors(self) -> dict[str, tuple[str, ...]]:
        nb: dict[str, list[str]] = {n: [] for n in self.nodes}
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return {n: tuple(sorted(vs, key=self.index.__getitem__)) for n, vs in nb.items()}


def multi_edged_subgraph(c: CollisionGraph) -> MultiEdgedSubgraph:
    idx = c.index
    und = set()
    for u, v in c.arcs:
        if (v, u) in c.arcs and idx[u] < idx[v]:
            und.add((u, v))
    members = {n for uv in und for n in uv}
    nodes = tuple(n for n in c.nodes if n in members)
    return MultiEdgedSubgraph(nodes, frozenset(und))


@dataclass(frozen=True)
class BipartiteResult:
    bipartite: bool
    coloring: dict[str, int] | None
    components: tuple[tuple[str, ...], ...]
    odd_cycle: tuple[str, ...] | None


def bipartition(u: MultiEdgedSubgraph) -> BipartiteResult:
    """Two-color u per connected component; on failure find a shortest odd cycle.

    The first node of each component (in canonical order) gets color 0, so
    the coloring is canonical too.  The odd-cycle witness is a closed node
    sequence of minimum length, which for a triangle-containing graph is
    always a triangle.
    """
    color: dict[str, int] = {}
    comps: list[tuple[str, ...]] = []
    ok = True
    for start in u.nodes:
        if start in color:
            continue
        color[start] = 0
        comp = []
        queue = deque([start])
        while queue:
            node = queue.popleft()
            comp.append(node)
            for nb in u.neighbors[node]:
                if nb not in color:
                    color[nb] = 1 - color[node]
                    queue.append(nb)
                elif color[nb] == color[node]:
                    ok = False
        comps.append(tuple(comp))
    if ok:
        return BipartiteResult(True, color, tuple(comps), None)
    return BipartiteResult(False, None, tuple(comps), _shortest_odd_cycle(u))


def _path_to_root(n: str, parent: dict[str, str | None]) -> list[str]:
    out = [n]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


def _shortest_odd_cycle(u: MultiEdgedSubgraph) -> tuple[str, ...]:
    idx = u.index
    edges = sorted(u.edges, key=lambda e: (idx[e[0]], idx[e[1]]))
    best: tuple[int, tuple[int, ...], tuple[str, ...]] | None = None
    for s in u.nodes:
        dist: dict[str, int] = {s: 0}
        parent: dict[str, str | None] = {s: None}
        queue = deque([s])
        while queue:
            n = queue.popleft()
            for nb in u.neighbors[n]:
                if nb not in dist:
                    dist[nb] = dist[n] + 1
                    parent[nb] = n
                    queue.append(nb)
        for x, y in edges:
            if x in dist and y in dist and dist[x] == dist[y]:
                px = _path_to_root(x, parent)
                py = _path_to_root(y, parent)
                in_py = set(py)
                lca = next(n for n in px if n in in_py)
                up = px[: px.index(lca) + 1]
                down = py[: py.index(lca)]
                cycle = tuple(up) + tuple(reversed(down)) + (x,)
                key = (len(cycle), tuple(idx[n] for n in cycle))
                if best is None or key < best[:2]:
                    best = (key[0], key[1], cycle)
    assert best is not None, "called on a bipartite graph"
    return best[2]


def to_dot(c: CollisionGraph) -> str:
    idx = c.index
    lines = ["digraph C {"]
    for n in c.nodes:
        lines.append(f'  "{n}";')
    for u, v in sorted(c.arcs, key=lambda a: (idx[a[0]], idx[a[1]])):
        lines.append(f'  "{u}" -> "{v}";')
    two = multi_edged_subgraph(c)
    for u, v in sorted(two.edges, key=lambda e: (idx[e[0]], idx[e[1]])):
        lines.append(f'  "{u}" -> "{v}" [dir=none, color=red];')
    lines.append("}")
    return "\n".join(lines) + "\n"
