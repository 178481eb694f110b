"""Integer layer planning over the collision graph.

An arrangement lifts every edge of the moving graph to an integer height.
A collision pair (v, e) is harmless when e's height lies strictly outside
the closed range spanned by the heights of the edges at v, so v's pin can
pass e's layer without touching it.

``decide_partition`` searches for a split of the edge set into an upper and
a lower class whose induced collision subgraphs are both acyclic.  Such a
split always yields a collision-free arrangement (sweep the upper class
upward from 1, the lower class downward from 0), but its absence proves
nothing; ``exists_arrangement`` decides the general question exactly by
branching, per collision pair, on whether the colliding edge goes below or
above every edge at the vertex.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

from .cgraph import (
    CollisionGraph,
    bipartition,
    build_collision_graph,
    induced,
    is_acyclic,
    multi_edged_subgraph,
)
from .collide import CollisionPair
from .motion import GraphFormatError, MovingGraph, edge_label

__all__ = [
    "CyclicGraphError",
    "SearchCapError",
    "Partition",
    "PartitionDecision",
    "Violation",
    "VerifyReport",
    "make_partition",
    "minimal_nodes",
    "heights_up",
    "heights_down",
    "partition_is_valid",
    "decide_partition",
    "assign_heights",
    "verify_collision_free",
    "split_layers",
    "exists_arrangement",
    "dixon1_heights",
    "heights_to_json",
    "heights_from_json",
]


class CyclicGraphError(ValueError):
    def __init__(self, cycle: Sequence[str]):
        super().__init__("graph has a directed cycle: " + " -> ".join(cycle))
        self.cycle = tuple(cycle)


class SearchCapError(RuntimeError):
    """The partition search space is too large to enumerate exhaustively."""


@dataclass(frozen=True)
class Partition:
    upper: tuple[str, ...]
    lower: tuple[str, ...]


def make_partition(all_labels: Sequence[str], upper: Iterable[str]) -> Partition:
    upper_set = set(upper)
    unknown = upper_set - set(all_labels)
    if unknown:
        raise ValueError(f"unknown edge labels in partition: {sorted(unknown)}")
    return Partition(
        tuple(l for l in all_labels if l in upper_set),
        tuple(l for l in all_labels if l not in upper_set),
    )


def minimal_nodes(c: CollisionGraph) -> tuple[str, ...]:
    indeg = {n: 0 for n in c.nodes}
    for _, v in c.arcs:
        indeg[v] += 1
    return tuple(n for n in c.nodes if indeg[n] == 0)


def _sweep(c: CollisionGraph, start: int, step: int) -> dict[str, int]:
    ok, cycle = is_acyclic(c)
    if not ok:
        raise CyclicGraphError(cycle)
    heights: dict[str, int] = {}
    k = start
    cur = c
    while cur.nodes:
        wave = minimal_nodes(cur)
        for n in wave:
            heights[n] = k
            k += step
        gone = set(wave)
        cur = induced(cur, [n for n in cur.nodes if n not in gone])
    return heights


def heights_up(c: CollisionGraph) -> dict[str, int]:
    """Remove in-degree-0 waves, numbering 1, 2, ... so arcs point upward."""
    return _sweep(c, 1, +1)


def heights_down(c: CollisionGraph) -> dict[str, int]:
    """Remove in-degree-0 waves, numbering 0, -1, ... so arcs point downward."""
    return _sweep(c, 0, -1)


def partition_is_valid(c: CollisionGraph, p: Partition) -> bool:
    ok_u, _ = is_acyclic(induced(c, p.upper))
    ok_l, _ = is_acyclic(induced(c, p.lower))
    return ok_u and ok_l


@dataclass(frozen=True)
class PartitionDecision:
    partition: Partition | None
    reason: str | None = None
    odd_cycle: tuple[str, ...] | None = None

    @property
    def found(self) -> bool:
        return self.partition is not None


def decide_partition(c: CollisionGraph, max_free_nodes: int = 24) -> PartitionDecision:
    """Search for a bipartition of c with both induced subgraphs acyclic.

    Every pair of nodes joined by a directed two-cycle must be separated, so
    the two-cycle structure is two-colored first; a non-bipartite structure
    kills the search immediately, with a shortest odd cycle as witness.
    What remains is one flip choice per connected component plus a free side
    choice per node not on any two-cycle, enumerated depth-first with
    acyclicity checked as each choice lands.  Free nodes beyond
    ``max_free_nodes`` make that enumeration too big; that raises
    :class:`SearchCapError` rather than silently degrading.
    """
    u = multi_edged_subgraph(c)
    bip = bipartition(u)
    if not bip.bipartite:
        return PartitionDecision(None, "not-bipartite", bip.odd_cycle)
    in_u = set(u.nodes)
    free = [n for n in c.nodes if n not in in_u]
    if len(free) > max_free_nodes:
        raise SearchCapError(
            f"{len(free)} nodes outside the two-cycle structure exceed the cap of {max_free_nodes}"
        )

    items: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    for comp in bip.components:
        part0 = tuple(n for n in comp if bip.coloring[n] == 0)
        part1 = tuple(n for n in comp if bip.coloring[n] == 1)
        items.append((part0, part1))
    for n in free:
        items.append(((n,), ()))

    upper: set[str] = set()
    lower: set[str] = set()

    def side_ok(side: set[str]) -> bool:
        ok, _ = is_acyclic(induced(c, side))
        return ok

    def dfs(i: int) -> bool:
        if i == len(items):
            return True
        part0, part1 = items[i]
        for flip in (False, True):
            up, lo = (part0, part1) if not flip else (part1, part0)
            upper.update(up)
            lower.update(lo)
            if (not up or side_ok(upper)) and (not lo or side_ok(lower)) and dfs(i + 1):
                return True
            upper.difference_update(up)
            lower.difference_update(lo)
        return False

    if dfs(0):
        part = Partition(
            tuple(n for n in c.nodes if n in upper), tuple(n for n in c.nodes if n in lower)
        )
        return PartitionDecision(part)
    return PartitionDecision(None, "exhausted")


def assign_heights(
    g: MovingGraph, pairs: Iterable[CollisionPair], partition: Partition
) -> dict[str, int]:
    """Sweep the upper class up from 1 and the lower class down from 0.

    Requires both induced collision subgraphs to be acyclic (else
    :class:`CyclicGraphError`); the result always verifies collision-free.
    """
    labels = g.edge_labels
    up_set, lo_set = set(partition.upper), set(partition.lower)
    if up_set & lo_set or up_set | lo_set != set(labels):
        raise ValueError("partition must split the edge set into two disjoint parts")
    pairs = tuple(pairs)
    c = build_collision_graph(g, pairs)
    heights = heights_up(induced(c, partition.upper))
    heights.update(heights_down(induced(c, partition.lower)))
    report = verify_collision_free(g, pairs, heights)
    if not report.ok:
        raise RuntimeError("internal error: sweep heights failed verification")
    return heights


@dataclass(frozen=True)
class Violation:
    vertex: str
    edge: tuple[str, str]
    edge_height: int
    lo: int
    hi: int


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[Violation, ...]


def verify_collision_free(
    g: MovingGraph, pairs: Iterable[CollisionPair], heights: dict[str, int]
) -> VerifyReport:
    """Check every pair: the edge's height must avoid the closed height range
    of the edges at the colliding vertex.  A vertex with no edges constrains
    nothing."""
    by_label = g.edge_by_label
    for lab in g.edge_labels:
        if lab not in heights:
            raise ValueError(f"missing height for edge {lab!r}")
    for lab in heights:
        if lab not in by_label:
            raise ValueError(f"height given for unknown edge {lab!r}")
    violations = []
    for p in pairs:
        inc = g.incident.get(p.vertex)
        if inc is None:
            raise ValueError(f"pair references unknown vertex {p.vertex!r}")
        target = edge_label(p.edge)
        if target not in by_label:
            raise ValueError(f"pair references unknown edge {target!r}")
        if not inc:
            continue
        vals = [heights[f] for f in inc]
        lo, hi = min(vals), max(vals)
        h = heights[target]
        if lo <= h <= hi:
            violations.append(Violation(p.vertex, p.edge, h, lo, hi))
    return VerifyReport(not violations, tuple(violations))


def split_layers(
    g: MovingGraph, pairs: Iterable[CollisionPair], heights: dict[str, int]
) -> dict[str, int]:
    """Spread a verified arrangement onto distinct consecutive integers.

    Strict outside-a-closed-range constraints survive any relabeling that
    preserves strict order, so ties can be split by rank; the result starts
    at the original minimum and verifies again.
    """
    pairs = tuple(pairs)
    report = verify_collision_free(g, pairs, heights)
    if not report.ok:
        raise ValueError("heights must verify collision-free before splitting")
    labels = g.edge_labels
    if not labels:
        return {}
    order = {lab: i for i, lab in enumerate(labels)}
    ranked = sorted(labels, key=lambda lab: (heights[lab], order[lab]))
    base = min(heights[lab] for lab in labels)
    return {lab: base + i for i, lab in enumerate(ranked)}


def exists_arrangement(
    g: MovingGraph, pairs: Iterable[CollisionPair]
) -> dict[str, int] | None:
    """Decide exactly whether any collision-free arrangement exists.

    Any collision-free arrangement can be perturbed, pair by pair, into one
    where each colliding edge sits strictly below or strictly above *all*
    edges at its vertex, so branching on that binary choice per pair loses
    nothing.  Each choice contributes strict order constraints; a choice set
    is feasible exactly when the constraint digraph is acyclic.  Returns a
    witness assignment (heights 0..len-1 along a topological order) or None.
    """
    labels = g.edge_labels
    index = {lab: i for i, lab in enumerate(labels)}
    constraints: list[tuple[str, tuple[str, ...]]] = []
    for p in pairs:
        if p.vertex not in g.incident:
            raise ValueError(f"pair references unknown vertex {p.vertex!r}")
        target = edge_label(p.edge)
        if target not in index:
            raise ValueError(f"pair references unknown edge {target!r}")
        inc = g.incident[p.vertex]
        if inc:
            constraints.append((target, inc))
    # most-constrained first; the sort is stable so ties keep input order
    constraints.sort(key=lambda con: -len(con[1]))

    succ: dict[str, defaultdict] = {lab: defaultdict(int) for lab in labels}

    def creates_cycle(e: str) -> bool:
        # every new arc touches e, so any new cycle passes through e
        seen = set()
        stack = [v for v, cnt in succ[e].items() if cnt > 0]
        while stack:
            n = stack.pop()
            if n == e:
                return True
            if n in seen:
                continue
            seen.add(n)
            stack.extend(v for v, cnt in succ[n].items() if cnt > 0)
        return False

    def solve(i: int) -> bool:
        if i == len(constraints):
            return True
        e, inc = constraints[i]
        for below in (True, False):
            arcs = [(e, f) for f in inc] if below else [(f, e) for f in inc]
            for x, y in arcs:
                succ[x][y] += 1
            if not creates_cycle(e) and solve(i + 1):
                return True  # keep the arcs; the caller reads the final digraph
            for x, y in arcs:
                succ[x][y] -= 1
        return False

    if not solve(0):
        return None

    # topological order over the accumulated strict constraints, lowest
    # canonical index first among ready nodes
    indeg = {lab: 0 for lab in labels}
    for x in labels:
        for y, cnt in succ[x].items():
            if cnt > 0:
                indeg[y] += 1
    ready = [index[lab] for lab in labels if indeg[lab] == 0]
    heapify(ready)
    out: list[str] = []
    while ready:
        lab = labels[heappop(ready)]
        out.append(lab)
        for y, cnt in succ[lab].items():
            if cnt > 0:
                indeg[y] -= 1
                if indeg[y] == 0:
                    heappush(ready, index[y])
    if len(out) != len(labels):
        raise RuntimeError("internal error: constraint digraph has a cycle")
    heights = {lab: i for i, lab in enumerate(out)}
    report = verify_collision_free(g, pairs, heights)
    if not report.ok:
        raise RuntimeError("internal error: witness failed verification")
    return heights


def dixon1_heights(m: int, n: int) -> dict[str, int]:
    """Closed-form collision-free heights for the K_{m,n} axis family.

    The q0 row climbs 1..m; every other q row descends in blocks of m+1 so
    rows never interleave.  Valid for any sign vectors.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be at least 1")
    heights = {}
    for i in range(m):
        heights[f"q0-p{i}"] = i + 1
    for j in range(1, n):
        for i in range(m):
            heights[f"q{j}-p{i}"] = -(j - 1) * (m + 1) - i
    return heights


# ---------------------------------------------------------------------------
# file format


def heights_to_json(
    labels: Sequence[str], heights: dict[str, int], partition: Partition | None = None
) -> str:
    data: dict = {"heights": {lab: int(heights[lab]) for lab in labels}}
    if partition is not None:
        data["partition"] = {"upper": list(partition.upper), "lower": list(partition.lower)}
    return json.dumps(data, indent=2) + "\n"


def heights_from_json(text: str) -> tuple[dict[str, int], Partition | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise GraphFormatError(f"invalid JSON: {err}") from None
    if not isinstance(data, dict) or not isinstance(data.get("heights"), dict):
        raise GraphFormatError("heights file must be an object with a 'heights' mapping")
    heights = {}
    for lab, h in data["heights"].items():
        if not isinstance(h, int) or isinstance(h, bool):
            raise GraphFormatError(f"height of {lab!r} must be an integer, got {h!r}")
        heights[str(lab)] = h
    partition = None
    if "partition" in data:
        p = data["partition"]
        if (
            not isinstance(p, dict)
            or not isinstance(p.get("upper"), list)
            or not isinstance(p.get("lower"), list)
        ):
            raise GraphFormatError("'partition' must hold 'upper' and 'lower' arrays")
        partition = Partition(tuple(map(str, p["upper"])), tuple(map(str, p["lower"])))
    return heights, partition
