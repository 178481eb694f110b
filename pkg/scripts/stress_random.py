#!/usr/bin/env python3
"""Randomized stress run for the planning layer.

Builds random synthetic instances (static graphs with freely declared
collision pairs) and checks the exact decision against brute-force
enumeration of all height orders; where the bipartition route finds a split,
the swept heights must verify. Exits nonzero on any mismatch.
"""
import argparse
import itertools
import random
import sys
import time

from lmodel.cgraph import build_collision_graph
from lmodel.collide import CollisionPair
from lmodel.exprs import const
from lmodel.motion import MovingGraph, edge_label
from lmodel.plan import (
    assign_heights,
    decide_partition,
    exists_arrangement,
    verify_collision_free,
)


def random_instance(rng, max_edges, max_pairs):
    nv = rng.randint(3, 6)
    verts = tuple(f"n{i}" for i in range(nv))
    motion = {v: (const(float(i)), const(0.0)) for i, v in enumerate(verts)}
    possible = [(a, b) for a in range(nv) for b in range(a + 1, nv)]
    chosen = rng.sample(possible, rng.randint(1, min(max_edges, len(possible))))
    g = MovingGraph(verts, tuple((f"n{a}", f"n{b}") for a, b in chosen), motion)
    cand = [(v, e) for v in g.vertices for e in g.edges if v not in e]
    k = rng.randint(0, min(len(cand), max_pairs)) if cand else 0
    pairs = tuple(CollisionPair(v, e, 0.0, 0.0) for v, e in rng.sample(cand, k))
    return g, pairs


def brute_force(g, pairs):
    labels = g.edge_labels
    idx = {lab: i for i, lab in enumerate(labels)}
    cons = [
        (idx[edge_label(p.edge)], [idx[lab] for lab in g.incident[p.vertex]])
        for p in pairs
        if g.incident[p.vertex]
    ]
    for perm in itertools.permutations(range(len(labels))):
        if all(
            not (min(perm[i] for i in inc) <= perm[t] <= max(perm[i] for i in inc))
            for t, inc in cons
        ):
            return True
    return False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-edges", type=int, default=7)
    ap.add_argument("--max-pairs", type=int, default=10)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    solvable = splits = mismatches = 0
    for k in range(args.trials):
        g, pairs = random_instance(rng, args.max_edges, args.max_pairs)
        witness = exists_arrangement(g, pairs)
        want = brute_force(g, pairs)
        if (witness is not None) != want:
            mismatches += 1
            print(f"MISMATCH trial {k}: exact={witness is not None} brute={want}")
            continue
        if witness is not None:
            solvable += 1
            if not verify_collision_free(g, pairs, witness).ok:
                mismatches += 1
                print(f"MISMATCH trial {k}: witness does not verify")
        dec = decide_partition(build_collision_graph(g, pairs))
        if dec.found:
            splits += 1
            heights = assign_heights(g, pairs, dec.partition)
            if not verify_collision_free(g, pairs, heights).ok:
                mismatches += 1
                print(f"MISMATCH trial {k}: swept heights do not verify")
    dt = time.perf_counter() - t0

    print(f"{args.trials} trials, seed {args.seed}: {solvable} solvable, "
          f"{splits} with an acyclic split, {mismatches} mismatches, {dt:.2f}s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
