"""Dense monochromatic paths for upper density on a prefix [N].

Vertices get the color in which most of their later edges lie.  If two
vertices of one color can be cut apart in that color by a few vertices, the
other color spans a long path across the cut.  Otherwise every interval of
the schedule yields a dense path forest, and the forests of one color are
stitched in order with short connecting paths through unused vertices.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from rdl.assembly.common import (Assembly, AssemblyTrace, check_trace, connect, cut_intervals, full_table,
                                 min_separator, schedule_34)
from rdl.colorings import BLUE, RED, PrefixColoring, materialize
from rdl.density import profile
from rdl.engine.forests import mpf_dense_forest
from rdl.engine.paths import _improve
from rdl.engine.witness import PathWitness, validate_path
from rdl.errors import ParameterError

CASE1_WINDOW = 2048
CASE1_PAIRS = 64


def vertex_colors(table, threshold=Fraction(1, 2)) -> np.ndarray:
    """Label-indexed vertex colors: RED when the red share of later edges is at least ``threshold``."""
    n = table.shape[0] - 1
    later = np.zeros(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        later[v] = int(np.count_nonzero(table[v, v + 1:] == RED))
    rest = n - np.arange(n + 1)
    thr = Fraction(threshold)
    red = later * thr.denominator >= rest * thr.numerator
    out = np.where(red, RED, BLUE).astype(np.int8)
    out[0] = 0
    return out


def find_cut(table, vc, first, s_max: int = 3, window: int = CASE1_WINDOW, pairs: int = CASE1_PAIRS):
    """Look for x, y of one vertex color in ``first`` and S, |S| <= s_max, cutting them apart in that color.

    Candidates are non-adjacent pairs with at most s_max common neighbours in
    the window [W]; each is settled by a vertex-disjoint path count, and a cut
    found in the window is confirmed on all of [N].  Returns a dict of facts.
    """
    N = table.shape[0] - 1
    W = min(N, window)
    facts = {"window": W, "s_max": s_max, "candidates": 0, "checked": 0, "cut": None}
    for c in (RED, BLUE):
        T = [v for v in range(first[0], first[1] + 1) if vc[v] == c and v <= W]
        if len(T) < 2:
            continue
        adj = table[1:W + 1, 1:W + 1] == c
        rows = adj[[v - 1 for v in T]].astype(np.float32)
        common = rows @ rows.T
        for i, x in enumerate(T):
            for j in range(i + 1, len(T)):
                y = T[j]
                if adj[x - 1, y - 1] or common[i, j] > s_max:
                    continue
                facts["candidates"] += 1
                if facts["checked"] >= pairs:
                    continue
                facts["checked"] += 1
                S = min_separator(adj, x - 1, y - 1, s_max)
                if S is None:
                    continue
                S = [v + 1 for v in S]
                comp = _component(table, c, x, S)
                if y not in comp:
                    facts["cut"] = {"color": c, "x": x, "y": y, "S": S}
                    return facts
    return facts


def _component(table, color, x, S) -> set:
    N = table.shape[0] - 1
    blocked = np.zeros(N + 1, dtype=bool)
    blocked[0] = True
    blocked[S] = True
    seen = np.zeros(N + 1, dtype=bool)
    seen[x] = True
    frontier = [x]
    while frontier:
        hits = (table[frontier] == color).any(axis=0) & ~seen & ~blocked
        new = np.flatnonzero(hits)
        seen[new] = True
        frontier = list(new)
    return set(int(v) for v in np.flatnonzero(seen))


def _interleave(X, Y) -> list:
    """x1 y1 x2 y2 ... in increasing order, starting from the side with the smaller first vertex."""
    X, Y = sorted(X), sorted(Y)
    if Y and (not X or Y[0] < X[0]):
        X, Y = Y, X
    out = []
    for a, b in zip(X, Y):
        out += [a, b]
    if len(X) > len(Y):
        out.append(X[len(Y)])
    return out


def absorb(table, color, path, budget=None) -> list:
    """Extend, insert and rotate to take in unused vertices; the vertex set only grows."""
    mat = table == color
    np.fill_diagonal(mat, False)
    mat[0, :] = False
    mat[:, 0] = False
    n = table.shape[0] - 1
    budget = 40 * n if budget is None else budget
    out = _improve(mat, np.asarray(path, dtype=np.int64), int(budget), False)
    return [int(v) for v in out]


def _stitch(table, color, forests, N):
    """Fold the forests of ``color`` into one path, connecting through vertices in no selected forest."""
    reserved = np.zeros(N + 1, dtype=bool)
    for f in forests:
        for p in f["paths"]:
            reserved[p] = True
    used = np.zeros(N + 1, dtype=bool)
    path, segments, discarded = [], [], []
    for f in forests:
        for p in f["paths"]:
            if not path:
                path = list(p)
                segments.append({"kind": "artifact", "interval": f["index"], "vertices": list(p)})
                used[p] = True
                continue
            allowed = ~reserved & ~used
            allowed[0] = False
            q = connect(table, color, path[-1], (p[0], p[-1]), allowed)
            if q is None:
                discarded.append({"interval": f["index"], "path": list(p), "reason": "no connection"})
                continue
            piece = list(p) if q[-1] == p[0] else list(p[::-1])
            segments.append({"kind": "join", "interval": None, "vertices": q})
            segments.append({"kind": "artifact", "interval": f["index"], "vertices": piece})
            path += q[1:-1] + piece
            used[q] = True
            used[piece] = True
    return path, segments, discarded


def assemble_34_path(spec, N: int, eps_seq=None, k_seq=None, a_seq=None, threshold=Fraction(1, 2),
                     s_max: int = 3, absorb_unused: bool = True, seed: int = 0) -> Assembly:
    """A monochromatic path on [N] built per the upper-density construction, with its profile."""
    if spec.directed or spec.num_colors != 2:
        raise ParameterError("needs an undirected 2-coloring")
    sched = schedule_34(64, eps_seq, k_seq, a_seq)
    intervals = cut_intervals(N, [a for _, _, a in sched])
    if intervals and intervals[-1][1] - intervals[-1][0] + 1 < sched[len(intervals) - 1][1]:
        intervals = intervals[:-1]  # a partial interval shorter than k_n cannot host a forest
    if len(intervals) < 3:
        raise ParameterError(f"N = {N} holds fewer than 3 intervals of the schedule")
    coloring = materialize(spec, N)
    table = full_table(coloring)
    vc = vertex_colors(table, threshold)
    facts = {"threshold": Fraction(threshold), "vertex_colors": {"red": int(np.sum(vc[1:] == RED)),
                                                                  "blue": int(np.sum(vc[1:] == BLUE))}}
    cut = find_cut(table, vc, intervals[0], s_max)
    facts["case1"] = cut
    if cut["cut"] is not None:
        trace, stitched = _case1(table, cut["cut"], N, intervals, facts)
    else:
        trace, stitched = _case2(table, vc, sched, intervals, N, facts, seed)
    final = absorb(table, trace.color, stitched) if absorb_unused else list(stitched)
    trace.stitched = tuple(stitched)
    trace.path = tuple(final)
    path = validate_path(coloring, PathWitness(tuple(final), trace.color))
    check_trace(coloring, trace)
    cps = sorted({hi for _, hi in intervals} | set(trace.facts.get("forest_checkpoints", [])) | {N})
    prof = profile(path.vertices, cps, "upper")
    trace.facts["record"] = prof.record
    trace.facts["stitched_record"] = profile(stitched, cps, "upper").record
    return Assembly(path, trace, prof)


def _case1(table, cut, N, intervals, facts):
    c = cut["color"]
    S = set(cut["S"])
    X = _component(table, c, cut["x"], cut["S"])
    rest = [v for v in range(1, N + 1) if v not in X and v not in S]
    other = 1 - c
    path = _interleave(X, rest)
    trace = AssemblyTrace("upper-3/4", N, intervals, "1", other, facts=facts)
    trace.segments = [{"kind": "artifact", "interval": None, "vertices": path}]
    trace.facts["case1_sides"] = {"X": len(X), "rest": len(rest), "S": sorted(S)}
    return trace, path


def _case2(table, vc, sched, intervals, N, facts, seed):
    forests = []
    for idx, (lo, hi) in enumerate(intervals):
        eps, k, _ = sched[idx]
        local = PrefixColoring.from_matrix(_clean(table, lo, hi), 2, vertex_color=vc[lo:hi + 1])
        res = mpf_dense_forest(local, eps, k, seed=seed)
        shift = lo - 1
        forests.append({
            "index": idx + 1,
            "interval": [lo, hi],
            "color": int(res.forest.color),
            "checkpoint": shift + res.checkpoint,
            "local_ratio": res.ratio,
            "outcome": res.trace.outcome,
            "paths": [[v + shift for v in p.vertices] for p in sorted(res.forest.paths, key=lambda p: min(p.vertices))],
        })
    counts = {c: sum(f["color"] == c for f in forests) for c in (RED, BLUE)}
    facts["forest_colors"] = counts
    facts["forest_checkpoints"] = [f["checkpoint"] for f in forests]
    best = None
    for c in (RED, BLUE):
        chosen = [f for f in forests if f["color"] == c]
        if not chosen:
            continue
        path, segments, discarded = _stitch(table, c, chosen, N)
        cps = sorted({hi for _, hi in intervals} | {f["checkpoint"] for f in forests} | {N})
        rec = profile(path, cps, "upper").record
        facts.setdefault("stitched_by_color", {})[str(c)] = {"forests": len(chosen), "record": rec}
        key = (rec, counts[c], -c)
        if best is None or key > best[0]:
            best = (key, c, path, segments, discarded)
    _, c, path, segments, discarded = best
    cps = sorted({hi for _, hi in intervals} | {f["checkpoint"] for f in forests} | {N})
    facts["best_single_forest"] = max(profile([v for p in f["paths"] for v in p], cps, "upper").record
                                      for f in forests if f["color"] == c)
    artifacts = [{k: v for k, v in f.items() if k != "paths"} | {"size": sum(len(p) for p in f["paths"]),
                                                                  "selected": f["color"] == c}
                 for f in forests]
    trace = AssemblyTrace("upper-3/4", N, intervals, "2", c, artifacts, segments, [], discarded, facts)
    return trace, path


def _clean(table, lo, hi):
    sub = table[lo:hi + 1, lo:hi + 1].copy()
    np.fill_diagonal(sub, 0)
    return sub
