"""Monochromatic paths with high strong upper density on a prefix [N].

Each interval of a fast-growing schedule gets a maximal connector.  When the
connector colors settle, consecutive connectors are joined either by
matching edges inside the connector color or by other-color bridges that
borrow the next interval.  When they keep alternating, each alternating pair
yields paths of both colors with shared ends, and the pairs are chained in
whichever color links the most of them.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction

from rdl.assembly.common import Assembly, AssemblyTrace, check_trace, cut_intervals, default_eps
from rdl.assembly.connectors import (DegradedConnector, bridge_dual, bridge_no_matching, connector_path,
                                     find_alpha_connector, two_matching)
from rdl.colorings import materialize
from rdl.density import local_density, profile
from rdl.engine.witness import PathWitness, validate_path
from rdl.errors import ContractError, ParameterError

FIRST_INTERVAL = 24
MIN_INTERVAL = 6


def fast_schedule(N: int, eps_seq=None, first: int = FIRST_INTERVAL) -> list:
    """Interval sizes a_n with local density 1 - eps_n: a_n = ceil(prefix_{n-1} (1 - eps_n) / eps_n)."""
    sizes, prefix, n = [], 0, 1
    while prefix < N:
        eps = Fraction(eps_seq[n - 1]) if eps_seq is not None else default_eps(n)
        if not 0 < eps < 1:
            raise ParameterError(f"eps_{n} must lie in (0, 1)")
        a = first if n == 1 else math.ceil(prefix * (1 - eps) / eps)
        sizes.append(max(a, MIN_INTERVAL))
        prefix += sizes[-1]
        n += 1
    return sizes


def assemble_23_sud_path(spec, N: int, eps_seq=None, seed: int = 0) -> Assembly:
    """A monochromatic path on [N] following the strong-density construction, with its profile."""
    if spec.directed or spec.num_colors != 2:
        raise ParameterError("needs an undirected 2-coloring")
    intervals = cut_intervals(N, fast_schedule(N, eps_seq), min_last=MIN_INTERVAL)
    if len(intervals) < 2:
        raise ParameterError(f"N = {N} holds fewer than 2 intervals of the schedule")
    coloring = materialize(spec, N)
    conns = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedConnector)
        for lo, hi in intervals:
            conns.append(find_alpha_connector(coloring, range(lo, hi + 1), seed=seed))
    chi = [c.color for c in conns]
    artifacts = [{"index": i + 1, "interval": list(iv), "color": c.color, "alpha": c.alpha, "size": len(c.X),
                  "degraded": c.degraded, "local_density": local_density(range(1, iv[1] + 1)) if i == 0
                  else Fraction(iv[1] - iv[0] + 1, iv[1])}
                 for i, (iv, c) in enumerate(zip(intervals, conns))]
    tags = []
    for i in range(len(conns) - 1):
        if chi[i] != chi[i + 1]:
            tag, matched = "2", None
        else:
            matched = two_matching(coloring, conns[i].X, conns[i + 1].X, chi[i]) is not None
            tag = "1a" if matched else "1b"
        tags.append({"pair": [i + 1, i + 2], "colors": [chi[i], chi[i + 1]], "matching": matched, "tag": tag})
    runs, start = [], 0
    for i in range(1, len(conns) + 1):
        if i == len(conns) or chi[i] != chi[start]:
            runs.append((start, i))
            start = i
    lo, hi = max(runs, key=lambda r: (r[1] - r[0], r[0]))
    facts = {"longest_run": [lo + 1, hi]}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegradedConnector)
        candidates = []
        if hi - lo >= 2:
            candidates.append(_case1(coloring, intervals, conns, tags, lo, hi))
        if any(t["tag"] == "2" for t in tags):
            try:
                candidates.append(_case2(coloring, intervals, conns, tags))
            except ContractError as exc:
                facts["case2_failed"] = str(exc)
    facts["degraded_warnings"] = len(caught)
    if not candidates:
        raise ContractError("neither a constant run nor an alternating pair produced a path")
    cps = sorted({hi for _, hi in intervals} | {N})
    scored = [(profile(t.stitched, cps, "strong-upper").record, -i, t) for i, t in enumerate(candidates)]
    facts["candidates"] = {t.case: rec for rec, _, t in scored}
    trace = max(scored, key=lambda s: s[:2])[2]
    trace.facts = facts | trace.facts
    trace.artifacts = artifacts
    trace.pair_tags = tags
    trace.path = trace.stitched
    path = validate_path(coloring, PathWitness(tuple(trace.path), trace.color))
    check_trace(coloring, trace)
    prof = profile(path.vertices, cps, "strong-upper")
    trace.facts["record"] = prof.record
    return Assembly(path, trace, prof)


def _chain_1a(coloring, conns, chain, color):
    """Connector routes joined by ``color`` edges v_i u_{i+1} taken from 2-matchings."""
    segments, path = [], []
    u = None
    for pos, idx in enumerate(chain):
        X = conns[idx]
        if pos + 1 < len(chain):
            (a1, b1), (a2, b2) = two_matching(coloring, X.X, conns[chain[pos + 1]].X, color)
            v, nxt = (a1, b1) if a1 != u else (a2, b2)
        else:
            v, nxt = None, None
        if u is None:
            u = next(x for x in X.X if x != v)
        if v is None:
            v = next(x for x in reversed(X.X) if x != u)
        piece = list(connector_path(coloring, X, u, v).vertices)
        segments.append({"kind": "artifact", "interval": idx + 1, "vertices": piece})
        path += piece
        if nxt is not None:
            segments.append({"kind": "join", "interval": None, "vertices": [v, nxt]})
        u = nxt
    return path, segments


def _case1(coloring, intervals, conns, tags, lo, hi):
    chi = conns[lo].color
    span = list(range(lo, hi))
    facts = {}
    if all(tags[i]["tag"] == "1a" for i in span[:-1]):
        path, segments = _chain_1a(coloring, conns, span, chi)
        trace = AssemblyTrace("strong-2/3", intervals[-1][1], intervals, "1a", chi, segments=segments)
        trace.facts = facts | {"chain": [i + 1 for i in span]}
        trace.stitched = tuple(path)
        return trace
    # intervals of the run with no chi-matching to any later connector of the run
    lonely = [i for i in span[:-1]
              if all(two_matching(coloring, conns[i].X, conns[m].X, chi) is None for m in span if m > i)]
    picked = []
    for i in lonely:
        if not picked or i >= picked[-1] + 2:
            picked.append(i)
    if not picked:
        chain = [span[0]]
        for m in span[1:]:
            if two_matching(coloring, conns[chain[-1]].X, conns[m].X, chi) is not None:
                chain.append(m)
        path, segments = _chain_1a(coloring, conns, chain, chi)
        trace = AssemblyTrace("strong-2/3", intervals[-1][1], intervals, "1a", chi, segments=segments)
        trace.facts = facts | {"chain": [i + 1 for i in chain]}
        trace.stitched = tuple(path)
        return trace
    other = 1 - chi
    path, segments, discarded, used = [], [], [], []
    for i in picked:
        V1 = range(intervals[i][0], intervals[i][1] + 1)
        V2 = range(intervals[i + 1][0], intervals[i + 1][1] + 1)
        starts = None
        if path:
            row = coloring.colors_between([path[-1]], list(conns[i].X))[0]
            starts = [x for x, col in zip(conns[i].X, row) if col == other]
            if not starts:
                discarded.append({"interval": i + 1, "reason": "no join edge"})
                continue
        try:
            br = bridge_no_matching(coloring, V1, V2, conns[i].X, conns[i + 1], side=1, starts=starts)
        except ContractError as exc:
            discarded.append({"interval": i + 1, "reason": str(exc)})
            continue
        piece = list(br.path.vertices)
        if path:
            segments.append({"kind": "join", "interval": None, "vertices": [path[-1], piece[0]]})
        segments.append({"kind": "artifact", "interval": i + 1, "vertices": piece})
        path += piece
        used.append(i + 1)
    trace = AssemblyTrace("strong-2/3", intervals[-1][1], intervals, "1b", other, segments=segments,
                          discarded=discarded)
    trace.facts = facts | {"lonely": [i + 1 for i in lonely], "picked": [i + 1 for i in picked], "used": used}
    trace.stitched = tuple(path)
    return trace


def _case2(coloring, intervals, conns, tags):
    pairs, i = [], 0
    while i < len(tags):
        if tags[i]["tag"] == "2":
            pairs.append(i)
            i += 2
        else:
            i += 1
    duals, discarded = [], []
    for i in pairs:
        V1 = range(intervals[i][0], intervals[i][1] + 1)
        V2 = range(intervals[i + 1][0], intervals[i + 1][1] + 1)
        try:
            duals.append((i, bridge_dual(coloring, V1, V2, conns[i], conns[i + 1])))
        except ContractError as exc:
            discarded.append({"interval": i + 1, "reason": str(exc)})
    if not duals:
        raise ContractError("no alternating pair produced a dual bridge")
    best = None
    for rho in (0, 1):
        for flip in (False, True):
            path, segments, dropped = _fold(coloring, duals, rho, flip)
            joins = sum(1 for s in segments if s["kind"] == "join")
            rec = profile(path, sorted({hi for _, hi in intervals}), "strong-upper").record
            key = (joins, rec, -rho, not flip)
            if best is None or key > best[0]:
                best = (key, rho, path, segments, dropped)
    _, rho, path, segments, dropped = best
    trace = AssemblyTrace("strong-2/3", intervals[-1][1], intervals, "2", rho, segments=segments,
                          discarded=discarded + dropped)
    trace.facts = {"pairs": [i + 1 for i, _ in duals],
                           "dual_cases": {str(i + 1): d.case for i, d in duals}}
    trace.stitched = tuple(path)
    return trace


def _fold(coloring, duals, rho, flip):
    path, segments, dropped = [], [], []
    for i, d in duals:
        piece = list(d.paths[rho].vertices)
        if not path:
            if flip:
                piece.reverse()
        else:
            end = path[-1]
            if coloring.color(end, piece[0]) != rho:
                piece.reverse()
                if coloring.color(end, piece[0]) != rho:
                    dropped.append({"interval": i + 1, "reason": f"no {rho}-edge to either end"})
                    continue
            segments.append({"kind": "join", "interval": None, "vertices": [end, piece[0]]})
        segments.append({"kind": "artifact", "interval": i + 1, "vertices": piece})
        path += piece
    return path, segments, dropped
