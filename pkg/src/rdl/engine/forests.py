"""Monochromatic path forests in totally 2-colored complete graphs.

A total coloring carries a color on every vertex as well as every edge.  A
path forest of color c is a set of disjoint paths of color c whose endpoints
(and one-vertex paths) have vertex color c.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from rdl.engine.bipartite import bipartite_3path_partition
from rdl.engine.witness import ForestWitness, PathWitness, validate_forest
from rdl.errors import ContractError, InternalError, ParameterError


@dataclass(frozen=True)
class ForestPair:
    """Forests of the minority vertex color (``minor``) and of the other color."""

    minor_forest: ForestWitness
    major_forest: ForestWitness
    minor: int
    defect: int
    deleted: tuple
    moves: int
    method: str

    def forest(self, color: int) -> ForestWitness:
        return self.minor_forest if color == self.minor else self.major_forest

    @property
    def total(self) -> int:
        return len(self.minor_forest) + len(self.major_forest)

    def to_dict(self) -> dict:
        return {
            "minor": self.minor,
            "minor_forest": self.minor_forest.to_dict(),
            "major_forest": self.major_forest.to_dict(),
            "defect": self.defect,
            "deleted": list(self.deleted),
            "moves": self.moves,
            "method": self.method,
        }


def _vertex_colors(coloring):
    if coloring.vertex_color is None:
        raise ContractError("a total coloring needs vertex colors")
    if coloring.directed or coloring.num_colors != 2:
        raise ContractError("path forests need an undirected 2-coloring")
    return coloring.vertex_color


def glp_path_forests(coloring, Bprime=None, vertices=None, minor: int = 0, seed: int = 0) -> ForestPair:
    """Forests F_minor ⊆ R ∪ B' and F_major with |F_minor| + |F_major| ≥ |V| + |R| − 3.

    R is the set of ``minor``-colored vertices among ``vertices`` (default [n])
    and B the rest; |R| ≤ |B| is required.  B' defaults to the first |R|
    vertices of B.
    """
    vc = _vertex_colors(coloring)
    verts = list(range(1, coloring.n + 1)) if vertices is None else sorted(int(v) for v in vertices)
    major = 1 - minor
    R = [v for v in verts if vc[v] == minor]
    B = [v for v in verts if vc[v] == major]
    if len(R) > len(B):
        raise ContractError("the minority color class must not be larger")
    if Bprime is None:
        Bprime = B[: len(R)]
    Bprime = sorted(int(v) for v in Bprime)
    if len(Bprime) != len(R) or not set(Bprime) <= set(B):
        raise ContractError("B' must be a subset of B of size |R|")
    if not R:
        paths, d, moves, method = [], 0, 0, "empty"
    else:
        part = bipartite_3path_partition(coloring, R, Bprime, seed=seed)
        paths, moves = _descend(coloring, part.paths, set(R), minor)
        method = part.method
        d = _defect(paths, set(R), minor)
    if d > 3:
        raise InternalError(f"endpoint defect {d} exceeds 3 after exchange descent")
    paths, deleted = _delete_wrong_ends(paths, set(R), minor)
    rset = set(R)
    minor_paths = [PathWitness(tuple(p), minor) for c, p in paths if c == minor]
    major_paths = [PathWitness(tuple(p), major) for c, p in paths if c == major]
    on_minor = {v for p in minor_paths for v in p.vertices}
    on_major = {v for p in major_paths for v in p.vertices}
    minor_paths += [PathWitness((v,), minor) for v in R if v not in on_minor]
    major_paths += [PathWitness((v,), major) for v in B if v not in on_major]
    pair = ForestPair(
        validate_forest(coloring, ForestWitness(tuple(minor_paths), minor)),
        validate_forest(coloring, ForestWitness(tuple(major_paths), major)),
        minor, d, tuple(deleted), moves, method,
    )
    if not {v for p in minor_paths for v in p.vertices} <= rset | set(Bprime):
        raise InternalError("minority forest leaves R ∪ B'")
    if pair.total < len(verts) + len(R) - 3:
        raise InternalError(f"forest bound failed: {pair.total} < {len(verts) + len(R) - 3}")
    return pair


def _wrong(color, v, rset, minor) -> bool:
    return (color == minor) != (v in rset)


def _defect(paths, rset, minor) -> int:
    d = 0
    for c, p in paths:
        if len(p) > 1:
            d += _wrong(c, p[0], rset, minor) + _wrong(c, p[-1], rset, minor)
    return d


def _side_color(v, rset, minor):
    return minor if v in rset else 1 - minor


def _descend(coloring, start_paths, rset, minor):
    """Exchange endpoints between a wrong-ended minor path and a wrong-ended major path.

    Each move strictly lowers the defect; the pair with the lowest vertex
    labels is used first.
    """
    paths = [(p.color if len(p) > 1 else _side_color(p.vertices[0], rset, minor), list(p.vertices))
             for p in start_paths]
    moves = 0
    while True:
        best = None
        for i, (ci, pi) in enumerate(paths):
            if ci != minor or len(pi) < 2:
                continue
            for x in {pi[0], pi[-1]}:
                if not _wrong(ci, x, rset, minor):
                    continue
                for j, (cj, pj) in enumerate(paths):
                    if cj == minor or len(pj) < 2:
                        continue
                    for y in {pj[0], pj[-1]}:
                        if _wrong(cj, y, rset, minor) and (best is None or (x, y) < best[:2]):
                            best = (x, y, i, j)
        if best is None:
            return paths, moves
        x, y, i, j = best
        c = coloring.color(x, y)
        if c == minor:
            _detach(paths, j, y, rset, minor)
            _attach(paths, i, x, y)
        else:
            _detach(paths, i, x, rset, minor)
            _attach(paths, j, y, x)
        moves += 1


def _detach(paths, idx, v, rset, minor):
    c, p = paths[idx]
    p = p[1:] if p[0] == v else p[:-1]
    if len(p) == 1:
        c = _side_color(p[0], rset, minor)
    paths[idx] = (c, p)


def _attach(paths, idx, end, v):
    c, p = paths[idx]
    paths[idx] = (c, p + [v] if p[-1] == end else [v] + p)


def _delete_wrong_ends(paths, rset, minor):
    out, deleted = [], []
    for c, p in paths:
        p = list(p)
        if len(p) > 1 and _wrong(c, p[-1], rset, minor):
            deleted.append(p.pop())
        if len(p) > 1 and _wrong(c, p[0], rset, minor):
            deleted.append(p.pop(0))
        if len(p) == 1:
            c = _side_color(p[0], rset, minor)
        if len(p) > 1 and (_wrong(c, p[0], rset, minor) or _wrong(c, p[-1], rset, minor)):
            raise InternalError("an endpoint is still on the wrong side after deletion")
        out.append((c, p))
    return out, deleted


# -- density increment -----------------------------------------------------------


@dataclass
class IncrementTrace:
    eps: Fraction
    k: int
    n: int
    minor: int
    n_meets_bound: bool
    states: list = field(default_factory=list)     # {"i", "r", "b", "J"}
    branches: list = field(default_factory=list)   # {"i", "branch", "diff_prev", "diff"}
    t: int = -1
    outcome: str = ""
    checkpoint: int = 0

    def to_dict(self) -> dict:
        return {
            "eps": [self.eps.numerator, self.eps.denominator],
            "k": self.k,
            "n": self.n,
            "minor": self.minor,
            "n_meets_bound": self.n_meets_bound,
            "states": self.states,
            "branches": self.branches,
            "t": self.t,
            "outcome": self.outcome,
            "checkpoint": self.checkpoint,
        }

    def check(self) -> None:
        """Trace invariants: |J_i| strictly decreasing, differences increasing on branch (iii)."""
        sizes = [s["J"] for s in self.states]
        if any(a <= b for a, b in zip(sizes, sizes[1:])):
            raise InternalError("interval sizes do not strictly decrease")
        for s, nxt in zip(self.states, self.states[1:]):
            if nxt["b"] != s["r"]:
                raise InternalError("b_{i+1} differs from r_i")
        for br in self.branches:
            if br["branch"] == "iii" and not br["diff_prev"] < br["diff"]:
                raise InternalError("differences do not increase on branch (iii)")


@dataclass(frozen=True)
class DenseForest:
    forest: ForestWitness
    checkpoint: int
    trace: IncrementTrace

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.forest.count_in(self.checkpoint), self.checkpoint)

    def to_dict(self) -> dict:
        return {"forest": self.forest.to_dict(), "checkpoint": self.checkpoint,
                "ratio": [self.ratio.numerator, self.ratio.denominator], "trace": self.trace.to_dict()}


def mpf_dense_forest(coloring, eps, k: int, seed: int = 0) -> DenseForest:
    """A path forest F and ℓ ≥ k with |F ∩ [ℓ]| ≥ (3/4 − eps)·ℓ, by the density increment.

    Requires 0 < eps ≤ 3/4 and k ≥ 3/eps.  The size condition n ≥ 4k/eps is
    recorded in the trace rather than enforced; the returned bound is always
    checked and a shortfall raises.
    """
    eps = Fraction(eps).limit_denominator(10 ** 9) if isinstance(eps, float) else Fraction(eps)
    vc = _vertex_colors(coloring)
    n = coloring.n
    if not 0 < eps <= Fraction(3, 4):
        raise ParameterError("need 0 < eps <= 3/4")
    if k < 3 / eps or k < 1:
        raise ParameterError("need k >= 3/eps")
    if n < k:
        raise ContractError("need n >= k")
    target = Fraction(3, 4) - eps
    colors = np.asarray(vc[1:], dtype=np.int64)
    minor = 0 if int(np.sum(colors == 0)) <= int(np.sum(colors == 1)) else 1
    major = 1 - minor
    trace = IncrementTrace(eps, k, n, minor, n >= 4 * k / eps)
    is_r = colors == minor
    # prefix counts: reds[l] = |R ∩ [l]|
    reds = np.concatenate([[0], np.cumsum(is_r)])
    blues = np.arange(n + 1) - reds

    def done(forest, ell, outcome):
        trace.outcome = outcome
        trace.checkpoint = ell
        trace.check()
        res = DenseForest(forest, ell, trace)
        if ell < k or res.ratio < target:
            raise InternalError(f"{outcome}: ratio {res.ratio} below {target} at ell={ell}")
        return res

    equal = [l for l in range(k, n + 1) if reds[l] == blues[l]]
    if equal:
        ell = equal[-1]
        pair = glp_path_forests(coloring, vertices=range(1, ell + 1), minor=minor, seed=seed)
        best = max((pair.minor_forest, pair.major_forest), key=len)
        return done(best, ell, "equal-checkpoint")

    blue_pos = np.flatnonzero(~is_r) + 1  # labels of major-colored vertices, increasing
    r, b = int(reds[n]), int(blues[n])
    trace.states.append({"i": 0, "r": r, "b": b, "J": r + b})
    while r > 0:
        b_next = r
        pos = int(blue_pos[b_next - 1])
        r_next = int(reds[pos - 1])
        r, b = r_next, b_next
        trace.states.append({"i": len(trace.states), "r": r, "b": b, "J": r + b})
        if r + b < k:
            break
    t = max(s["i"] for s in trace.states if s["J"] >= k)
    trace.t = t
    st = trace.states[t]
    if st["b"] >= 3 * st["r"]:
        ell = st["J"]
        forest = ForestWitness(tuple(PathWitness((int(v),), major) for v in blue_pos[: st["b"]]), major)
        return done(validate_forest(coloring, forest), ell, "blue-shortcut")

    for i in range(1, t + 1):
        prev, cur = trace.states[i - 1], trace.states[i]
        J_prev, J_cur = prev["J"], cur["J"]
        bprime = [int(v) for v in blue_pos[: prev["r"]]]
        pair = glp_path_forests(coloring, Bprime=bprime, vertices=range(1, J_prev + 1), minor=minor, seed=seed)
        fb, fr = pair.major_forest, pair.minor_forest
        if fb.count_in(J_prev) >= target * J_prev:
            trace.branches.append({"i": i, "branch": "i"})
            return done(fb, J_prev, "claim-i")
        if fr.count_in(J_cur) >= target * J_cur:
            trace.branches.append({"i": i, "branch": "ii"})
            return done(fr, J_cur, "claim-ii")
        trace.branches.append({"i": i, "branch": "iii", "diff_prev": prev["b"] - prev["r"],
                               "diff": cur["b"] - cur["r"]})
        if not prev["b"] - prev["r"] < cur["b"] - cur["r"]:
            raise InternalError("claim branches exhausted without increasing differences")

    pair = glp_path_forests(coloring, minor=minor, seed=seed)
    best = max((pair.minor_forest, pair.major_forest), key=len)
    return done(best, n, "final")
