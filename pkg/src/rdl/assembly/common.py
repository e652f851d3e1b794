"""Schedules, dense tables, connections and the assembly trace."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from rdl.colorings import materialize
from rdl.density import DensityProfile
from rdl.engine.witness import PathWitness, validate_path
from rdl.errors import ContractError, ParameterError

TABLE_BLOCK = 256


def default_eps(n: int) -> Fraction:
    return Fraction(1, n + 3)


def schedule_34(count: int, eps_seq=None, k_seq=None, a_seq=None) -> list:
    """(eps_n, k_n, a_n) for n = 1..count with k_n >= 3/eps_n and a_n >= 4 k_n/eps_n."""
    out = []
    for n in range(1, count + 1):
        eps = Fraction(eps_seq[n - 1]) if eps_seq is not None else default_eps(n)
        k = int(k_seq[n - 1]) if k_seq is not None else math.ceil(3 / eps)
        a = int(a_seq[n - 1]) if a_seq is not None else math.ceil(4 * k / eps)
        if not 0 < eps <= Fraction(3, 4):
            raise ParameterError(f"eps_{n} must lie in (0, 3/4]")
        if k < 3 / eps:
            raise ParameterError(f"k_{n} = {k} is below 3/eps_{n}")
        if a < 4 * k / eps:
            raise ParameterError(f"a_{n} = {a} is below 4 k_{n}/eps_{n}")
        out.append((eps, k, a))
    return out


def cut_intervals(N: int, sizes, min_last: int = 1) -> list:
    """Consecutive (lo, hi) intervals of the given sizes inside [N].

    A final partial interval is kept when it has at least ``min_last`` vertices.
    """
    out, lo = [], 1
    for size in sizes:
        if lo > N:
            break
        hi = lo + size - 1
        if hi > N:
            if N - lo + 1 >= min_last:
                out.append((lo, N))
            break
        out.append((lo, hi))
        lo = hi + 1
    return out


def full_table(coloring) -> np.ndarray:
    """(n+1) x (n+1) int8 color table indexed by labels, filled in row blocks."""
    n = coloring.n
    if coloring.table is not None:
        return coloring.table
    out = np.full((n + 1, n + 1), -1, dtype=np.int8)
    labels = np.arange(1, n + 1)
    for lo in range(1, n + 1, TABLE_BLOCK):
        hi = min(n, lo + TABLE_BLOCK - 1)
        out[lo:hi + 1, 1:] = coloring.colors_between(np.arange(lo, hi + 1), labels)
    return out


@numba.njit(cache=True)
def _connect(table, color, src, t1, t2, allowed):
    """Shortest ``color`` path src -> t1 or t2 whose inner vertices are allowed (BFS)."""
    n = table.shape[0] - 1
    if table[src, t1] == color:
        return np.array([src, t1], dtype=np.int64)
    if t2 > 0 and table[src, t2] == color:
        return np.array([src, t2], dtype=np.int64)
    prev = np.full(n + 1, -1, dtype=np.int64)
    prev[src] = src
    frontier = np.empty(n + 1, dtype=np.int64)
    nxt = np.empty(n + 1, dtype=np.int64)
    frontier[0] = src
    fsize = 1
    while fsize > 0:
        nsize = 0
        for f in range(fsize):
            a = frontier[f]
            for b in range(1, n + 1):
                if prev[b] >= 0 or not allowed[b] or table[a, b] != color:
                    continue
                prev[b] = a
                hit = -1
                if table[b, t1] == color:
                    hit = t1
                elif t2 > 0 and table[b, t2] == color:
                    hit = t2
                if hit > 0:
                    length = 2
                    x = b
                    while x != src:
                        x = prev[x]
                        length += 1
                    out = np.empty(length, dtype=np.int64)
                    out[length - 1] = hit
                    x = b
                    for i in range(length - 2, -1, -1):
                        out[i] = x
                        x = prev[x]
                    return out
                nxt[nsize] = b
                nsize += 1
        for i in range(nsize):
            frontier[i] = nxt[i]
        fsize = nsize
    return np.zeros(0, dtype=np.int64)


def connect(table, color, src, targets, allowed):
    """Labels of a shortest connecting path from src to one of ``targets`` (ends included), or None."""
    t1 = int(targets[0])
    t2 = int(targets[1]) if len(targets) > 1 and targets[1] != targets[0] else 0
    out = _connect(table, color, int(src), t1, t2, allowed)
    return None if len(out) == 0 else [int(v) for v in out]


@numba.njit(cache=True)
def _disjoint_paths(adj, x, y, cap):
    """Number (capped at ``cap``) of internally disjoint x,y-paths, and the reachable split nodes.

    Unit vertex capacities on a node-split graph; returns (flow, in_reach, out_reach)
    where the last two describe the final residual search from x.
    """
    n = adj.shape[0]
    inner = np.zeros(n, dtype=np.bool_)           # flow through v's internal arc
    flow = np.zeros((n, n), dtype=np.int8)        # flow on out(a) -> in(b)
    total = 0
    in_r = np.zeros(n, dtype=np.bool_)
    out_r = np.zeros(n, dtype=np.bool_)
    while True:
        # node ids: 2v = in(v), 2v+1 = out(v)
        prev = np.full(2 * n, -1, dtype=np.int64)
        queue = np.empty(2 * n, dtype=np.int64)
        head, tail = 0, 0
        src = 2 * x + 1
        sink = 2 * y
        prev[src] = src
        queue[tail] = src
        tail += 1
        while head < tail and prev[sink] < 0:
            node = queue[head]
            head += 1
            v = node // 2
            if node % 2 == 1:  # out(v): forward to in(b), backward along v's own inner arc
                for b in range(n):
                    if adj[v, b] and prev[2 * b] < 0:
                        prev[2 * b] = node
                        queue[tail] = 2 * b
                        tail += 1
                if inner[v] and prev[2 * v] < 0 and v != x and v != y:
                    prev[2 * v] = node
                    queue[tail] = 2 * v
                    tail += 1
            else:  # in(v): through the inner arc, or back along a used out(a) -> in(v)
                if (v == x or v == y or not inner[v]) and prev[2 * v + 1] < 0:
                    prev[2 * v + 1] = node
                    queue[tail] = 2 * v + 1
                    tail += 1
                for a in range(n):
                    if flow[a, v] > 0 and prev[2 * a + 1] < 0:
                        prev[2 * a + 1] = node
                        queue[tail] = 2 * a + 1
                        tail += 1
        if prev[sink] < 0 or total >= cap:
            for v in range(n):
                in_r[v] = prev[2 * v] >= 0
                out_r[v] = prev[2 * v + 1] >= 0
            return total, in_r, out_r
        node = sink
        while node != src:
            p = prev[node]
            pv, v = p // 2, node // 2
            if p % 2 == 1 and node % 2 == 0:
                if pv == v:  # reverse of v's inner arc
                    inner[v] = False
                elif flow[v, pv] > 0:
                    flow[v, pv] -= 1
                else:
                    flow[pv, v] += 1
            elif p % 2 == 0 and node % 2 == 1:
                if pv == v:
                    inner[v] = True
                else:
                    flow[v, pv] -= 1
            node = p
        total += 1


def min_separator(adj, x: int, y: int, s_max: int):
    """A vertex set of size <= s_max separating x from y in ``adj`` (local indices), or None."""
    if adj[x, y]:
        return None
    total, in_r, out_r = _disjoint_paths(adj, x, y, s_max + 1)
    if total > s_max:
        return None
    return [int(v) for v in np.flatnonzero(in_r & ~out_r) if v != x and v != y]


@dataclass
class AssemblyTrace:
    """Everything needed to audit an assembled path.

    ``segments`` lists the pieces of the stitched path in order, each as
    {"kind": "artifact" | "join", "interval": index or None, "vertices": [...]};
    their concatenation is ``stitched``.  ``path`` is the final path, which
    may extend ``stitched`` by absorbing unused vertices.
    """

    construction: str
    N: int
    intervals: list
    case: str
    color: int
    artifacts: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    pair_tags: list = field(default_factory=list)
    discarded: list = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    stitched: tuple = ()
    path: tuple = ()

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "N": self.N,
            "intervals": [list(iv) for iv in self.intervals],
            "case": self.case,
            "color": self.color,
            "artifacts": self.artifacts,
            "segments": self.segments,
            "pair_tags": self.pair_tags,
            "discarded": self.discarded,
            "facts": self.facts,
            "stitched": list(self.stitched),
            "path": list(self.path),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable)

    @classmethod
    def from_dict(cls, d: dict) -> "AssemblyTrace":
        return cls(d["construction"], int(d["N"]), [tuple(iv) for iv in d["intervals"]], d["case"], int(d["color"]),
                   d["artifacts"], d["segments"], d["pair_tags"], d["discarded"], d["facts"],
                   tuple(d["stitched"]), tuple(d["path"]))


def _jsonable(x):
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    raise TypeError(f"not serializable: {type(x)}")


def check_trace(coloring, trace: AssemblyTrace) -> None:
    """Segments concatenate to the stitched path; both paths are valid and vertex-disjoint."""
    joined = []
    for seg in trace.segments:
        vs = list(seg["vertices"])
        if joined and vs and joined[-1] == vs[0]:
            vs = vs[1:]   # joins share their first vertex with the previous piece
        joined.extend(vs)
    if tuple(joined) != tuple(trace.stitched):
        raise ContractError("segments do not concatenate to the stitched path")
    for vs in (trace.stitched, trace.path):
        if len(set(vs)) != len(vs):
            raise ContractError("assembled path reuses a vertex")
        if vs:
            validate_path(coloring, PathWitness(tuple(vs), trace.color))
    if not set(trace.stitched) <= set(trace.path):
        raise ContractError("final path drops stitched vertices")


@dataclass(frozen=True)
class Assembly:
    path: PathWitness
    trace: AssemblyTrace
    profile: DensityProfile

    def to_dict(self) -> dict:
        return {"path": self.path.to_dict(), "trace": json.loads(self.trace.to_json()),
                "profile": self.profile.to_dict()}


def recheck_trace(spec, data: dict) -> AssemblyTrace:
    """Rebuild a trace from its JSON form and re-validate it against ``spec``."""
    trace = AssemblyTrace.from_dict(data)
    check_trace(materialize(spec, trace.N), trace)
    return trace
