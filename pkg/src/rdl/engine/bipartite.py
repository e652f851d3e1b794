"""Partition a 2-colored balanced complete bipartite graph into at most three monochromatic paths.

Paths only use edges between the two sides, so consecutive vertices always lie
on opposite sides.  A one-vertex path is given the color of its side: color 0
for vertices of ``U`` and color 1 for vertices of ``V``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from rdl.colorings import PrefixColoring
from rdl.engine.paths import _U, _rebuild, _reach_dp
from rdl.engine.witness import PathWitness, validate_path
from rdl.errors import ContractError, ParameterError, SearchFailure

EXACT_LIMIT = 6      # m up to which the partition is found by exhaustive subset search
FALLBACK_LIMIT = 8   # exhaustive search is retried up to this m if the heuristic fails


@dataclass(frozen=True)
class BipartitePartition:
    paths: tuple
    defect: int
    method: str

    def to_dict(self) -> dict:
        return {"paths": [p.to_dict() for p in self.paths], "defect": self.defect, "method": self.method}


def bipartite_host(matrix) -> tuple:
    """Host coloring for an m x m cross matrix: U = 1..m, V = m+1..2m.

    Edges inside a side get color 0; they are never used.
    """
    cross = np.asarray(matrix, dtype=np.int8)
    m = cross.shape[0]
    if cross.shape != (m, m) or m < 1:
        raise ParameterError("need a nonempty square cross matrix")
    full = np.zeros((2 * m, 2 * m), dtype=np.int8)
    full[:m, m:] = cross
    full[m:, :m] = cross.T
    return PrefixColoring.from_matrix(full, 2), list(range(1, m + 1)), list(range(m + 1, 2 * m + 1))


def defect(paths, U) -> int:
    """Endpoints on the wrong side: color-0 ends in V plus color-1 ends in U."""
    uset = set(U)
    d = 0
    for p in paths:
        for e in set(p.ends) if len(p) > 1 else ():
            if (p.color == 0) != (e in uset):
                d += 1
    return d


def check_partition(coloring, U, V, paths) -> None:
    """Raise unless ``paths`` is a partition of U ∪ V into at most 3 monochromatic bipartite paths."""
    uset, vset = set(U), set(V)
    if len(paths) > 3:
        raise ContractError(f"{len(paths)} paths, at most 3 allowed")
    covered = [v for p in paths for v in p.vertices]
    if len(covered) != len(set(covered)) or set(covered) != uset | vset:
        raise ContractError("paths do not partition the host")
    for p in paths:
        if p.color not in (0, 1):
            raise ContractError("path color must be 0 or 1")
        if len(p) == 1:
            side_color = 0 if p.vertices[0] in uset else 1
            if p.color != side_color:
                raise ContractError("a one-vertex path takes the color of its side")
        for a, b in zip(p.vertices, p.vertices[1:]):
            if (a in uset) == (b in uset):
                raise ContractError(f"edge ({a}, {b}) stays inside a side")
        validate_path(coloring, p)


def bipartite_3path_partition(coloring, U, V, seed: int = 0, exact_limit: int = EXACT_LIMIT) -> BipartitePartition:
    U = [int(u) for u in U]
    V = [int(v) for v in V]
    m = len(U)
    if m < 1 or len(V) != m or set(U) & set(V):
        raise ParameterError("need two disjoint sides of equal positive size")
    verts = np.asarray(U + V, dtype=np.int64)
    sub = coloring.submatrix(verts).astype(np.int64)
    side = np.array([0] * m + [1] * m, dtype=np.int64)
    cross = side[:, None] != side[None, :]
    adj = np.stack([(sub == c) & cross for c in (0, 1)])
    if m <= exact_limit:
        local, method = _exact(adj, 2 * m), "exact"
    else:
        local, method = _heuristic(adj, side, seed), "heuristic"
        if local is None and m <= FALLBACK_LIMIT:
            local, method = _exact(adj, 2 * m), "exact-fallback"
        if local is None:
            raise SearchFailure(f"no partition into 3 monochromatic paths found for m={m}")
    paths = []
    for color, order in local:
        labels = tuple(int(verts[i]) for i in order)
        if len(labels) == 1:
            color = int(side[order[0]])
        paths.append(PathWitness(labels, int(color)))
    paths.sort(key=lambda p: (-len(p), p.vertices))
    check_partition(coloring, U, V, paths)
    return BipartitePartition(tuple(paths), defect(paths, U), method)


# -- exact ---------------------------------------------------------------------


@numba.njit(cache=True)
def _split(ispath, full):
    """Fewest path masks partitioning ``full``: returns (t, m1, m2, m3)."""
    if ispath[full]:
        return 1, full, 0, 0
    low = full & -full
    rest = full ^ low
    s = rest
    while True:
        a = s | low
        if ispath[a] and ispath[full ^ a] and (full ^ a) != 0:
            return 2, a, full ^ a, 0
        if s == 0:
            break
        s = (s - 1) & rest
    s = rest
    while True:
        a = s | low
        if ispath[a]:
            r = full ^ a
            if r != 0:
                low2 = r & -r
                rest2 = r ^ low2
                s2 = rest2
                while True:
                    b = s2 | low2
                    c = r ^ b
                    if c != 0 and ispath[b] and ispath[c]:
                        return 3, a, b, c
                    if s2 == 0:
                        break
                    s2 = (s2 - 1) & rest2
        if s == 0:
            break
        s = (s - 1) & rest
    return 0, 0, 0, 0


def _exact(adj, k):
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    codes = np.full(max(k - 1, 1), _U, dtype=np.int64)
    tables, masks = [], []
    for c in (0, 1):
        nb = (adj[c] * weights[None, :]).sum(axis=1).astype(np.int64)
        reach = np.zeros(1 << k, dtype=np.int64)
        _reach_dp(k, nb, nb, codes, reach)
        tables.append(reach)
        masks.append(nb)
    ispath = (tables[0] != 0) | (tables[1] != 0)
    t, *parts = _split(ispath, (1 << k) - 1)
    if t == 0:
        return None
    out = []
    for mask in parts[:t]:
        c = 0 if tables[0][mask] else 1
        out.append((c, _rebuild(mask, tables[c], masks[c], masks[c], codes)))
    return out


# -- heuristic ----------------------------------------------------------------


@numba.njit(cache=True)
def _posa(adj, alive, start, steps, seed):
    """Rotation-extension path search inside ``alive``; returns the longest path seen."""
    np.random.seed(seed)
    k = adj.shape[0]
    path = np.empty(k, dtype=np.int64)
    used = np.zeros(k, dtype=np.bool_)
    path[0] = start
    used[start] = True
    length = 1
    target = 0
    for v in range(k):
        if alive[v]:
            target += 1
    best = path[:1].copy()
    for _ in range(steps):
        if length == target:
            break
        end = path[length - 1]
        off = np.random.randint(k)
        ext = -1
        for j in range(k):
            w = (j + off) % k
            if alive[w] and not used[w] and adj[end, w]:
                ext = w
                break
        if ext >= 0:
            path[length] = ext
            used[ext] = True
            length += 1
            if length > best.shape[0]:
                best = path[:length].copy()
            continue
        # rotate: pick a random earlier neighbour path[i] of the end
        cnt = 0
        for i in range(length - 2):
            if adj[end, path[i]]:
                cnt += 1
        if cnt == 0:
            # reverse the whole path so the other end can grow
            lo, hi = 0, length - 1
        else:
            pick = np.random.randint(cnt)
            lo = -1
            for i in range(length - 2):
                if adj[end, path[i]]:
                    if pick == 0:
                        lo = i + 1
                        break
                    pick -= 1
            hi = length - 1
        while lo < hi:
            t = path[lo]
            path[lo] = path[hi]
            path[hi] = t
            lo += 1
            hi -= 1
    return best


def _trim(path, side, rest_balance, slack):
    """Drop end vertices until the uncovered part is balanced within ``slack``."""
    path = list(path)
    while len(path) > 1 and abs(rest_balance) > slack:
        want = 1 if rest_balance > 0 else 0  # drop a vertex from the short side of the rest
        if side[path[-1]] == want:
            path.pop()
        elif side[path[0]] == want:
            path.pop(0)
        else:
            break
        rest_balance += -1 if want == 0 else 1
    return path


def _cover(adj, side, alive, k, rng, attempts):
    idx = np.flatnonzero(alive)
    if len(idx) == 0:
        return []
    if k == 0:
        return None
    balance = int(np.sum(side[idx] == 0) - np.sum(side[idx] == 1))
    if abs(balance) > k:
        return None
    if len(idx) == 1:
        return [(int(side[idx[0]]), [int(idx[0])])]
    for _ in range(attempts):
        for c in rng.permutation(2):
            start = int(rng.choice(idx))
            path = _posa(adj[c], alive, start, 40 * len(idx), int(rng.integers(2 ** 31)))
            rest_balance = balance - int(np.sum(side[path] == 0)) + int(np.sum(side[path] == 1))
            path = _trim(path, side, rest_balance, k - 1)
            rest = alive.copy()
            rest[path] = False
            sub = _cover(adj, side, rest, k - 1, rng, max(2, attempts // 3))
            if sub is not None:
                return [(int(c), [int(v) for v in path])] + sub
        if k == 1:
            break
    return None


def _heuristic(adj, side, seed):
    rng = np.random.default_rng(seed)
    alive = np.ones(len(side), dtype=np.bool_)
    for k in (1, 2, 3):
        out = _cover(adj, side, alive, k, rng, 12)
        if out is not None:
            return out
    return None
