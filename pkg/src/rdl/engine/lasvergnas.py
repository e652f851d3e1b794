"""Hamiltonian paths with prescribed ends in balanced bipartite graphs, under a degree condition.

A bipartite graph on U = {u_1..u_m}, V = {v_1..v_m} is an m x m boolean
matrix ``adj[i, j]`` (u_{i+1} ~ v_{j+1}).  Paths are reported with U vertex i
as label i+1 and V vertex j as label m+j+1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from rdl.errors import InternalError, ParameterError, SearchFailure

EXACT_LIMIT = 10


def degree_condition(adj) -> dict:
    """Evaluate the sorted-degree condition.

    j (k) is the smallest 1-based index with d(u_j) <= j+1 (d(v_k) <= k+1) in
    the ascending degree order.  The condition holds when j or k does not
    exist, or when d(u_j) + d(v_k) >= m + 2.
    """
    a = np.asarray(adj, dtype=bool)
    m = a.shape[0]
    if a.shape != (m, m):
        raise ParameterError("adjacency must be m x m")
    du = np.sort(a.sum(axis=1))
    dv = np.sort(a.sum(axis=0))
    j = next((i + 1 for i, d in enumerate(du) if d <= i + 2), None)
    k = next((i + 1 for i, d in enumerate(dv) if d <= i + 2), None)
    out = {"m": m, "j": j, "k": k, "d_uj": None, "d_vk": None}
    if j is not None:
        out["d_uj"] = int(du[j - 1])
    if k is not None:
        out["d_vk"] = int(dv[k - 1])
    if j is None or k is None:
        out["holds"] = True
    else:
        out["holds"] = out["d_uj"] + out["d_vk"] >= m + 2
    return out


@dataclass(frozen=True)
class LVResult:
    condition: dict
    path: Optional[tuple]  # labels, None when the condition fails
    method: str = ""

    def to_dict(self) -> dict:
        return {"condition": self.condition, "path": None if self.path is None else list(self.path),
                "method": self.method}


def _full_adj(a):
    m = a.shape[0]
    g = np.zeros((2 * m, 2 * m), dtype=bool)
    g[:m, m:] = a
    g[m:, :m] = a.T
    return g


def is_hamiltonian_path(adj, path, u: int, v: int) -> bool:
    """``path`` (labels) visits every vertex once along edges of ``adj`` from u to v."""
    a = np.asarray(adj, dtype=bool)
    m = a.shape[0]
    g = _full_adj(a)
    idx = [p - 1 for p in path]
    return (sorted(idx) == list(range(2 * m)) and path[0] == u and path[-1] == v
            and all(g[x, y] for x, y in zip(idx, idx[1:])))


@numba.njit(cache=True)
def _ham_from(nb, k, s, reach):
    """reach[mask] = ends of paths from s covering mask."""
    for mask in range(1 << k):
        reach[mask] = 0
    reach[1 << s] = 1 << s
    for mask in range(1 << k):
        ends = reach[mask]
        if ends == 0:
            continue
        cand = 0
        e = ends
        while e:
            low = e & -e
            v = 0
            while (1 << v) != low:
                v += 1
            cand |= nb[v]
            e ^= low
        cand &= ~mask
        while cand:
            low = cand & -cand
            reach[mask | low] |= low
            cand ^= low


def _exact_path(g, s, t):
    k = g.shape[0]
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    nb = (g * weights[None, :]).sum(axis=1).astype(np.int64)
    reach = np.zeros(1 << k, dtype=np.int64)
    _ham_from(nb, k, s, reach)
    mask = (1 << k) - 1
    if not reach[mask] >> t & 1:
        return None
    order, end = [t], t
    while mask != 1 << s:
        prev = mask ^ (1 << end)
        ends = int(reach[prev])
        for w in range(k):
            if ends >> w & 1 and nb[w] >> end & 1:
                order.append(w)
                mask, end = prev, w
                break
        else:
            raise InternalError("Hamiltonian backtrack failed")
    return order[::-1]


def _rotation_path(g, s, t, seed, budget):
    """Rotation-extension with the start fixed, then rotate until the end is t."""
    out = _rotate(g, s, t, seed, budget)
    return None if out[0] < 0 else [int(w) for w in out]


@numba.njit(cache=True)
def _rotate(g, s, t, seed, budget):
    np.random.seed(seed)
    k = g.shape[0]
    fail = np.full(1, -1, dtype=np.int64)
    for _ in range(20):
        path = np.empty(k, dtype=np.int64)
        used = np.zeros(k, dtype=np.bool_)
        path[0] = s
        used[s] = True
        used[t] = True  # t is appended last
        length = 1
        for _ in range(budget):
            end = path[length - 1]
            if length == k - 1:
                if g[end, t]:
                    path[length] = t
                    return path
            else:
                off = np.random.randint(k)
                ext = -1
                for j in range(k):
                    w = (j + off) % k
                    if not used[w] and g[end, w]:
                        ext = w
                        break
                if ext >= 0:
                    path[length] = ext
                    used[ext] = True
                    length += 1
                    continue
            cnt = 0
            for i in range(length - 2):
                if g[end, path[i]]:
                    cnt += 1
            if cnt == 0:
                break
            pick = np.random.randint(cnt)
            lo = 0
            for i in range(length - 2):
                if g[end, path[i]]:
                    if pick == 0:
                        lo = i + 1
                        break
                    pick -= 1
            hi = length - 1
            while lo < hi:
                tmp = path[lo]
                path[lo] = path[hi]
                path[hi] = tmp
                lo += 1
                hi -= 1
    return fail


def las_vergnas_path(adj, u: int, v: int, seed: int = 0, exact_limit: int = EXACT_LIMIT) -> LVResult:
    """Hamiltonian path from U vertex ``u`` to V vertex ``v`` (labels) when the condition holds."""
    a = np.asarray(adj, dtype=bool)
    m = a.shape[0]
    if m < 2:
        raise ParameterError("need m >= 2")
    if not (1 <= u <= m and m + 1 <= v <= 2 * m):
        raise ParameterError("u must be a U label and v a V label")
    cond = degree_condition(a)
    if not cond["holds"]:
        return LVResult(cond, None, "condition-fails")
    g = _full_adj(a)
    if m <= exact_limit:
        order, method = _exact_path(g, u - 1, v - 1), "exact"
        if order is None:
            raise InternalError("degree condition holds but no Hamiltonian path exists")
    else:
        order, method = _rotation_path(g, u - 1, v - 1, seed, 50 * m * m), "rotation"
        if order is None:
            raise SearchFailure("rotation search did not find the Hamiltonian path")
    path = tuple(int(w) + 1 for w in order)
    if not is_hamiltonian_path(a, path, u, v):
        raise InternalError("returned path is not Hamiltonian")
    return LVResult(cond, path, method)


@numba.njit(cache=True)
def _all_pairs_ok(nb, k, m, reach):
    """Every (u in U, v in V) pair is joined by a Hamiltonian path."""
    full = (1 << k) - 1
    for s in range(m):
        _ham_from(nb, k, s, reach)
        for t in range(m, k):
            if not (reach[full] >> t) & 1:
                return False
    return True


def exhaustive_check(m: int = 4) -> dict:
    """Over all bipartite graphs on m+m vertices: condition implies every u,v Hamiltonian path."""
    if m > 5:
        raise ParameterError("exhaustive check limited to m <= 5")
    k = 2 * m
    reach = np.zeros(1 << k, dtype=np.int64)
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    holds = violations = 0
    first_violation = None
    for code in range(1 << (m * m)):
        a = ((code >> np.arange(m * m)) & 1).astype(bool).reshape(m, m)
        if not degree_condition(a)["holds"]:
            continue
        holds += 1
        nb = (_full_adj(a) * weights[None, :]).sum(axis=1).astype(np.int64)
        if not _all_pairs_ok(nb, k, m, reach):
            violations += 1
            if first_violation is None:
                first_violation = a.astype(int).tolist()
    return {"m": m, "graphs": 1 << (m * m), "condition_holds": holds, "violations": violations,
            "first_violation": first_violation}
