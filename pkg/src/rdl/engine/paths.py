"""Longest monochromatic paths: exact subset DP, increasing-path DP, heuristics."""
from __future__ import annotations

import numba
import numpy as np

from rdl.engine.witness import BACKWARD, FORWARD, PathWitness, validate_path
from rdl.errors import BudgetError, ContractError, ParameterError

UNDIRECTED_BUDGET = 24
DIRECTED_BUDGET = 16

# step codes for the subset DP
_F, _B, _U, _STOP = 0, 1, 2, 3
PATTERNS = ("consistent", "anti-directed", "unconstrained")


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _reach_dp(n, outm, inm, codes, reach):
    """reach[mask] = set of vertices v such that some path on ``mask`` ends at v.

    Edge number s of the path (0-based) must follow codes[s].  Returns the mask
    of a longest path.
    """
    full = 1 << n
    for mask in range(full):
        reach[mask] = 0
    for v in range(n):
        reach[1 << v] = 1 << v
    best_mask = 1
    best_len = 1 if n > 0 else 0
    for mask in range(1, full):
        ends = reach[mask]
        if ends == 0:
            continue
        size = _popcount(mask)
        if size > best_len:
            best_len = size
            best_mask = mask
        s = size - 1
        code = codes[s] if s < codes.shape[0] else _STOP
        if code == _STOP:
            continue
        cand = 0
        e = ends
        while e:
            low = e & -e
            v = 0
            while (1 << v) != low:
                v += 1
            if code == _F:
                cand |= outm[v]
            elif code == _B:
                cand |= inm[v]
            else:
                cand |= outm[v] | inm[v]
            e ^= low
        cand &= ~mask
        while cand:
            low = cand & -cand
            reach[mask | low] |= low
            cand ^= low
    return best_mask


def _bitmasks(sub: np.ndarray, color: int):
    """Out/in neighbourhood bitmasks of a 0-based color submatrix."""
    n = sub.shape[0]
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    hit = (sub == color)
    np.fill_diagonal(hit, False)
    outm = (hit * weights[None, :]).sum(axis=1).astype(np.int64)
    inm = (hit.T * weights[None, :]).sum(axis=1).astype(np.int64)
    return outm, inm


def _codes_for(pattern, n: int, directed: bool) -> list:
    """Per-edge step codes for every orientation word admitted by ``pattern``."""
    if not directed:
        return [np.full(max(n - 1, 1), _U, dtype=np.int64)]
    if pattern == "consistent":
        return [np.full(max(n - 1, 1), _F, dtype=np.int64)]
    if pattern == "unconstrained":
        return [np.full(max(n - 1, 1), _U, dtype=np.int64)]
    if pattern == "anti-directed":
        a = np.array([_F if i % 2 == 0 else _B for i in range(max(n - 1, 1))], dtype=np.int64)
        return [a, 1 - a]
    if isinstance(pattern, str) and set(pattern) <= {FORWARD, BACKWARD}:
        word = [_F if c == FORWARD else _B for c in pattern[: n - 1]]
        return [np.array(word + [_STOP], dtype=np.int64)]
    raise ParameterError(f"unknown orientation pattern {pattern!r}")


def _rebuild(best_mask, reach, outm, inm, codes) -> list:
    """Backtrack a path (0-based) on ``best_mask`` from the DP table."""
    mask = int(best_mask)
    end = (int(reach[mask]) & -int(reach[mask])).bit_length() - 1
    path = [end]
    while mask & (mask - 1):
        prev = mask ^ (1 << end)
        s = bin(prev).count("1") - 1
        code = codes[s]
        ends = int(reach[prev])
        for v in range(ends.bit_length()):
            if not ends >> v & 1:
                continue
            ok = (code == _F and outm[v] >> end & 1) or (code == _B and inm[v] >> end & 1) or \
                (code == _U and (outm[v] | inm[v]) >> end & 1)
            if ok:
                path.append(v)
                mask, end = prev, v
                break
        else:
            raise ContractError("subset DP backtrack failed")
    return path[::-1]


def longest_path_on(coloring, vertices, color: int, pattern="consistent", budget=None) -> PathWitness:
    """Exact longest path of ``color`` on the sub-host induced by ``vertices``."""
    vs = np.asarray(sorted(int(v) for v in vertices), dtype=np.int64)
    n = len(vs)
    limit = budget or (DIRECTED_BUDGET if coloring.directed else UNDIRECTED_BUDGET)
    if n > limit:
        raise BudgetError(f"exact search limited to {limit} vertices, got {n}")
    if n == 0:
        return PathWitness((), color, "" if coloring.directed else None)
    sub = coloring.submatrix(vs)
    outm, inm = _bitmasks(sub, color)
    reach = np.zeros(1 << n, dtype=np.int64)
    best = None
    for codes in _codes_for(pattern, n, coloring.directed):
        mask = _reach_dp(n, outm, inm, codes, reach)
        size = bin(int(mask)).count("1")
        if best is None or size > len(best[0]):
            order = _rebuild(mask, reach, outm, inm, codes)
            best = (order, codes)
    order, codes = best
    labels = tuple(int(vs[i]) for i in order)
    if coloring.directed:
        pat = _directions(coloring, labels, color, codes)
        w = PathWitness(labels, color, pat)
    else:
        w = PathWitness(labels, color)
    return validate_path(coloring, w)


def _directions(coloring, labels, color, codes) -> str:
    """Orientation word of a DP path; free steps take the forward arc when it has the color."""
    out = []
    for i, (a, b) in enumerate(zip(labels, labels[1:])):
        if codes[i] == _F:
            out.append(FORWARD)
        elif codes[i] == _B:
            out.append(BACKWARD)
        else:
            out.append(FORWARD if coloring.color(a, b) == color else BACKWARD)
    return "".join(out)


def longest_mono_path(coloring, color: int, budget: int = UNDIRECTED_BUDGET) -> PathWitness:
    """Maximum-vertex path of ``color`` on the whole prefix (undirected hosts)."""
    if coloring.directed:
        raise ParameterError("use longest_oriented_path on directed hosts")
    return longest_path_on(coloring, range(1, coloring.n + 1), color, budget=budget)


def longest_oriented_path(coloring, color: int, pattern="consistent", budget: int = DIRECTED_BUDGET) -> PathWitness:
    """Maximum path of ``color`` whose arcs follow ``pattern``.

    ``pattern`` is "consistent", "anti-directed", "unconstrained" or an
    explicit word over F/B, read from the first vertex of the path.
    """
    if not coloring.directed:
        raise ParameterError("longest_oriented_path needs a directed host")
    return longest_path_on(coloring, range(1, coloring.n + 1), color, pattern, budget)


# -- increasing paths -------------------------------------------------------


def longest_increasing_path(coloring, color: int, upto=None, chunk: int = 512) -> PathWitness:
    """Longest path of ``color`` whose vertices increase (arcs forward when directed).

    Exact among increasing paths; O(n^2) color lookups done in column blocks.
    """
    n = coloring.n if upto is None else int(upto)
    best, prev = longest_increasing_table(coloring, color, n, chunk)
    end = int(np.argmax(best[1:])) + 1
    order = []
    while end:
        order.append(end)
        end = int(prev[end])
    order.reverse()
    pat = FORWARD * (len(order) - 1) if coloring.directed else None
    return validate_path(coloring, PathWitness(tuple(order), color, pat))


def longest_increasing_table(coloring, color: int, n: int, chunk: int = 512):
    """best[v]: vertices of the longest increasing ``color`` path ending at v; prev: predecessor."""
    best = np.zeros(n + 1, dtype=np.int64)
    prev = np.zeros(n + 1, dtype=np.int64)
    for lo in range(1, n + 1, chunk):
        hi = min(n, lo + chunk - 1)
        cols = np.arange(lo, hi + 1)
        rows = np.arange(1, hi + 1)
        block = coloring.colors_between(rows, cols) == color  # arcs row -> col
        _increasing_block(best, prev, block, lo, hi)
    return best, prev


@numba.njit(cache=True)
def _increasing_block(best, prev, block, lo, hi):
    for v in range(lo, hi + 1):
        b = 1
        p = 0
        col = v - lo
        for u in range(1, v):
            if block[u - 1, col] and best[u] + 1 > b:
                b = best[u] + 1
                p = u
        best[v] = b
        prev[v] = p


# -- heuristics ------------------------------------------------------------


def heuristic_long_path(coloring, color: int, budget: int = 20000, seed_path=None) -> PathWitness:
    """Long path of ``color`` by extension, insertion and (undirected) rotation.

    Starts from ``seed_path`` or the longest increasing path.  Directed hosts
    keep every arc forward.  The result is validated before returning.
    """
    n = coloring.n
    if n == 0:
        return PathWitness((), color, "" if coloring.directed else None)
    mat = coloring.matrix == color  # (n+1)^2 bool, labels index directly
    np.fill_diagonal(mat, False)
    if seed_path is None:
        seed_path = longest_increasing_path(coloring, color).vertices
    path = np.asarray(seed_path, dtype=np.int64)
    path = _improve(mat, path, int(budget), bool(coloring.directed))
    pat = FORWARD * (len(path) - 1) if coloring.directed else None
    return validate_path(coloring, PathWitness(tuple(int(v) for v in path), color, pat))


@numba.njit(cache=True)
def _improve(mat, path, budget, directed):
    n = mat.shape[0] - 1
    used = np.zeros(n + 1, dtype=np.bool_)
    buf = np.zeros(n, dtype=np.int64)
    m = path.shape[0]
    for i in range(m):
        buf[i] = path[i]
        used[path[i]] = True
    steps = 0
    changed = True
    while changed and steps < budget:
        changed = False
        for w in range(1, n + 1):
            if used[w]:
                continue
            steps += 1
            # append or prepend
            if mat[buf[m - 1], w]:
                buf[m] = w
                m += 1
                used[w] = True
                changed = True
                continue
            if mat[w, buf[0]]:
                for i in range(m, 0, -1):
                    buf[i] = buf[i - 1]
                buf[0] = w
                m += 1
                used[w] = True
                changed = True
                continue
            # insert between consecutive vertices
            for i in range(m - 1):
                if mat[buf[i], w] and mat[w, buf[i + 1]]:
                    for j in range(m, i + 1, -1):
                        buf[j] = buf[j - 1]
                    buf[i + 1] = w
                    m += 1
                    used[w] = True
                    changed = True
                    break
        if not changed and not directed and steps < budget:
            # one rotation at the tail: v_0..v_i v_{i+1}..v_{m-1} with v_{m-1} ~ v_i
            # becomes v_0..v_i v_{m-1}..v_{i+1}, exposing v_{i+1} as the new end
            for i in range(m - 2):
                steps += 1
                if not mat[buf[m - 1], buf[i]]:
                    continue
                new_end = buf[i + 1]
                extendable = False
                for w in range(1, n + 1):
                    if not used[w] and mat[new_end, w]:
                        extendable = True
                        break
                if extendable:
                    lo = i + 1
                    hi = m - 1
                    while lo < hi:
                        t = buf[lo]
                        buf[lo] = buf[hi]
                        buf[hi] = t
                        lo += 1
                        hi -= 1
                    changed = True
                    break
    return buf[:m].copy()
