"""Exhaustive oracles over all small colorings.

Each oracle enumerates colorings as integers (digit i is the color of edge or
arc i), splits the range into chunks evaluated in parallel, and merges the
chunk minima.  Summaries are plain dicts with the extremal coloring in the
explicit-matrix form used by :mod:`rdl.colorings`.
"""
from __future__ import annotations

import itertools
import math
import os
import time

import numba
import numpy as np

from rdl.colorings import gen_explicit
from rdl.engine.paths import _F, _U, _reach_dp
from rdl.errors import BudgetError, ParameterError

_CHUNKS = 64

# the bundled TBB is too old for numba; the portable work-queue layer is enough
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"


def set_threads(count=None) -> int:
    """Use ``count`` worker threads (default: RDL_THREADS, else all cores)."""
    if count is None:
        count = int(os.environ.get("RDL_THREADS", "0") or 0)
    count = numba.config.NUMBA_NUM_THREADS if count <= 0 else min(count, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(count)
    return count


def _edges(n: int, directed: bool) -> np.ndarray:
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = list(itertools.combinations(range(n), 2))
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


@numba.njit(cache=True)
def _decode(code, base, edges, n, mat):
    for e in range(edges.shape[0]):
        mat[edges[e, 0], edges[e, 1]] = code % base
        code //= base


@numba.njit(cache=True)
def _longest_over_colors(n, mat, colors, directed, codes, reach, outm, inm):
    best = 0
    for c in range(colors):
        for v in range(n):
            o = 0
            i = 0
            for w in range(n):
                if w != v:
                    if mat[v, w] == c:
                        o |= 1 << w
                    if mat[w, v] == c:
                        i |= 1 << w
            outm[v] = o
            inm[v] = i
        mask = _reach_dp(n, outm, inm, codes, reach)
        size = 0
        while mask:
            mask &= mask - 1
            size += 1
        if size > best:
            best = size
    return best


@numba.njit(cache=True)
def _path_chunk(n, base, edges, directed, fixed_first, lo, hi, codes):
    """(min, count at min, first argmin) of the best monochromatic path length over [lo, hi)."""
    mat = np.full((n, n), -1, dtype=np.int64)
    reach = np.zeros(1 << n, dtype=np.int64)
    outm = np.zeros(n, dtype=np.int64)
    inm = np.zeros(n, dtype=np.int64)
    best = n + 1
    count = 0
    arg = -1
    for code in range(lo, hi):
        full = code * base if fixed_first else code  # edge 0 gets color 0
        _decode(full, base, edges, n, mat)
        if not directed:
            for e in range(edges.shape[0]):
                mat[edges[e, 1], edges[e, 0]] = mat[edges[e, 0], edges[e, 1]]
        val = _longest_over_colors(n, mat, base, directed, codes, reach, outm, inm)
        if val < best:
            best = val
            count = 1
            arg = full
        elif val == best:
            count += 1
    return best, count, arg


@numba.njit(parallel=True, cache=True)
def _path_parallel(n, base, edges, directed, fixed_first, bounds, codes, out):
    for k in numba.prange(bounds.shape[0] - 1):
        b, c, a = _path_chunk(n, base, edges, directed, fixed_first, bounds[k], bounds[k + 1], codes)
        out[k, 0] = b
        out[k, 1] = c
        out[k, 2] = a


def _merge(out):
    best = int(out[:, 0].min())
    rows = out[out[:, 0] == best]
    return best, int(rows[:, 1].sum()), int(rows[0, 2])


def _matrix_of(code: int, base: int, edges, n: int, directed: bool) -> np.ndarray:
    mat = np.zeros((n, n), dtype=np.int64)
    for a, b in edges:
        mat[a, b] = code % base
        code //= base
        if not directed:
            mat[b, a] = mat[a, b]
    return mat


def _run_path_oracle(name, n, directed, max_edges, codes):
    edges = _edges(n, directed)
    if len(edges) > max_edges:
        raise BudgetError(f"{name}: {len(edges)} edges exceed the exhaustive budget")
    total = 2 ** (len(edges) - 1)  # fix the first edge by color symmetry
    bounds = np.linspace(0, total, min(_CHUNKS, total) + 1).astype(np.int64)
    out = np.zeros((len(bounds) - 1, 3), dtype=np.int64)
    start = time.perf_counter()
    _path_parallel(n, 2, edges, directed, True, bounds, codes, out)
    best, count, arg = _merge(out)
    return {
        "oracle": name,
        "n": n,
        "colorings": int(total),
        "symmetry": "first edge fixed to color 0",
        "min_longest": best,
        "count_at_min": count,
        "extremal": gen_explicit(_matrix_of(arg, 2, edges, n, directed), 2, directed).to_dict(),
        "seconds": round(time.perf_counter() - start, 3),
    }


def gg_oracle(n: int) -> dict:
    """min over 2-colorings of K_n of the longest monochromatic path (vertex count)."""
    if n < 2:
        raise ParameterError("n must be at least 2")
    res = _run_path_oracle("longest-mono-path", n, False, 21, np.full(max(n - 1, 1), _U, dtype=np.int64))
    res["expected"] = math.ceil((2 * n + 1) / 3)
    return res


def raynaud_oracle(n: int) -> dict:
    """min over 2-colorings of the complete symmetric digraph of the longest consistent path."""
    if n < 2:
        raise ParameterError("n must be at least 2")
    res = _run_path_oracle("longest-consistent-path", n, True, 21, np.full(max(n - 1, 1), _F, dtype=np.int64))
    res["expected"] = n // 2 + 1
    return res


# -- components -------------------------------------------------------------


@numba.njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@numba.njit(cache=True)
def _component_chunk(n, base, edges, lo, hi):
    parent = np.zeros(n, dtype=np.int64)
    size = np.zeros(n, dtype=np.int64)
    digits = np.zeros(edges.shape[0], dtype=np.int64)
    best = n + 1
    count = 0
    arg = -1
    for code in range(lo, hi):
        x = code
        for e in range(edges.shape[0]):
            digits[e] = x % base
            x //= base
        val = 0
        for c in range(base):
            for v in range(n):
                parent[v] = v
                size[v] = 1
            for e in range(edges.shape[0]):
                if digits[e] != c:
                    continue
                a = _find(parent, edges[e, 0])
                b = _find(parent, edges[e, 1])
                if a != b:
                    parent[a] = b
                    size[b] += size[a]
            for v in range(n):
                if parent[v] == v and size[v] > val:
                    val = size[v]
        if val < best:
            best = val
            count = 1
            arg = code
        elif val == best:
            count += 1
    return best, count, arg


@numba.njit(parallel=True, cache=True)
def _component_parallel(n, base, edges, bounds, out):
    for k in numba.prange(bounds.shape[0] - 1):
        b, c, a = _component_chunk(n, base, edges, bounds[k], bounds[k + 1])
        out[k, 0] = b
        out[k, 1] = c
        out[k, 2] = a


def gyarfas_oracle(n: int, r: int = 3) -> dict:
    """min over r-colorings of K_n of the largest monochromatic component."""
    edges = _edges(n, False)
    total = r ** len(edges)
    if total > 10 ** 8:
        raise BudgetError("component oracle limited to 10^8 colorings")
    bounds = np.linspace(0, total, min(_CHUNKS, total) + 1).astype(np.int64)
    out = np.zeros((len(bounds) - 1, 3), dtype=np.int64)
    start = time.perf_counter()
    _component_parallel(n, r, edges, bounds, out)
    best, count, arg = _merge(out)
    return {
        "oracle": "largest-mono-component",
        "n": n,
        "r": r,
        "colorings": int(total),
        "min_largest": best,
        "count_at_min": count,
        "lower_bound": math.ceil(n / (r - 1)),
        "extremal": gen_explicit(_matrix_of(arg, r, edges, n, False), r, False).to_dict(),
        "seconds": round(time.perf_counter() - start, 3),
    }
