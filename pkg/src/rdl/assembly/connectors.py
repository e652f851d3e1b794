"""Connectors: long monochromatic cycles closed under two-edge attachment.

A connector of color c in an interval is a vertex set X grown from a long
c-cycle X_0 by repeatedly adding every vertex with at least two c-edges into
the current set.  Any two vertices of X are joined by a c-path that walks
attachment edges down to the cycle, goes the long way round, and then
absorbs leftover vertices by insertion.  ``alpha`` is the shortest such path
over the checked pairs, divided by the interval size.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from rdl.engine.lasvergnas import _ham_from, las_vergnas_path
from rdl.engine.witness import PathWitness, validate_path
from rdl.errors import ContractError, ParameterError

EXACT_CYCLE_LIMIT = 20
CHECK_PAIRS = 50
EXHAUSTIVE_PAIRS = 10


class DegradedConnector(UserWarning):
    """The longest cycle found is shorter than a third of the interval."""


@dataclass(frozen=True)
class ConnectorWitness:
    """X (sorted labels), its color, the certified alpha and the closure data.

    ``layers[0]`` is the cycle's vertex set and ``layers[i]`` the vertices
    added in round i; ``parents[v]`` are two c-neighbours of v in earlier
    layers.
    """

    X: tuple
    color: int
    alpha: Fraction
    base_cycle: PathWitness
    layers: tuple
    parents: dict = field(default_factory=dict)
    interval: tuple = (0, 0)
    checked_pairs: int = 0
    degraded: bool = False

    @property
    def size(self) -> int:
        return self.interval[1] - self.interval[0] + 1

    def closure_layers(self) -> list:
        """Cumulative sets X_0 ⊆ X_1 ⊆ ... ."""
        out, acc = [], set()
        for layer in self.layers:
            acc |= set(layer)
            out.append(frozenset(acc))
        return out

    def to_dict(self) -> dict:
        return {
            "X": list(self.X),
            "color": self.color,
            "alpha": [self.alpha.numerator, self.alpha.denominator],
            "base_cycle": self.base_cycle.to_dict(),
            "layers": [list(layer) for layer in self.layers],
            "parents": {str(v): list(p) for v, p in sorted(self.parents.items())},
            "interval": list(self.interval),
            "checked_pairs": self.checked_pairs,
            "degraded": self.degraded,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConnectorWitness":
        return cls(tuple(d["X"]), int(d["color"]), Fraction(*d["alpha"]), PathWitness.from_dict(d["base_cycle"]),
                   tuple(tuple(layer) for layer in d["layers"]),
                   {int(v): tuple(p) for v, p in d["parents"].items()}, tuple(d["interval"]),
                   int(d["checked_pairs"]), bool(d["degraded"]))


# -- long cycles -------------------------------------------------------------


@numba.njit(cache=True)
def _exact_cycle(nb, k):
    """Longest cycle of the graph given by neighbour bitmasks (k <= 20): (size, mask, end, start)."""
    reach = np.zeros(1 << k, dtype=np.int64)
    best = (0, 0, 0, 0)
    for s in range(k):
        low = (1 << s) - 1
        for mask in range(1 << s, 1 << k):
            reach[mask] = 0
        reach[1 << s] = 1 << s
        for mask in range(1 << s, 1 << k):
            if mask & low or not (mask >> s) & 1:
                continue
            ends = reach[mask]
            if ends == 0:
                continue
            size = 0
            x = mask
            while x:
                x &= x - 1
                size += 1
            e = ends
            while e:
                lb = e & -e
                v = 0
                while (1 << v) != lb:
                    v += 1
                e ^= lb
                if size >= 3 and size > best[0] and (nb[v] >> s) & 1:
                    best = (size, mask, v, s)
                cand = nb[v] & ~mask & ~low
                while cand:
                    c = cand & -cand
                    reach[mask | c] |= c
                    cand ^= c
    return best


def _exact_cycle_order(adj) -> list:
    k = adj.shape[0]
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    nb = (adj * weights[None, :]).sum(axis=1).astype(np.int64)
    size, mask, end, s = _exact_cycle(nb, k)
    if size == 0:
        return []
    reach = np.zeros(1 << k, dtype=np.int64)
    _ham_from(nb, k, s, reach)
    order = [end]
    mask = int(mask)
    while mask != 1 << s:
        prev = mask ^ (1 << order[-1])
        ends = int(reach[prev])
        w = next(w for w in range(k) if ends >> w & 1 and nb[w] >> order[-1] & 1)
        order.append(w)
        mask = prev
    return order[::-1]


@numba.njit(cache=True)
def _posa_path(adj, start, steps, seed):
    np.random.seed(seed)
    k = adj.shape[0]
    path = np.empty(k, dtype=np.int64)
    used = np.zeros(k, dtype=np.bool_)
    path[0] = start
    used[start] = True
    length = 1
    best = path[:1].copy()
    stall = 0
    for _ in range(steps):
        if length == k or stall > 2 * k:
            break
        stall += 1
        end = path[length - 1]
        off = np.random.randint(k)
        ext = -1
        for j in range(k):
            w = (j + off) % k
            if not used[w] and adj[end, w]:
                ext = w
                break
        if ext >= 0:
            path[length] = ext
            used[ext] = True
            length += 1
            if length > best.shape[0]:
                best = path[:length].copy()
                stall = 0
            continue
        cnt = 0
        for i in range(length - 2):
            if adj[end, path[i]]:
                cnt += 1
        if cnt == 0:
            lo, hi = 0, length - 1
        else:
            pick = np.random.randint(cnt)
            lo = 0
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
    if length > best.shape[0]:
        best = path[:length].copy()
    return best


@numba.njit(cache=True)
def _close(adj, path, rounds, seed):
    """Longest cycle found inside ``path`` after end rotations."""
    np.random.seed(seed)
    m = path.shape[0]
    p = path.copy()
    best_lo, best_hi = 0, -1
    best_cycle = p[:0].copy()
    for _ in range(rounds):
        end = p[m - 1]
        for i in range(m - 2):
            if adj[end, p[i]]:
                if m - i > best_hi - best_lo + 1:
                    best_lo, best_hi = i, m - 1
                    best_cycle = p[i:m].copy()
                break
        if best_hi - best_lo + 1 == m:
            break
        cnt = 0
        for i in range(m - 2):
            if adj[end, p[i]]:
                cnt += 1
        if cnt == 0:
            break
        pick = np.random.randint(cnt)
        lo = 0
        for i in range(m - 2):
            if adj[end, p[i]]:
                if pick == 0:
                    lo = i + 1
                    break
                pick -= 1
        hi = m - 1
        while lo < hi:
            t = p[lo]
            p[lo] = p[hi]
            p[hi] = t
            lo += 1
            hi -= 1
    return best_cycle


@numba.njit(cache=True)
def _insert_cycle(adj, cycle):
    """Insert outside vertices between consecutive cycle vertices (closing pair included)."""
    k = adj.shape[0]
    buf = np.empty(k, dtype=np.int64)
    m = cycle.shape[0]
    used = np.zeros(k, dtype=np.bool_)
    for i in range(m):
        buf[i] = cycle[i]
        used[cycle[i]] = True
    changed = True
    while changed:
        changed = False
        for w in range(k):
            if used[w]:
                continue
            for i in range(m):
                a = buf[i]
                b = buf[(i + 1) % m]
                if adj[a, w] and adj[w, b]:
                    for j in range(m, i + 1, -1):
                        buf[j] = buf[j - 1]
                    buf[i + 1] = w
                    m += 1
                    used[w] = True
                    changed = True
                    break
    return buf[:m].copy()


def long_cycle(adj, seed: int = 0) -> list:
    """A long cycle (local indices in cyclic order) of the graph ``adj``; [] if none is found."""
    k = adj.shape[0]
    if k <= EXACT_CYCLE_LIMIT:
        return _exact_cycle_order(adj)
    rng = np.random.default_rng(seed)
    deg = adj.sum(axis=1)
    starts = [int(np.argmax(deg))] + [int(x) for x in rng.choice(k, size=min(4, k), replace=False)]
    best = np.zeros(0, dtype=np.int64)
    for s in starts:
        path = _posa_path(adj, s, 20 * k, int(rng.integers(2 ** 31)))
        if len(path) < 3 or len(path) <= len(best):
            continue
        cyc = _close(adj, path, 4 * k, int(rng.integers(2 ** 31)))
        if len(cyc) >= 3:
            cyc = _insert_cycle(adj, cyc)
        if len(cyc) > len(best):
            best = cyc
        if len(best) == k:
            break
    return [int(v) for v in best]


# -- closure and routing ---------------------------------------------------------


def _closure(adj, cycle):
    k = adj.shape[0]
    inx = np.zeros(k, dtype=bool)
    inx[cycle] = True
    layers = [sorted(cycle)]
    parents = {}
    while True:
        counts = adj[:, inx].sum(axis=1)
        new = np.flatnonzero((counts >= 2) & ~inx)
        if len(new) == 0:
            break
        members = np.flatnonzero(inx)
        for v in new:
            nbrs = members[adj[v, members]]
            parents[int(v)] = (int(nbrs[0]), int(nbrs[1]))
        inx[new] = True
        layers.append([int(v) for v in new])
    return layers, parents


def _chain(v, parents, on_cycle, avoid):
    """Walk parent edges from v down to the cycle, avoiding ``avoid``; None if blocked."""
    chain = [v]
    seen = set(avoid) | {v}
    while chain[-1] not in on_cycle:
        nxt = [p for p in parents[chain[-1]] if p not in seen]
        if not nxt:
            return None
        chain.append(nxt[0])
        seen.add(nxt[0])
    return chain


def _bfs_to_cycle(adj, v, members, on_cycle, avoid):
    """Shortest path inside ``members`` from v to a cycle vertex outside ``avoid``."""
    allowed = np.zeros(adj.shape[0], dtype=bool)
    allowed[members] = True
    allowed[list(avoid)] = False
    prev = {v: None}
    frontier = [v]
    while frontier:
        nxt = []
        for a in frontier:
            for b in np.flatnonzero(adj[a] & allowed):
                b = int(b)
                if b in prev:
                    continue
                prev[b] = a
                if b in on_cycle:
                    out = [b]
                    while prev[out[-1]] is not None:
                        out.append(prev[out[-1]])
                    return out[::-1]
                nxt.append(b)
        frontier = nxt
    return None


@numba.njit(cache=True)
def _insert_path(adj, path, pool):
    """Insert pool vertices between consecutive path vertices; both ends stay fixed.

    Single vertices go in first; when none fits, an adjacent pair w1 w2 is
    tried between p_i and p_{i+1} (this is what bipartite hosts need).
    """
    m = path.shape[0]
    buf = np.empty(m + pool.shape[0], dtype=np.int64)
    buf[:m] = path
    used = np.zeros(pool.shape[0], dtype=np.bool_)
    changed = True
    while changed:
        changed = False
        for q in range(pool.shape[0]):
            if used[q]:
                continue
            w = pool[q]
            for i in range(m - 1):
                if adj[buf[i], w] and adj[w, buf[i + 1]]:
                    for j in range(m, i + 1, -1):
                        buf[j] = buf[j - 1]
                    buf[i + 1] = w
                    m += 1
                    used[q] = True
                    changed = True
                    break
        if changed:
            continue
        for q in range(pool.shape[0]):
            if used[q]:
                continue
            w1 = pool[q]
            tries = 0
            for q2 in range(pool.shape[0]):
                if used[q2] or q2 == q or not adj[w1, pool[q2]]:
                    continue
                tries += 1
                if tries > 8:
                    break
                w2 = pool[q2]
                for i in range(m - 1):
                    if adj[buf[i], w1] and adj[w2, buf[i + 1]]:
                        for j in range(m + 1, i + 2, -1):
                            buf[j] = buf[j - 2]
                        buf[i + 1] = w1
                        buf[i + 2] = w2
                        m += 2
                        used[q] = True
                        used[q2] = True
                        changed = True
                        break
                if used[q]:
                    break
    return buf[:m].copy()


def _route(adj, members, cycle, parents, u, v):
    """A u,v-path (local indices) through the closure chains and the long arc of the cycle."""
    on_cycle = set(cycle)
    chain_u = _chain(u, parents, on_cycle, {v})
    if chain_u is None:
        chain_u = _bfs_to_cycle(adj, u, members, on_cycle, {v})
    if chain_u is None:
        return None
    chain_v = _chain(v, parents, on_cycle, set(chain_u))
    if chain_v is None:
        chain_v = _bfs_to_cycle(adj, v, members, on_cycle, set(chain_u))
    if chain_v is None:
        return None
    u0, v0 = chain_u[-1], chain_v[-1]
    pos = {w: i for i, w in enumerate(cycle)}
    L = len(cycle)
    i, j = pos[u0], pos[v0]
    fwd = [cycle[(i + s) % L] for s in range((j - i) % L + 1)]
    bwd = [cycle[(i - s) % L] for s in range((i - j) % L + 1)]
    arc = fwd if len(fwd) >= len(bwd) else bwd
    path = chain_u[:-1] + arc + chain_v[:-1][::-1]
    taken = set(path)
    pool = np.asarray([w for w in members if w not in taken], dtype=np.int64)
    if len(pool):
        path = list(_insert_path(adj, np.asarray(path, dtype=np.int64), pool))
    return [int(w) for w in path]


# -- public operations -------------------------------------------------------------


def _local(coloring, labels, color):
    sub = coloring.submatrix(labels)
    adj = sub == color
    np.fill_diagonal(adj, False)
    return adj


def find_alpha_connector(coloring, interval, seed: int = 0, pairs: int = CHECK_PAIRS) -> ConnectorWitness:
    """Maximal monochromatic connector inside ``interval`` (consecutive labels)."""
    labels = np.asarray(sorted(int(v) for v in interval), dtype=np.int64)
    n = len(labels)
    if n < 6:
        raise ParameterError("a connector needs an interval of at least 6 vertices")
    if coloring.directed or coloring.num_colors != 2:
        raise ParameterError("connectors need an undirected 2-coloring")
    sub = coloring.submatrix(labels)
    best = None
    for c in (0, 1):
        adj = sub == c
        np.fill_diagonal(adj, False)
        cyc = long_cycle(adj, seed)
        if best is None or len(cyc) > len(best[1]):
            best = (c, cyc, adj)
    color, cycle, adj = best
    degraded = len(cycle) < n / 3
    if degraded:
        warnings.warn(f"longest {color}-cycle has {len(cycle)} of {n} vertices; alpha is degraded",
                      DegradedConnector, stacklevel=2)
    if len(cycle) < 3:
        raise ContractError("no monochromatic cycle in the interval")
    layers, parents = _closure(adj, cycle)
    members = sorted(v for layer in layers for v in layer)
    rng = np.random.default_rng(seed)
    if len(members) <= EXHAUSTIVE_PAIRS:
        checks = [(a, b) for a in members for b in members if a < b]
    else:
        checks = []
        while len(checks) < pairs:
            a, b = (int(x) for x in rng.choice(members, size=2, replace=False))
            checks.append((a, b))
    shortest = n
    for a, b in checks:
        path = _route(adj, members, cycle, parents, a, b)
        shortest = min(shortest, 0 if path is None else len(path))
    lab = [int(x) for x in labels]
    conn = ConnectorWitness(
        X=tuple(lab[v] for v in members),
        color=int(color),
        alpha=Fraction(shortest, n),
        base_cycle=PathWitness(tuple(lab[v] for v in cycle), int(color)),
        layers=tuple(tuple(sorted(lab[v] for v in layer)) for layer in layers),
        parents={lab[v]: (lab[p], lab[q]) for v, (p, q) in parents.items()},
        interval=(lab[0], lab[-1]),
        checked_pairs=len(checks),
        degraded=bool(degraded),
    )
    check_connector(coloring, conn)
    return conn


def check_connector(coloring, conn: ConnectorWitness) -> None:
    """Cycle valid and closed, layers consistent, and no outside vertex with two c-edges into X."""
    cyc = conn.base_cycle
    validate_path(coloring, cyc)
    if len(cyc) < 3 or coloring.color(cyc.vertices[-1], cyc.vertices[0]) != conn.color:
        raise ContractError("base cycle does not close")
    seen = set(conn.layers[0])
    if seen != set(cyc.vertices):
        raise ContractError("first layer is not the cycle")
    for layer in conn.layers[1:]:
        for v in layer:
            p, q = conn.parents[v]
            if p not in seen or q not in seen or p == q:
                raise ContractError(f"vertex {v} lacks two earlier parents")
            if coloring.color(v, p) != conn.color or coloring.color(v, q) != conn.color:
                raise ContractError(f"parent edge of {v} has the wrong color")
        seen |= set(layer)
    if seen != set(conn.X):
        raise ContractError("layers do not cover X")
    lo, hi = conn.interval
    outside = [v for v in range(lo, hi + 1) if v not in seen]
    if outside:
        hits = (coloring.colors_between(outside, list(conn.X)) == conn.color).sum(axis=1)
        bad = [v for v, h in zip(outside, hits) if h >= 2]
        if bad:
            raise ContractError(f"closure not maximal: vertex {bad[0]} has two edges into X")


def connector_path(coloring, conn: ConnectorWitness, u: int, v: int) -> PathWitness:
    """A conn.color path from u to v inside X, as long as the routing finds."""
    xs = list(conn.X)
    index = {w: i for i, w in enumerate(xs)}
    if u not in index or v not in index:
        raise ParameterError("both ends must lie in the connector")
    if u == v:
        raise ParameterError("ends must differ")
    adj = _local(coloring, xs, conn.color)
    cycle = [index[w] for w in conn.base_cycle.vertices]
    parents = {index[w]: (index[p], index[q]) for w, (p, q) in conn.parents.items()}
    path = _route(adj, list(range(len(xs))), cycle, parents, index[u], index[v])
    if path is None:
        raise ContractError(f"no route from {u} to {v} inside the connector")
    w = validate_path(coloring, PathWitness(tuple(xs[i] for i in path), conn.color))
    if Fraction(len(w), conn.size) < conn.alpha:
        warnings.warn(f"route {u}..{v} has {len(w)} vertices, below the certified alpha", DegradedConnector,
                      stacklevel=2)
    return w


# -- matchings and bridges --------------------------------------------------------


def two_matching(coloring, X1, X2, color):
    """Two disjoint ``color`` edges between X1 and X2 (first ends in X1), or None."""
    X1 = [int(v) for v in X1]
    X2 = [int(v) for v in X2]
    if not X1 or not X2:
        return None
    hit = coloring.colors_between(X1, X2) == color
    flat = int(np.argmax(hit))
    r, c = divmod(flat, hit.shape[1])
    if not hit[r, c]:
        return None
    # an edge avoiding row r and column c, if any
    avoid = hit.sum(axis=1) - hit[:, c]
    avoid[r] = 0
    i = int(np.argmax(avoid > 0))
    if avoid[i] > 0:
        row = hit[i].copy()
        row[c] = False
        return (X1[r], X2[c]), (X1[i], X2[int(np.argmax(row))])
    # every edge meets row r or column c
    in_row = [j for j in np.flatnonzero(hit[r]) if j != c]
    in_col = [i for i in np.flatnonzero(hit[:, c]) if i != r]
    if in_row and in_col:
        return (X1[r], X2[int(in_row[0])]), (X1[int(in_col[0])], X2[c])
    return None


@dataclass(frozen=True)
class Bridge:
    path: PathWitness
    kept: tuple        # (Y1, Y2) sizes
    missed: tuple      # the exceptional vertices left out
    segment_end: int   # last vertex of the initial segment I


def bridge_no_matching(coloring, V1, V2, X1, X2: ConnectorWitness, side: int = 1, starts=None, eps=None) -> Bridge:
    """Other-color path through X1 ∪ I with both ends in side ``side`` (1: X1, 2: X2).

    I is the shortest initial segment of V2 with |X1| + |I \\ X2| = |I ∩ X2|.
    ``starts`` optionally restricts the first vertex.  ``eps``, when given,
    is checked as the local-density hypothesis on V1 and V2.
    """
    V1 = sorted(int(v) for v in V1)
    V2 = sorted(int(v) for v in V2)
    X1 = sorted(int(v) for v in X1)
    c = X2.color
    r = 1 - c
    if len(V1) < 2 or len(V2) < 6:
        raise ParameterError("bridge needs |V1| >= 2 and |V2| >= 6")
    if V1[-1] >= V2[0]:
        raise ParameterError("V1 must precede V2")
    if not set(X1) <= set(V1) or not set(X2.X) <= set(V2):
        raise ParameterError("connector sets must lie in their intervals")
    if eps is not None:
        eps = Fraction(eps)
        for part in (V1, V2):
            if Fraction(len(part), part[-1]) < 1 - eps:
                raise ContractError("interval local density below 1 - eps")
    if two_matching(coloring, X1, X2.X, c) is not None:
        raise ContractError(f"a {c}-colored matching of size 2 joins X1 to X2")
    x2 = set(X2.X)
    surplus = len(X1)
    seg = None
    for idx, v in enumerate(V2):
        surplus += -1 if v in x2 else 1
        if surplus == 0:
            seg = V2[: idx + 1]
            break
    if seg is None:
        raise ContractError("X2 too small to balance X1 plus the rest of V2")
    Y1 = X1 + [v for v in seg if v not in x2]
    Y2 = [v for v in seg if v in x2]
    # exceptional vertices: the most c-connected vertex on each side
    cross = coloring.colors_between(Y1, Y2) == c
    y1x = Y1[int(np.argmax(cross.sum(axis=1)))]
    y2x = Y2[int(np.argmax(cross.sum(axis=0)))]
    A = [v for v in Y1 if v != y1x]
    B = [v for v in Y2 if v != y2x]
    if len(A) < 3:
        raise ContractError("bridge sides too small after removing exceptional vertices")
    red = coloring.colors_between(A, B) == r
    if side == 1:
        home, other, g = A, B, red
        home_ok = set(X1)
    else:
        home, other, g = B, A, red.T
        home_ok = set(home)
    home_ok = [i for i, v in enumerate(home) if v in home_ok]
    if starts is not None:
        allowed = set(int(s) for s in starts)
        first_opts = [i for i in home_ok if home[i] in allowed]
    else:
        first_opts = home_ok
    if len(home_ok) < 2 or not first_opts:
        raise ContractError("no admissible endpoints on the chosen side")
    # w is appended after the far end; drop z so the rest is balanced
    for u_i in first_opts[:8]:
        for w_i in [i for i in home_ok if i != u_i][:8]:
            nbrs = [j for j in np.flatnonzero(g[w_i])]
            if not nbrs:
                continue
            v_j = int(nbrs[-1])
            z_j = next(j for j in range(len(other) - 1, -1, -1) if j != v_j)
            hs = [i for i in range(len(home)) if i != w_i]
            os_ = [j for j in range(len(other)) if j != z_j]
            sub = g[np.ix_(hs, os_)]
            m = len(hs)
            u_loc = hs.index(u_i) + 1
            v_loc = m + os_.index(v_j) + 1
            res = las_vergnas_path(sub, u_loc, v_loc)
            if res.path is None:
                raise ContractError("the other-color bipartite graph fails the degree condition")
            labels = [home[hs[p - 1]] if p <= m else other[os_[p - m - 1]] for p in res.path]
            labels.append(home[w_i])
            path = validate_path(coloring, PathWitness(tuple(labels), r))
            missed = tuple(sorted({y1x, y2x, other[z_j]}))
            return Bridge(path, (len(Y1), len(Y2)), missed, seg[-1])
    raise ContractError("no endpoint pair admits an appended vertex")


@dataclass(frozen=True)
class DualBridge:
    ends: tuple
    paths: dict        # color -> PathWitness with ends ``ends``
    case: int


def bridge_dual(coloring, V1, V2, X1: ConnectorWitness, X2: ConnectorWitness) -> DualBridge:
    """Paths of both colors with common ends, from connectors of different colors."""
    if X1.color == X2.color:
        raise ParameterError("the connectors must have different colors")
    c2 = X2.color
    m = two_matching(coloring, X1.X, X2.X, c2)
    if m is not None:
        (u1, u2), (v1, v2) = m
        p1 = connector_path(coloring, X1, u1, v1)
        inner = connector_path(coloring, X2, u2, v2)
        p2 = validate_path(coloring, PathWitness((u1,) + inner.vertices + (v1,), c2))
        return DualBridge((u1, v1), {X1.color: p1, c2: p2}, 1)
    br = bridge_no_matching(coloring, V1, V2, X1.X, X2, side=2)
    u, v = br.path.ends
    p2 = connector_path(coloring, X2, u, v)
    return DualBridge((u, v), {X1.color: br.path, c2: p2}, 2)
