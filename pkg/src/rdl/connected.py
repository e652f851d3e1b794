"""Monochromatic connected subgraphs: the 3-color structure of K_n and dense trees.

Colors in a certificate are given by role.  ``roles`` maps the three
letters b, r, g to the actual color ids, where b is the color of the
largest monochromatic component and r the color of the largest component
of another color meeting both that component and its complement.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from rdl.assembly.common import full_table
from rdl.colorings import materialize
from rdl.density import strong_density_connected
from rdl.errors import InternalError, ParameterError

PARTS = ("W", "X", "Y", "Z")
# complete blocks of a type (ii) partition, by role
BLOCKS_II = {("W", "X"): "b", ("Y", "Z"): "b", ("W", "Y"): "r", ("X", "Z"): "r", ("W", "Z"): "g", ("X", "Y"): "g"}
COMPLETE_III = {("X", "Y"): "b", ("X", "Z"): "r", ("Y", "Z"): "g"}
FORBIDDEN_III = {("W", "X"): "g", ("W", "Y"): "r", ("W", "Z"): "b"}
UNIONS_III = {"b": ("W", "X", "Y"), "r": ("W", "X", "Z"), "g": ("W", "Y", "Z")}


@dataclass(frozen=True)
class TrichotomyCertificate:
    case: str
    n: int
    parts: dict                  # part name -> sorted tuple of vertices
    roles: dict                  # role letter -> color id
    spanning_color: Optional[int] = None
    transcript: dict = field(default_factory=dict)   # block -> edges (or vertices) checked
    probe: dict = field(default_factory=dict)
    notes: tuple = ()

    def part(self, name: str) -> tuple:
        return self.parts.get(name, ())

    def role_set(self, role: str) -> tuple:
        """W ∪ X ∪ Y for b, W ∪ X ∪ Z for r, W ∪ Y ∪ Z for g (type (iii))."""
        return tuple(sorted(v for p in UNIONS_III[role] for v in self.part(p)))

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "n": self.n,
            "parts": {k: list(v) for k, v in self.parts.items()},
            "roles": dict(self.roles),
            "spanning_color": self.spanning_color,
            "transcript": dict(self.transcript),
            "probe": dict(self.probe),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TrichotomyCertificate":
        return cls(d["case"], int(d["n"]), {k: tuple(v) for k, v in d["parts"].items()}, dict(d["roles"]),
                   d.get("spanning_color"), dict(d.get("transcript", {})), dict(d.get("probe", {})),
                   tuple(d.get("notes", ())))


def _check3(coloring, n):
    if coloring.directed or coloring.num_colors != 3:
        raise ParameterError("needs an undirected 3-coloring")
    if not 2 <= n <= coloring.n:
        raise ParameterError(f"prefix size must lie in [2, {coloring.n}]")


def _largest(cands):
    return min(cands, key=lambda cc: (-len(cc[1]), cc[0], cc[1][0]))


SMALL = 128


def _comps(sub, color, idx=None):
    """Components (sorted local index lists) of the ``color`` graph of ``sub`` on ``idx`` (default all)."""
    m = sub.shape[0]
    idx = list(range(m)) if idx is None else sorted(idx)
    if not idx:
        return []
    if m <= SMALL:
        allowed = 0
        for i in idx:
            allowed |= 1 << i
        nb = [0] * m
        for i in idx:
            row = sub[i] == color
            mask = 0
            for j in np.flatnonzero(row):
                mask |= 1 << int(j)
            nb[i] = mask & allowed & ~(1 << i)
        out, left = [], allowed
        while left:
            seed = left & -left
            comp, frontier = seed, seed
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                new = nb[low.bit_length() - 1] & ~comp
                comp |= new
                frontier |= new
            left &= ~comp
            out.append([i for i in idx if comp >> i & 1])
        return sorted(out, key=lambda c: (-len(c), c[0]))
    adj = sub[np.ix_(idx, idx)] == color
    np.fill_diagonal(adj, False)
    count, labels = connected_components(csr_matrix(adj), directed=False)
    groups = [[] for _ in range(count)]
    for i, lab in zip(idx, labels):
        groups[lab].append(i)
    return sorted(groups, key=lambda c: (-len(c), c[0]))


def trichotomy(coloring, n: Optional[int] = None) -> TrichotomyCertificate:
    """Classify the 3-coloring of [n] and return a re-validated certificate."""
    n = coloring.n if n is None else int(n)
    _check3(coloring, n)
    sub = coloring.submatrix(np.arange(1, n + 1))
    # components in labels
    comps = {c: [[i + 1 for i in comp] for comp in _comps(sub, c)] for c in range(3)}
    b, B = _largest([(c, comp) for c in range(3) for comp in comps[c]])
    Bs = set(B)
    U = set(range(1, n + 1)) - Bs
    probe = {"spanning_colors": [c for c in range(3) if len(comps[c]) == 1]}
    if not U:
        cert = TrichotomyCertificate("i", n, {}, {"b": b}, b, probe=probe)
    else:
        cands = [(c, comp) for c in range(3) if c != b for comp in comps[c]
                 if Bs.intersection(comp) and U.intersection(comp)]
        r, R = _largest(cands)
        g = 3 - b - r
        Rs = set(R)
        roles = {"b": b, "r": r, "g": g}
        if U - Rs:
            parts = {"W": Bs & Rs, "X": Bs - Rs, "Y": U & Rs, "Z": U - Rs}
            case = "ii"
        else:
            Gs = next(set(comp) for comp in comps[g] if min(U) in comp)
            parts = {"W": Bs & Rs & Gs, "X": Bs - Gs, "Y": Bs - Rs, "Z": U}
            case = "iii"
        parts = {k: tuple(sorted(v)) for k, v in parts.items()}
        notes = ("W empty",) if case == "iii" and not parts["W"] else ()
        cert = TrichotomyCertificate(case, n, parts, roles, probe=probe, notes=notes)
    transcript = _validate(sub, cert)
    return TrichotomyCertificate(cert.case, cert.n, cert.parts, cert.roles, cert.spanning_color, transcript,
                                 cert.probe, cert.notes)


def validate_certificate(coloring, cert: TrichotomyCertificate) -> dict:
    """Check every stated block edge by edge; returns block -> number of checks, raises InternalError."""
    if cert.n > coloring.n:
        raise ParameterError("certificate is larger than the coloring")
    return _validate(coloring.submatrix(np.arange(1, cert.n + 1)), cert)


def _validate(sub, cert):
    n = cert.n
    out = {}

    def fail(msg):
        raise InternalError(f"type ({cert.case}) certificate on [{n}]: {msg}")

    def block(P, Q):
        return sub[np.ix_([v - 1 for v in P], [v - 1 for v in Q])]

    if cert.case == "i":
        if len(_comps(sub, cert.spanning_color)) != 1:
            fail(f"color {cert.spanning_color} does not span")
        out["spanning"] = n
        return out
    parts = {p: cert.part(p) for p in PARTS}
    allv = sorted(v for p in PARTS for v in parts[p])
    if allv != list(range(1, n + 1)):
        fail("parts do not partition [n]")
    roles = cert.roles
    if cert.case == "ii":
        if not all(parts[p] for p in PARTS):
            fail("an empty part")
        for (p, q), role in BLOCKS_II.items():
            blk = block(parts[p], parts[q])
            if not np.all(blk == roles[role]):
                fail(f"[{p},{q}] is not complete in {role}")
            out[f"[{p},{q}] all {role}"] = int(blk.size)
        return out
    if cert.case != "iii":
        fail("unknown case")
    if not all(parts[p] for p in ("X", "Y", "Z")):
        fail("X, Y or Z empty")
    for role, names in UNIONS_III.items():
        vs = [v - 1 for p in names for v in parts[p]]
        if len(_comps(sub, roles[role], vs)) != 1:
            fail(f"{''.join(names)} not connected in {role}")
        out[f"{''.join(names)} connected in {role}"] = len(vs)
    for (p, q), role in COMPLETE_III.items():
        blk = block(parts[p], parts[q])
        if not np.all(blk == roles[role]):
            fail(f"[{p},{q}] is not complete in {role}")
        out[f"[{p},{q}] all {role}"] = int(blk.size)
    for (p, q), role in FORBIDDEN_III.items():
        blk = block(parts[p], parts[q])
        if np.any(blk == roles[role]):
            fail(f"[{p},{q}] contains a {role} edge")
        out[f"[{p},{q}] no {role}"] = int(blk.size)
    return out


def _required(cert):
    """For each part P, the color v needs towards every other part when v joins P."""
    need = {}
    for P in PARTS:
        need[P] = {}
        for (p, q), role in BLOCKS_II.items():
            if P in (p, q):
                need[P][q if P == p else p] = cert.roles[role]
    return need


def classify_new_vertex(coloring, cert: TrichotomyCertificate, v: int) -> list:
    """Parts P such that adding v to P keeps every block of a type (ii) partition complete."""
    if cert.case != "ii":
        raise ParameterError("only type (ii) partitions extend")
    need = _required(cert)
    fits = []
    for P in PARTS:
        if all(np.all(coloring.colors_between([v], list(cert.part(Q)))[0] == col) for Q, col in need[P].items()):
            fits.append(P)
    return fits


def extend_type_ii(coloring, cert: TrichotomyCertificate, v: int) -> Optional[TrichotomyCertificate]:
    """The certificate on [n+1] with v = n+1 added to its unique part, or None when no part fits."""
    if v != cert.n + 1:
        raise ParameterError("extension adds the next vertex")
    fits = classify_new_vertex(coloring, cert, v)
    if len(fits) > 1:
        raise InternalError(f"vertex {v} fits parts {fits}")
    if not fits:
        return None
    parts = dict(cert.parts)
    parts[fits[0]] = tuple(sorted(parts[fits[0]] + (v,)))
    out = TrichotomyCertificate("ii", v, parts, cert.roles, probe={"extended_from": cert.n})
    return TrichotomyCertificate("ii", v, parts, cert.roles, None, validate_certificate(coloring, out),
                                 out.probe, ())


# -- strong density of monochromatic trees -------------------------------------------


@dataclass(frozen=True)
class ConnectedResult:
    vertices: tuple
    color: int
    profile: object                 # DensityProfile with flags
    orderings: dict
    trace: dict

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "color": self.color, "profile": self.profile.to_dict(),
                "trace": self.trace}


def default_checkpoints(spec, N: int) -> list:
    """Interval boundaries of the spec when it has a partition, else powers of 2; always ends at N."""
    part = spec.partition(N)
    if part is not None:
        cps = [b for b in part.boundaries if b <= N]
    else:
        cps = [1 << k for k in range(1, N.bit_length()) if (1 << k) <= N]
    return sorted(set(cps) | {N})


def _adjacency(table, color):
    adj = table == color
    adj[0, :] = False
    adj[:, 0] = False
    np.fill_diagonal(adj, False)
    return adj


def _component_of(adj, v, limit):
    """Vertices of [limit] reachable from v in adj restricted to [limit]."""
    target = np.zeros(adj.shape[0], dtype=bool)
    target[1:limit + 1] = True
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[v] = True
    frontier = [v]
    while frontier:
        new = np.flatnonzero(adj[frontier].any(axis=0) & target & ~seen)
        seen[new] = True
        frontier = list(new)
    return [int(x) for x in np.flatnonzero(seen)]


def _measure(vertices, color, adjs, cps, kind, extra=None):
    cp = strong_density_connected(vertices, adjs[color], cps)
    trace = {"branch": kind} | (extra or {})
    return ConnectedResult(tuple(sorted(vertices)), int(color), cp.profile, cp.orderings, trace)


def _best(results):
    def key(res):
        rec = res.profile.record
        return (rec is not None, rec if rec is not None else 0, len(res.vertices), -res.color)
    return max(results, key=key)


def sud_tree_2col(spec, N: int, checkpoints=None) -> ConnectedResult:
    """Majority color over checkpoints among those connecting [n]; its component of vertex 1 with profile."""
    if spec.directed or spec.num_colors != 2:
        raise ParameterError("needs an undirected 2-coloring")
    cps = default_checkpoints(spec, N) if checkpoints is None else sorted(set(int(c) for c in checkpoints))
    table = full_table(materialize(spec, N))
    adjs = {c: _adjacency(table, c) for c in (0, 1)}
    connecting = {}
    for n in cps:
        cs = [c for c in (0, 1) if len(_component_of(adjs[c], 1, n)) == n]
        if not cs:
            raise InternalError(f"neither color connects [{n}]")
        connecting[n] = cs
    counts = {c: sum(c in cs for cs in connecting.values()) for c in (0, 1)}
    color = max((0, 1), key=lambda c: (counts[c], -c))
    comp = _component_of(adjs[color], 1, N)
    return _measure(comp, color, adjs, cps, "majority",
                    {"connecting": {str(n): cs for n, cs in connecting.items()}, "counts": counts})


def sud_tree_3col(spec, N: int, checkpoints=None) -> ConnectedResult:
    """Best certified monochromatic connected set from the three-type analysis of the prefixes."""
    if spec.directed or spec.num_colors != 3:
        raise ParameterError("needs an undirected 3-coloring")
    cps = default_checkpoints(spec, N) if checkpoints is None else sorted(set(int(c) for c in checkpoints))
    cps = [n for n in cps if n >= 2]
    coloring = materialize(spec, N)
    table = full_table(coloring)
    tcol = type(coloring)(N, False, 3, table=table)
    adjs = {c: _adjacency(table, c) for c in range(3)}
    certs = {n: trichotomy(tcol, n) for n in cps}
    types = {str(n): certs[n].case for n in cps}
    results = []
    # type (i): a color spanning some [n]; its component of vertex 1 in [N]
    for c in range(3):
        hits = [n for n in cps if certs[n].case == "i" and certs[n].spanning_color == c]
        if hits:
            results.append(_measure(_component_of(adjs[c], 1, N), c, adjs, cps, "i", {"spanning_at": hits}))
    # type (ii): extend the first such partition vertex by vertex
    first_ii = next((n for n in cps if certs[n].case == "ii"), None)
    if first_ii is not None:
        parts, stop = _extend_ii(table, certs[first_ii], N)
        roles = certs[first_ii].roles
        for role, pairs in (("b", (("W", "X"), ("Y", "Z"))), ("r", (("W", "Y"), ("X", "Z"))),
                            ("g", (("W", "Z"), ("X", "Y")))):
            for p, q in pairs:
                vs = parts[p] + parts[q]
                results.append(_measure(vs, roles[role], adjs, cps, "ii",
                                        {"start": first_ii, "extended_to": stop, "parts": [p, q],
                                         "sizes": {k: len(v) for k, v in parts.items()}}))
    # type (iii): chain the large role sets of each color across checkpoints
    iii = [n for n in cps if certs[n].case == "iii"]
    for n in iii:
        big = [role for role in "brg" if 2 * len(certs[n].role_set(role)) >= n]
        if len(big) < 2:
            raise InternalError(f"fewer than two large sets at type (iii) checkpoint {n}")
    for c in range(3):
        for vs, links in _chains(adjs[c], [(n, _set_of_color(certs[n], c)) for n in iii]):
            results.append(_measure(vs, c, adjs, cps, "iii", {"links": links}))
        xs = [(n, certs[n].part("X")) for n in iii if certs[n].roles["g"] == c]
        for vs, links in _block_chains(adjs[c], xs):
            results.append(_measure(vs, c, adjs, cps, "iii-block", {"links": links}))
    if not results:
        raise InternalError("no certified component")
    best = _best(results)
    trace = dict(best.trace) | {"types": types, "candidates": len(results)}
    return ConnectedResult(best.vertices, best.color, best.profile, best.orderings, trace)


def _extend_ii(table, cert, N):
    """Grow a type (ii) partition of [n] to [m] for the largest m <= N where every new vertex fits."""
    lab = np.full(N + 1, -1, dtype=np.int64)
    for i, p in enumerate(PARTS):
        lab[list(cert.part(p))] = i
    need = _required(cert)
    # req[P][i]: color v needs towards part i when joining P (-1 for P itself)
    req = np.full((4, 4), -1, dtype=np.int64)
    for i, P in enumerate(PARTS):
        for Q, col in need[P].items():
            req[i, PARTS.index(Q)] = col
    stop = cert.n
    for v in range(cert.n + 1, N + 1):
        row = table[v, 1:v].astype(np.int64)
        parts_of = lab[1:v]
        fits = [i for i in range(4) if np.all((parts_of == i) | (row == req[i, parts_of]))]
        if len(fits) != 1:
            break
        lab[v] = fits[0]
        stop = v
    parts = {p: [int(x) for x in np.flatnonzero(lab == i)] for i, p in enumerate(PARTS)}
    return parts, stop


def _set_of_color(cert, c):
    role = next(k for k, v in cert.roles.items() if v == c)
    return cert.role_set(role)


def _chains(adj, sets):
    """Unions of consecutive large sets linked by a shared vertex or an edge; each is connected in adj."""
    out, cur, links = [], None, []
    for n, s in sets:
        if 2 * len(s) < n:
            continue
        s = set(s)
        if cur is None:
            cur, links = s, [[n, "start"]]
            continue
        if cur & s:
            kind = "intersection"
        elif adj[np.ix_(sorted(cur), sorted(s))].any():
            kind = "edge"
        else:
            out.append((sorted(cur), links))
            cur, links = s, [[n, "start"]]
            continue
        cur |= s
        links.append([n, kind])
    if cur is not None:
        out.append((sorted(cur), links))
    return out


def _block_chains(adj, xs):
    """Unions of consecutive disjoint X sets with every edge between them in adj (complete blocks)."""
    out, cur, last, links = [], None, None, []
    for n, x in xs:
        x = set(x)
        if not x:
            continue
        if last is not None and not (last & x) and adj[np.ix_(sorted(last), sorted(x))].all():
            cur |= x
            links.append([n, "complete"])
        else:
            if cur is not None and len(links) > 1:
                out.append((sorted(cur), links))
            cur, links = set(x), [[n, "start"]]
        last = x
    if cur is not None and len(links) > 1:
        out.append((sorted(cur), links))
    return out
