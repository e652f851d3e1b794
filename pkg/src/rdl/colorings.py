"""Deterministic edge-coloring rules on the positive integers.

Every construction is a :class:`ColoringSpec`: a scheme name plus JSON-able
parameters.  Colors are small integers, red=0, blue=1, green=2.  A spec is
evaluated rule-wise, so looking up the color of a pair costs O(1) no matter how
deep the prefix is; :func:`materialize` wraps a spec (or an explicit table) as a
:class:`PrefixColoring` on [n].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numba
import numpy as np

from rdl.errors import ParameterError
from rdl.intervals import IntervalPartition, validate_growth

RED, BLUE, GREEN = 0, 1, 2

SCHEMES = (
    "directed-residue-k",
    "directed-growth",
    "affine",
    "strong-lower",
    "affine-lower-3",
    "eg-strong-2-3",
    "eg-upper-8-9",
    "bounded-independence",
    "explicit",
    "seeded-random",
)

# B_q pairs for the three-colored lower-density construction, indexed [q1][q2].
_LOWER3_TABLE = np.array(
    [
        [0, 2, 1, 0],
        [2, 0, 0, 1],
        [1, 0, 0, 2],
        [0, 1, 2, 0],
    ],
    dtype=np.int64,
)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


_BLOCK = 1 << 21  # pair evaluations per numpy block


def _cover(vmax: int) -> int:
    # round up so that nearby prefix lengths share one cached partition
    return 1 << max(10, int(vmax).bit_length())


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(0xBF58476D1CE4E5B9)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@dataclass(frozen=True)
class ColoringSpec:
    scheme: str
    params: dict = field(default_factory=dict)
    directed: bool = False
    num_colors: int = 2

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ParameterError(f"unknown scheme {self.scheme!r}")
        if self.num_colors < 1:
            raise ParameterError("num_colors must be positive")

    # -- evaluation -------------------------------------------------------

    def colors(self, u, v) -> np.ndarray:
        """Vectorized color of the pair(s) (u, v); arcs u->v when directed."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        u, v = np.broadcast_arrays(u, v)
        if u.size and (u.min() < 1 or v.min() < 1):
            raise ParameterError("vertices are positive integers")
        if np.any(u == v):
            raise ParameterError("no color on a loop (u, u)")
        if not self.directed:
            u, v = np.minimum(u, v), np.maximum(u, v)
        return _RULES[self.scheme](self, u, v)

    def color(self, u: int, v: int) -> int:
        return int(self.colors(u, v))

    def partition(self, cover: int) -> Optional[IntervalPartition]:
        """The interval partition underlying the scheme, if it has one."""
        p = self.params
        if self.scheme in ("directed-growth", "strong-lower"):
            return IntervalPartition.from_growth(p["growth"], _cover(cover), 1)
        if self.scheme == "affine-lower-3":
            return IntervalPartition.from_growth(p["growth"], _cover(cover), 0)
        if self.scheme == "bounded-independence":
            return IntervalPartition.from_growth({"kind": "times_n", "h": p["growth"]}, _cover(cover), 1)
        if self.scheme == "eg-upper-8-9":
            return IntervalPartition.from_growth({"kind": "power2"}, _cover(cover), 0)
        return None

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "directed": self.directed,
            "num_colors": self.num_colors,
            "params": self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ColoringSpec":
        spec = cls(d["scheme"], dict(d.get("params", {})), bool(d["directed"]), int(d["num_colors"]))
        _validate(spec)
        return spec

    @classmethod
    def from_json(cls, text: str) -> "ColoringSpec":
        return cls.from_dict(json.loads(text))

    @cached_property
    def _explicit_table(self) -> Optional[np.ndarray]:
        p = self.params
        if "constant" in p:
            return None
        n = int(p["n"])
        flat = np.asarray(p["matrix"], dtype=np.int64)
        table = np.full((n + 1, n + 1), -1, dtype=np.int64)
        if self.directed:
            if flat.size != n * n:
                raise ParameterError("directed explicit matrix needs n*n entries")
            table[1:, 1:] = flat.reshape(n, n)
        else:
            if flat.size != n * (n - 1) // 2:
                raise ParameterError("undirected explicit matrix needs n(n-1)/2 entries")
            rows, cols = np.tril_indices(n, -1)
            table[rows + 1, cols + 1] = flat
            table[cols + 1, rows + 1] = flat
        return table

    @cached_property
    def _affine_inverse(self) -> np.ndarray:
        q = int(self.params["q"])
        inv = np.zeros(q, dtype=np.int64)
        for i in range(1, q):
            inv[i] = pow(i, q - 2, q)
        return inv


# -- rules ---------------------------------------------------------------
# Each rule receives int64 arrays u, v (u < v when undirected) and returns colors.


def _rule_residue(spec, u, v):
    k = int(spec.params["k"])
    cu, cv = u % k, v % k
    same = np.where(u < v, RED, BLUE)
    cross = np.where(cu < cv, BLUE, RED)
    return np.where(cu == cv, same, cross)


def _rule_growth(spec, u, v):
    part = spec.partition(max(int(u.max(initial=1)), int(v.max(initial=1))))
    iu, iv = part.index_of(u), part.index_of(v)
    return np.where(iu == iv, GREEN, np.where(iu < iv, RED, BLUE))


def _rule_affine(spec, u, v):
    q = int(spec.params["q"])
    pu, pv = u % (q * q), v % (q * q)
    xu, yu = pu % q, pu // q
    xv, yv = pv % q, pv // q
    dx = (xv - xu) % q
    slope = ((yv - yu) % q) * spec._affine_inverse[dx] % q
    out = np.where(dx == 0, q, slope)
    return np.where(pu == pv, 0, out)


def _rule_strong_lower(spec, u, v):
    part = spec.partition(int(v.max(initial=1)))
    later = np.maximum(part.index_of(u), part.index_of(v))
    return np.where(later % 2 == 1, RED, BLUE)


def _rule_lower3(spec, u, v):
    part = spec.partition(int(v.max(initial=1)))
    return _LOWER3_TABLE[part.index_of(u) % 4, part.index_of(v) % 4]


def _rule_eg23(spec, u, v):
    return np.where((u % 3 == 0) != (v % 3 == 0), RED, BLUE)


def _rule_eg89(spec, u, v):
    part = spec.partition(int(v.max(initial=1)))
    earlier = np.minimum(part.index_of(u), part.index_of(v))
    return np.where(earlier % 2 == 0, RED, BLUE)


def _rule_independence(spec, u, v):
    part = spec.partition(int(v.max(initial=1)))
    return np.where(part.index_of(u) == part.index_of(v), BLUE, RED)


def _rule_explicit(spec, u, v):
    if "constant" in spec.params:
        return np.full(u.shape, int(spec.params["constant"]), dtype=np.int64)
    table = spec._explicit_table
    n = table.shape[0] - 1
    if u.size and max(int(u.max()), int(v.max())) > n:
        raise ParameterError(f"explicit coloring is defined on [{n}] only")
    return table[u, v]


def _rule_random(spec, u, v):
    seed = np.uint64(int(spec.params.get("seed", 0)) & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        key = _mix64(u.astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15) ^ seed)
        key = _mix64(key ^ (v.astype(np.uint64) + np.uint64(0x632BE59BD9B4E019)))
    return (key % np.uint64(spec.num_colors)).astype(np.int64)


@numba.njit(cache=True)
def _random_block(us, vs, seed, num_colors, directed):
    # same hash as _rule_random, evaluated without numpy temporaries
    out = np.empty((us.shape[0], vs.shape[0]), dtype=np.int8)
    for i in range(us.shape[0]):
        for j in range(vs.shape[0]):
            a = us[i]
            b = vs[j]
            if a == b:
                out[i, j] = -1
                continue
            if not directed and a > b:
                a, b = b, a
            key = _mix64_scalar(np.uint64(a) * np.uint64(0x9E3779B97F4A7C15) ^ seed)
            key = _mix64_scalar(key ^ (np.uint64(b) + np.uint64(0x632BE59BD9B4E019)))
            out[i, j] = key % np.uint64(num_colors)
    return out


@numba.njit(cache=True)
def _mix64_scalar(x):
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(0xBF58476D1CE4E5B9)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


_RULES = {
    "directed-residue-k": _rule_residue,
    "directed-growth": _rule_growth,
    "affine": _rule_affine,
    "strong-lower": _rule_strong_lower,
    "affine-lower-3": _rule_lower3,
    "eg-strong-2-3": _rule_eg23,
    "eg-upper-8-9": _rule_eg89,
    "bounded-independence": _rule_independence,
    "explicit": _rule_explicit,
    "seeded-random": _rule_random,
}


def _validate(spec: ColoringSpec) -> None:
    p = spec.params
    s = spec.scheme
    if s == "directed-residue-k":
        if int(p.get("k", 0)) < 2:
            raise ParameterError("k must be at least 2")
    elif s == "affine":
        q = int(p.get("q", 0))
        if not is_prime(q):
            raise ParameterError(f"q={q} must be prime")
        if spec.num_colors != q + 1:
            raise ParameterError("affine coloring uses q+1 colors")
    elif s == "directed-growth":
        validate_growth(p["growth"])
    elif s in ("strong-lower", "affine-lower-3"):
        # fast growth is reported by IntervalPartition.is_fast_growing, not enforced
        validate_growth(p["growth"], 0 if s == "affine-lower-3" else 1)
    elif s == "bounded-independence":
        validate_growth(p["growth"])
    elif s == "explicit":
        if "constant" not in p and ("n" not in p or "matrix" not in p):
            raise ParameterError("explicit coloring needs either constant or n + matrix")
        if "constant" not in p:
            flat = np.asarray(p["matrix"])
            if flat.size and (flat.min() < 0 or flat.max() >= spec.num_colors):
                raise ParameterError("matrix entries must be colors in range")
    elif s == "seeded-random":
        if spec.num_colors < 1:
            raise ParameterError("need at least one color")


# -- generators ------------------------------------------------------------


def gen_directed_residue(k: int) -> ColoringSpec:
    spec = ColoringSpec("directed-residue-k", {"k": int(k)}, directed=True, num_colors=2)
    _validate(spec)
    return spec


def gen_directed_growth(growth: dict) -> ColoringSpec:
    spec = ColoringSpec("directed-growth", {"growth": growth}, directed=True, num_colors=3)
    _validate(spec)
    return spec


def gen_affine(q: int, r: Optional[int] = None) -> ColoringSpec:
    if r is not None and r != q + 1:
        raise ParameterError("affine coloring uses r = q + 1 colors")
    spec = ColoringSpec("affine", {"q": int(q)}, directed=False, num_colors=int(q) + 1)
    _validate(spec)
    return spec


def gen_strong_lower(growth: dict) -> ColoringSpec:
    spec = ColoringSpec("strong-lower", {"growth": growth}, num_colors=2)
    _validate(spec)
    return spec


def gen_affine_lower3(growth: dict) -> ColoringSpec:
    spec = ColoringSpec("affine-lower-3", {"growth": growth}, num_colors=3)
    _validate(spec)
    return spec


def gen_bounded_independence(growth: dict) -> ColoringSpec:
    spec = ColoringSpec("bounded-independence", {"growth": growth}, num_colors=2)
    _validate(spec)
    return spec


def gen_eg_strong() -> ColoringSpec:
    return ColoringSpec("eg-strong-2-3", {}, num_colors=2)


def gen_eg_upper() -> ColoringSpec:
    return ColoringSpec("eg-upper-8-9", {}, num_colors=2)


def gen_constant(color: int = RED, num_colors: int = 2, directed: bool = False) -> ColoringSpec:
    spec = ColoringSpec("explicit", {"constant": int(color)}, directed=directed, num_colors=num_colors)
    _validate(spec)
    return spec


def gen_explicit(matrix, num_colors: int = 2, directed: bool = False) -> ColoringSpec:
    """Spec from a square color matrix (0-based rows/cols for vertices 1..n)."""
    m = np.asarray(matrix, dtype=np.int64)
    n = m.shape[0]
    if directed:
        flat = m.copy()
        np.fill_diagonal(flat, 0)
        flat = flat.ravel()
    else:
        rows, cols = np.tril_indices(n, -1)
        flat = m[rows, cols]
    spec = ColoringSpec(
        "explicit", {"n": int(n), "matrix": [int(x) for x in flat]}, directed=directed, num_colors=num_colors
    )
    _validate(spec)
    return spec


def gen_random(seed: int, num_colors: int = 2, directed: bool = False) -> ColoringSpec:
    return ColoringSpec("seeded-random", {"seed": int(seed)}, directed=directed, num_colors=num_colors)


# -- prefixes --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrefixColoring:
    """A coloring of the pairs of [n], optionally with vertex colors.

    Backed either by a :class:`ColoringSpec` (rule evaluated on demand) or by
    an explicit ``(n+1) x (n+1)`` table indexed by vertex labels.
    """

    n: int
    directed: bool
    num_colors: int
    spec: Optional[ColoringSpec] = None
    table: Optional[np.ndarray] = None
    vertex_color: Optional[np.ndarray] = None  # indexed by label, entry 0 unused

    def color(self, u: int, v: int) -> int:
        if not (1 <= u <= self.n and 1 <= v <= self.n) or u == v:
            raise ParameterError(f"pair ({u}, {v}) not in [{self.n}]")
        if self.table is not None:
            return int(self.table[u, v])
        return self.spec.color(u, v)

    def colors_between(self, us, vs) -> np.ndarray:
        """Matrix of colors from each vertex in ``us`` to each in ``vs`` (-1 on loops)."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if self.table is not None:
            out = self.table[np.ix_(us, vs)]
        elif self.spec.scheme == "seeded-random":
            if us.size and (us.min() < 1 or vs.min() < 1):
                raise ParameterError("vertices are positive integers")
            seed = np.uint64(int(self.spec.params.get("seed", 0)) & 0xFFFFFFFFFFFFFFFF)
            return _random_block(us, vs, seed, self.num_colors, self.directed)
        else:
            out = np.empty((us.size, vs.size), dtype=np.int8)
            step = max(1, _BLOCK // max(vs.size, 1))  # rows per block keeps temporaries small
            for lo in range(0, us.size, step):
                uu, vv = np.meshgrid(us[lo:lo + step], vs, indexing="ij")
                loop = uu == vv
                vv = np.where(loop, np.where(uu == 1, 2, 1), vv)
                block = self.spec.colors(uu, vv)
                out[lo:lo + step] = np.where(loop, -1, block)
            return out
        return out.astype(np.int8)

    def pair_colors(self, us, vs) -> np.ndarray:
        """Elementwise colors of the pairs (us[i], vs[i]); pairs must be in [n] and not loops."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size == 0:
            return np.zeros(0, dtype=np.int8)
        if min(us.min(), vs.min()) < 1 or max(us.max(), vs.max()) > self.n or np.any(us == vs):
            raise ParameterError(f"pairs must be distinct vertices of [{self.n}]")
        if self.table is not None:
            return self.table[us, vs].astype(np.int8)
        return self.spec.colors(us, vs).astype(np.int8)

    def row(self, u: int, vs=None) -> np.ndarray:
        """Colors of u -> v for every v in ``vs`` (default [n]); -1 at v = u."""
        if vs is None:
            vs = np.arange(1, self.n + 1)
        return self.colors_between([u], vs)[0]

    def submatrix(self, vertices) -> np.ndarray:
        return self.colors_between(vertices, vertices)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Full table indexed by labels 0..n (row/column 0 unused, -1)."""
        if self.table is not None:
            return self.table
        labels = np.arange(1, self.n + 1)
        out = np.full((self.n + 1, self.n + 1), -1, dtype=np.int8)
        out[1:, 1:] = self.colors_between(labels, labels)
        return out

    def restrict(self, m: int) -> "PrefixColoring":
        if m > self.n:
            raise ParameterError("cannot extend a prefix")
        vc = None if self.vertex_color is None else self.vertex_color[: m + 1].copy()
        table = None if self.table is None else self.table[: m + 1, : m + 1].copy()
        return PrefixColoring(m, self.directed, self.num_colors, self.spec, table, vc)

    def with_vertex_colors(self, vertex_color) -> "PrefixColoring":
        """Attach vertex colors given for vertices 1..n in order."""
        colors = np.asarray(vertex_color, dtype=np.int8)
        if colors.shape != (self.n,):
            raise ParameterError(f"need exactly {self.n} vertex colors")
        vc = np.zeros(self.n + 1, dtype=np.int8)
        vc[1:] = colors
        return PrefixColoring(self.n, self.directed, self.num_colors, self.spec, self.table, vc)

    @classmethod
    def from_matrix(cls, matrix, num_colors: int = 2, directed: bool = False, vertex_color=None):
        """Wrap a 0-based square matrix; vertex i (0-based) becomes label i+1."""
        m = np.asarray(matrix, dtype=np.int8)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ParameterError("matrix must be square")
        table = np.full((n + 1, n + 1), -1, dtype=np.int8)
        table[1:, 1:] = m
        np.fill_diagonal(table, -1)
        if not directed and not np.array_equal(table, table.T):
            raise ParameterError("undirected matrix must be symmetric")
        vc = None
        if vertex_color is not None:
            vc = np.zeros(n + 1, dtype=np.int8)
            vc[1:] = np.asarray(vertex_color, dtype=np.int8)
        return cls(n, directed, num_colors, None, table, vc)

    def to_spec(self) -> ColoringSpec:
        if self.spec is not None:
            return self.spec
        return gen_explicit(self.table[1:, 1:], self.num_colors, self.directed)


def materialize(spec: ColoringSpec, n: int) -> PrefixColoring:
    """The coloring ``spec`` restricted to [n]."""
    if n < 1:
        raise ParameterError("prefix length must be positive")
    _validate(spec)
    if spec.scheme == "explicit" and "constant" not in spec.params and n > int(spec.params["n"]):
        raise ParameterError("explicit coloring is shorter than the requested prefix")
    return PrefixColoring(n, spec.directed, spec.num_colors, spec=spec)


def affine_parallel_classes(q: int) -> list:
    """The q+1 parallel classes of AG(2, q) over the prime field.

    Points are numbered ``x + q*y``; class m < q holds the lines y = m x + b,
    class q the vertical lines x = c.
    """
    if not is_prime(q):
        raise ParameterError(f"q={q} must be prime")
    classes = []
    for m in range(q):
        classes.append([frozenset(x + q * ((m * x + b) % q) for x in range(q)) for b in range(q)])
    classes.append([frozenset(c + q * y for y in range(q)) for c in range(q)])
    return classes
