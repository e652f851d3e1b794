"""Path and forest witnesses, with validation against a host coloring."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rdl.errors import ContractError

FORWARD, BACKWARD = "F", "B"


@dataclass(frozen=True)
class PathWitness:
    """A path v_1 ... v_m of one color.

    ``pattern`` has one letter per edge: F for the arc v_i -> v_{i+1},
    B for v_{i+1} -> v_i.  It is None on undirected hosts.
    """

    vertices: tuple
    color: int
    pattern: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if self.pattern is not None and len(self.pattern) != max(len(self.vertices) - 1, 0):
            raise ContractError("pattern needs one letter per edge")

    def __len__(self):
        return len(self.vertices)

    @property
    def ends(self) -> tuple:
        if not self.vertices:
            return ()
        return (self.vertices[0], self.vertices[-1])

    def reversed(self) -> "PathWitness":
        pat = None
        if self.pattern is not None:
            pat = "".join(BACKWARD if c == FORWARD else FORWARD for c in reversed(self.pattern))
        return PathWitness(self.vertices[::-1], self.color, pat)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "color": int(self.color), "pattern": self.pattern}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "PathWitness":
        return cls(tuple(d["vertices"]), int(d["color"]), d.get("pattern"))


@dataclass(frozen=True)
class ForestWitness:
    """Vertex-disjoint paths of one color."""

    paths: tuple
    color: int

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for p in self.paths for v in p.vertices)

    def __len__(self):
        return sum(len(p) for p in self.paths)

    def count_in(self, n: int) -> int:
        """|F ∩ [n]|."""
        return sum(1 for p in self.paths for v in p.vertices if v <= n)

    def to_dict(self) -> dict:
        return {"color": int(self.color), "paths": [p.to_dict() for p in self.paths]}

    @classmethod
    def from_dict(cls, d: dict) -> "ForestWitness":
        return cls(tuple(PathWitness.from_dict(p) for p in d["paths"]), int(d["color"]))


def path_problems(coloring, w: PathWitness) -> list:
    """Every way ``w`` fails to be a path of its color in ``coloring`` (empty if valid)."""
    out = []
    vs = w.vertices
    if len(set(vs)) != len(vs):
        out.append("repeated vertex")
    for v in vs:
        if not 1 <= v <= coloring.n:
            out.append(f"vertex {v} outside [{coloring.n}]")
    if out:
        return out
    if coloring.directed and w.pattern is None and len(vs) > 1:
        return ["directed host needs an orientation pattern"]
    if len(vs) < 2:
        return out
    a = np.asarray(vs[:-1], dtype=np.int64)
    b = np.asarray(vs[1:], dtype=np.int64)
    if coloring.directed:
        fwd = np.frombuffer(w.pattern.encode(), dtype=np.uint8) == ord(FORWARD)
        a, b = np.where(fwd, a, b), np.where(fwd, b, a)
    bad = np.flatnonzero(coloring.pair_colors(a, b) != w.color)
    kind = "arc" if coloring.directed else "edge"
    for i in bad[:3]:
        out.append(f"{kind} ({a[i]}, {b[i]}) is not color {w.color}")
    return out


def validate_path(coloring, w: PathWitness) -> PathWitness:
    problems = path_problems(coloring, w)
    if problems:
        raise ContractError("invalid path witness: " + "; ".join(problems[:3]))
    return w


def validate_forest(coloring, f: ForestWitness, vertex_colored: bool = True) -> ForestWitness:
    """Paths valid, of the forest color, disjoint; with vertex colors, endpoints carry the color."""
    seen = set()
    for p in f.paths:
        if p.color != f.color:
            raise ContractError("path color differs from forest color")
        validate_path(coloring, p)
        if seen & set(p.vertices):
            raise ContractError("forest paths share a vertex")
        seen |= set(p.vertices)
        if vertex_colored and coloring.vertex_color is not None:
            for e in p.ends:
                if int(coloring.vertex_color[e]) != f.color:
                    raise ContractError(f"endpoint {e} does not have color {f.color}")
    return f


def switch_profile(coloring, w: PathWitness) -> dict:
    """1-based positions of out-switches and in-switches along a directed witness.

    A vertex is an out-switch when its in-degree within the path is 0 and an
    in-switch when its out-degree is 0; endpoints are always one of the two.
    """
    if not coloring.directed:
        raise ContractError("switches are defined on directed hosts")
    validate_path(coloring, w)
    m = len(w.vertices)
    indeg = [0] * m
    outdeg = [0] * m
    for i, c in enumerate(w.pattern or ""):
        if c == FORWARD:
            outdeg[i] += 1
            indeg[i + 1] += 1
        else:
            outdeg[i + 1] += 1
            indeg[i] += 1
    out_sw = [i + 1 for i in range(m) if indeg[i] == 0]
    in_sw = [i + 1 for i in range(m) if outdeg[i] == 0]
    return {"out": out_sw, "in": in_sw, "all": sorted(set(out_sw) | set(in_sw))}
