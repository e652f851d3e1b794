"""Exact finite-prefix densities and checkpoint profiles.

All ratios are :class:`fractions.Fraction`.  A limsup/liminf can never be read
off a finite prefix, so a :class:`DensityProfile` reports *records*: the
max (min) of the checkpoint values over a trailing window, by default the
trailing half of the checkpoints.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from rdl.errors import ContractError, ParameterError

KINDS = ("upper", "lower", "strong-upper", "strong-lower")


def _check_prefix(n: int) -> None:
    if n < 1:
        raise ParameterError("prefix length must be at least 1")


def density_at(members: Iterable[int], n: int) -> Fraction:
    """|A ∩ [n]| / n."""
    _check_prefix(n)
    return Fraction(sum(1 for a in set(members) if 1 <= a <= n), n)


def initial_segment_length(order: Sequence[int], n: int) -> int:
    """Length of the longest initial segment of ``order`` inside [n]."""
    m = 0
    for a in order:
        if a > n:
            break
        m += 1
    return m


def strong_density_at(order: Sequence[int], n: int) -> Fraction:
    """f(n) / n where f(n) is the longest initial segment of ``order`` inside [n]."""
    _check_prefix(n)
    if len(set(order)) != len(order):
        raise ParameterError("sequence entries must be distinct")
    return Fraction(initial_segment_length(order, n), n)


def local_density(members: Iterable[int]) -> Fraction:
    """|F| / max(F) for a finite nonempty F."""
    f = set(members)
    if not f:
        raise ParameterError("local density of an empty set")
    return Fraction(len(f), max(f))


@dataclass(frozen=True)
class DensityProfile:
    kind: str
    checkpoints: tuple
    values: tuple
    flags: Optional[tuple] = None  # per checkpoint: counts toward the record?
    tail_start: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown profile kind {self.kind!r}")
        if len(self.checkpoints) != len(self.values):
            raise ParameterError("one value per checkpoint")

    def _tail(self, start: Optional[int] = None):
        start = self.tail_start if start is None else start
        flags = self.flags or (True,) * len(self.values)
        return [v for i, (v, f) in enumerate(zip(self.values, flags)) if i >= start and f]

    def record_upper(self, start: Optional[int] = None) -> Optional[Fraction]:
        """Max of the (flagged) values with index >= start; None if the window is empty."""
        tail = self._tail(start)
        return max(tail) if tail else None

    def record_lower(self, start: Optional[int] = None) -> Optional[Fraction]:
        tail = self._tail(start)
        return min(tail) if tail else None

    @property
    def record(self) -> Optional[Fraction]:
        """The record matching the profile kind (upper for upper kinds, lower otherwise)."""
        return self.record_upper() if self.kind.endswith("upper") else self.record_lower()

    def with_window(self, tail_start: int) -> "DensityProfile":
        return DensityProfile(self.kind, self.checkpoints, self.values, self.flags, tail_start)

    # -- serialization ----------------------------------------------------

    def rows(self):
        flags = self.flags or (True,) * len(self.values)
        for n, v, f in zip(self.checkpoints, self.values, flags):
            yield {"checkpoint": n, "value_num": v.numerator, "value_den": v.denominator,
                   "flagged": bool(f)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, ["checkpoint", "value_num", "value_den", "flagged"],
                                lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        rec = self.record
        return {
            "kind": self.kind,
            "tail_start": self.tail_start,
            "rows": list(self.rows()),
            "record": None if rec is None else [rec.numerator, rec.denominator],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DensityProfile":
        rows = d["rows"]
        return cls(
            d["kind"],
            tuple(r["checkpoint"] for r in rows),
            tuple(Fraction(r["value_num"], r["value_den"]) for r in rows),
            tuple(r["flagged"] for r in rows),
            d.get("tail_start", 0),
        )


def _validate_checkpoints(checkpoints) -> list:
    cps = [int(c) for c in checkpoints]
    if not cps:
        raise ParameterError("empty checkpoint list")
    if cps[0] < 1 or any(a >= b for a, b in zip(cps, cps[1:])):
        raise ParameterError("checkpoints must be positive and strictly increasing")
    return cps


def default_tail(count: int) -> int:
    """Index where the trailing half of ``count`` checkpoints begins."""
    return count // 2


def profile(obj, checkpoints, kind: str = "upper", tail_start: Optional[int] = None) -> DensityProfile:
    """Evaluate one density notion at every checkpoint.

    ``obj`` is a set-like of vertices for the plain kinds and an ordered
    sequence for the strong kinds.
    """
    cps = _validate_checkpoints(checkpoints)
    if kind in ("upper", "lower"):
        members = sorted(set(obj))
        values = tuple(Fraction(bisect_right(members, n), n) for n in cps)
    elif kind in ("strong-upper", "strong-lower"):
        order = list(obj)
        if len(set(order)) != len(order):
            raise ParameterError("sequence entries must be distinct")
        # f(n) for increasing n: advance a pointer while prefix maxima stay <= n
        prefix_max = list(itertools.accumulate(order, max))
        values = tuple(Fraction(bisect_right(prefix_max, n), n) for n in cps)
    else:
        raise ParameterError(f"unknown profile kind {kind!r}")
    start = default_tail(len(cps)) if tail_start is None else tail_start
    return DensityProfile(kind, tuple(cps), values, None, start)


def _as_callable(adjacent):
    if isinstance(adjacent, np.ndarray):
        return lambda a, b: bool(adjacent[a, b])
    return adjacent


def _grow(adj: np.ndarray, order: list, target: np.ndarray) -> list:
    """Append target vertices layer by layer, each adjacent to something already placed."""
    out = list(order)
    placed = np.zeros(adj.shape[0], dtype=bool)
    placed[out] = True
    frontier = list(out)
    while frontier:
        new = np.flatnonzero(adj[frontier].any(axis=0) & target & ~placed)
        placed[new] = True
        out.extend(int(v) for v in new)
        frontier = list(new)
    return out


def _connected_induced(vertices: set, adjacent) -> Optional[list]:
    """BFS order of the subgraph induced on ``vertices`` if connected, else None.

    ``adjacent`` is a predicate or a label-indexed boolean matrix.
    """
    if not vertices:
        return []
    if isinstance(adjacent, np.ndarray):
        target = np.zeros(adjacent.shape[0], dtype=bool)
        target[list(vertices)] = True
        order = _grow(adjacent, [min(vertices)], target)
        return order if len(order) == len(vertices) else None
    start = min(vertices)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in sorted(vertices - seen):
            if adjacent(x, y):
                seen.add(y)
                order.append(y)
                queue.append(y)
    return order if len(seen) == len(vertices) else None


@dataclass(frozen=True)
class ConnectedProfile:
    """Flagged profile plus a prefix-connected ordering certifying the last flag."""

    profile: DensityProfile
    orderings: dict = field(default_factory=dict)  # checkpoint -> BFS ordering


def strong_density_connected(vertices: Iterable[int], adjacent, checkpoints,
                             tail_start: Optional[int] = None) -> ConnectedProfile:
    """Sufficient-condition estimate of strong upper density for a connected subgraph.

    ``adjacent`` is a predicate on label pairs or a label-indexed boolean
    adjacency matrix (much faster on large prefixes).

    At each checkpoint n the value is |V ∩ [n]| / n, flagged when V ∩ [n]
    induces a connected subgraph.  Each flagged checkpoint comes with an
    explicit ordering that extends the ordering of the previous flagged
    checkpoint and keeps every initial segment connected.
    """
    vset = set(vertices)
    cps = _validate_checkpoints(checkpoints)
    if _connected_induced(vset, adjacent) is None:
        raise ContractError("the subgraph is not connected")
    values, flags, orderings = [], [], {}
    prev_order: list = []
    for n in cps:
        part = {v for v in vset if v <= n}
        values.append(Fraction(len(part), n))
        ok = bool(part) and _connected_induced(part, adjacent) is not None
        flags.append(ok)
        if ok:
            prev_order = _extend_ordering(prev_order, part, adjacent)
            orderings[n] = list(prev_order)
    start = default_tail(len(cps)) if tail_start is None else tail_start
    prof = DensityProfile("strong-upper", tuple(cps), tuple(values), tuple(flags), start)
    return ConnectedProfile(prof, orderings)


def _extend_ordering(order: list, target: set, adjacent) -> list:
    """Extend a prefix-connected ordering to cover ``target`` (a connected superset)."""
    if isinstance(adjacent, np.ndarray):
        mask = np.zeros(adjacent.shape[0], dtype=bool)
        mask[list(target)] = True
        out = _grow(adjacent, list(order) or [min(target)], mask)
        if len(out) < len(target) or not set(order) <= target:
            raise ContractError("ordering cannot be extended: earlier prefix not contained in later one")
        return out
    out = list(order)
    placed = set(out)
    if not out:
        first = min(target)
        out.append(first)
        placed.add(first)
    while len(placed) < len(target):
        for y in sorted(target - placed):
            if any(adjacent(x, y) for x in out):
                out.append(y)
                placed.add(y)
                break
        else:
            raise ContractError("ordering cannot be extended: earlier prefix not contained in later one")
    return out


def is_prefix_connected(order: Sequence[int], adjacent) -> bool:
    adjacent = _as_callable(adjacent)
    for i in range(1, len(order)):
        if not any(adjacent(order[j], order[i]) for j in range(i)):
            return False
    return True


def exhaustive_strong_density(vertices: Iterable[int], adjacent, n: int) -> Fraction:
    """max over prefix-connected orderings of max_{m<=n} f(m)/m, by brute force (|V| <= 12)."""
    adjacent = _as_callable(adjacent)
    vs = sorted(set(vertices))
    if len(vs) > 12:
        raise ParameterError("exhaustive ordering search is limited to 12 vertices")
    best = Fraction(0)
    for perm in itertools.permutations(vs):
        if not is_prefix_connected(perm, adjacent):
            continue
        for m in range(1, n + 1):
            best = max(best, Fraction(initial_segment_length(perm, m), m))
    return best


def density1_transversal(family: Sequence[Iterable[int]], eps_seq: Sequence[Fraction], N: int) -> dict:
    """Finite version of the density-one transversal of a partition into density-zero sets.

    For each i the threshold n_i is the least n such that the union of the first
    i cells has density < eps_i at every m in [n, N].  The result is
    B ∩ [N] with B = union of A_i ∩ [n_i].  A cell whose threshold lies beyond
    N gets ``None`` and contributes all of A_i ∩ [N].  The active index is the
    last cell with a threshold inside [N]; at least one is required.
    """
    _check_prefix(N)
    full = set(range(1, N + 1))
    cells = [sorted(set(a) & full) for a in family]
    seen: set = set()
    for c in cells:
        if seen & set(c):
            raise ContractError("family cells overlap")
        seen |= set(c)
    if seen != full:
        raise ContractError("family is not a partition of [N]")
    if len(eps_seq) < len(cells):
        raise ParameterError("need one eps per cell")
    in_union = bytearray(N + 1)
    thresholds = []
    B: set = set()
    for i, cell in enumerate(cells):
        for a in cell:
            in_union[a] = 1
        eps = Fraction(eps_seq[i])
        # scan down from N; the last m with density >= eps fixes n_i = m + 1
        count = sum(in_union)
        n_i = 1
        for m in range(N, 0, -1):
            if Fraction(count, m) >= eps:
                n_i = m + 1
                break
            count -= in_union[m]
        thresholds.append(n_i if n_i <= N else None)
        B |= {a for a in cell if a <= n_i}
    active = [i for i, t in enumerate(thresholds) if t is not None]
    if not active:
        raise ContractError("no cell union drops below its eps inside [N]")
    return {
        "members": sorted(B),
        "thresholds": thresholds,
        "active_index": active[-1] + 1,
        "cell_hits": [sum(1 for a in cell if a in B) for cell in cells],
        "density": density_at(B, N),
    }


def h_relative_count(members: Iterable[int], n: int, h: Callable[[int], int]) -> Fraction:
    """|A ∩ [n]| / h(n) for a user-supplied normalizer h (no claims attached)."""
    _check_prefix(n)
    d = h(n)
    if d <= 0:
        raise ParameterError("h(n) must be positive")
    return Fraction(sum(1 for a in set(members) if 1 <= a <= n), d)
