"""Consecutive interval partitions of the positive integers.

A partition is described by a *growth descriptor*, a small JSON-able dict that
gives the size of the n-th interval::

    {"kind": "const", "value": 3}
    {"kind": "poly", "coef": 1, "power": 1}          # |A_n| = n
    {"kind": "geometric", "first": 10, "ratio": 4}   # 10, 40, 160, ...
    {"kind": "power2"}                               # 2**n
    {"kind": "factorial"}
    {"kind": "explicit", "sizes": [1, 2, 4]}
    {"kind": "times_n", "h": {...}}                  # n * h(n)

Only the prefix that is actually needed is ever materialized.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from rdl.errors import ParameterError

GROWTH_KINDS = ("const", "poly", "geometric", "power2", "factorial", "explicit", "times_n")


def growth_size(desc: dict, n: int) -> int:
    """Size of the interval with index ``n`` under ``desc``."""
    kind = desc.get("kind")
    if kind == "const":
        return int(desc["value"])
    if kind == "poly":
        return int(desc.get("coef", 1)) * n ** int(desc.get("power", 1))
    if kind == "geometric":
        start = int(desc.get("start_index", 1))
        return int(desc["first"]) * int(desc["ratio"]) ** (n - start)
    if kind == "power2":
        return 2 ** n
    if kind == "factorial":
        return math.factorial(n)
    if kind == "explicit":
        sizes = desc["sizes"]
        start = int(desc.get("start_index", 1))
        if n - start >= len(sizes):
            raise ParameterError(f"explicit growth has only {len(sizes)} intervals")
        return int(sizes[n - start])
    if kind == "times_n":
        return n * growth_size(desc["h"], n)
    raise ParameterError(f"unknown growth kind {kind!r}")


def validate_growth(desc: dict, first_index: int = 1, probe: int = 12) -> None:
    """Reject descriptors that are malformed, non-positive or decreasing."""
    if not isinstance(desc, dict) or desc.get("kind") not in GROWTH_KINDS:
        raise ParameterError(f"bad growth descriptor {desc!r}")
    if desc["kind"] == "geometric" and (int(desc["first"]) < 1 or int(desc["ratio"]) < 1):
        raise ParameterError("geometric growth needs first >= 1 and ratio >= 1")
    if desc["kind"] == "explicit":
        probe = len(desc["sizes"])
        first_index = int(desc.get("start_index", first_index))
    prev = None
    for n in range(first_index, first_index + probe):
        size = growth_size(desc, n)
        if size < 1:
            raise ParameterError(f"interval {n} has non-positive size {size}")
        if prev is not None and size < prev:
            raise ParameterError("interval sizes must be nondecreasing")
        prev = size


@dataclass(frozen=True)
class IntervalPartition:
    """Consecutive intervals A_{first_index}, A_{first_index+1}, ... of [1, total]."""

    sizes: tuple
    first_index: int = 1

    def __post_init__(self):
        if not self.sizes or any(int(s) < 1 for s in self.sizes):
            raise ParameterError("interval sizes must be positive")

    @classmethod
    def from_growth(cls, desc: dict, cover: int, first_index: int = 1) -> "IntervalPartition":
        """Smallest prefix of intervals whose union contains [cover].

        Explicit size lists may stop short of ``cover``.
        """
        return _cached_partition(json.dumps(desc, sort_keys=True), first_index, int(cover))

    @property
    def ends(self) -> np.ndarray:
        return np.cumsum(np.asarray(self.sizes, dtype=np.int64))

    @property
    def starts(self) -> np.ndarray:
        ends = self.ends
        return ends - np.asarray(self.sizes, dtype=np.int64) + 1

    @property
    def boundaries(self) -> list:
        return [int(e) for e in self.ends]

    @property
    def total(self) -> int:
        return int(sum(self.sizes))

    def __len__(self):
        return len(self.sizes)

    def index_of(self, v):
        """Interval index (counting from ``first_index``) of vertex or array ``v``."""
        arr = np.asarray(v, dtype=np.int64)
        if np.any(arr < 1) or np.any(arr > self.total):
            raise ParameterError(f"vertex outside [1, {self.total}]")
        idx = np.searchsorted(self.ends, arr, side="left") + self.first_index
        return int(idx) if np.ndim(idx) == 0 else idx

    def interval(self, index: int) -> range:
        i = index - self.first_index
        start = int(self.starts[i])
        return range(start, start + int(self.sizes[i]))

    def truncated(self, n: int) -> "IntervalPartition":
        """Intervals meeting [n], the last one cut at n."""
        sizes = []
        total = 0
        for s in self.sizes:
            if total >= n:
                break
            sizes.append(min(int(s), n - total))
            total += sizes[-1]
        if total < n:
            raise ParameterError(f"partition covers only [{total}]")
        return IntervalPartition(tuple(sizes), self.first_index)

    def growth_ratios(self) -> list:
        """|A_n| / (|A_1| + ... + |A_n|) for every materialized interval."""
        out = []
        acc = 0
        for s in self.sizes:
            acc += int(s)
            out.append(Fraction(int(s), acc))
        return out

    def is_fast_growing(self, skip: int = 1) -> bool:
        """Numerical check: the growth ratios are nondecreasing after ``skip`` intervals."""
        ratios = self.growth_ratios()[skip:]
        return all(a <= b for a, b in zip(ratios, ratios[1:]))


@lru_cache(maxsize=256)
def _cached_partition(desc_json: str, first_index: int, cover: int) -> IntervalPartition:
    desc = json.loads(desc_json)
    if desc.get("kind") == "explicit":
        first_index = int(desc.get("start_index", first_index))
    sizes = []
    total = 0
    n = first_index
    limit = len(desc["sizes"]) if desc.get("kind") == "explicit" else None
    while total < cover:
        if limit is not None and len(sizes) == limit:
            break
        s = growth_size(desc, n)
        if s < 1:
            raise ParameterError(f"interval {n} has non-positive size {s}")
        sizes.append(s)
        total += s
        n += 1
    return IntervalPartition(tuple(sizes), first_index)
