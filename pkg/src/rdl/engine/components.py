"""Monochromatic connected components."""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def mono_components(coloring, color: int, vertices=None) -> list:
    """Components (sorted label lists) of the ``color`` graph on ``vertices`` (default [n]).

    On directed hosts an arc of either direction joins its ends.
    """
    vs = np.arange(1, coloring.n + 1) if vertices is None else np.asarray(sorted(vertices), dtype=np.int64)
    if len(vs) == 0:
        return []
    adj = coloring.submatrix(vs) == color
    np.fill_diagonal(adj, False)
    count, labels = connected_components(csr_matrix(adj), directed=coloring.directed, connection="weak")
    comps = [[] for _ in range(count)]
    for v, lab in zip(vs, labels):
        comps[lab].append(int(v))
    return sorted(comps, key=lambda c: (-len(c), c[0]))


def largest_mono_component(coloring, vertices=None) -> tuple:
    """(color, vertex list) of a largest monochromatic component; ties go to the lower color."""
    best = (0, [])
    for c in range(coloring.num_colors):
        comps = mono_components(coloring, c, vertices)
        if comps and len(comps[0]) > len(best[1]):
            best = (c, comps[0])
    return best
