import itertools
import json
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdl.colorings import PrefixColoring, gen_affine, gen_affine_lower3, gen_constant, gen_random, materialize
from rdl.connected import (TrichotomyCertificate, classify_new_vertex, default_checkpoints, extend_type_ii,
                           sud_tree_2col, sud_tree_3col, trichotomy, validate_certificate)
from rdl.errors import InternalError, ParameterError


def _k(n, codes):
    m = np.zeros((n, n), dtype=np.int64)
    for (a, b), c in zip(itertools.combinations(range(n), 2), codes):
        m[a, b] = m[b, a] = c
    return PrefixColoring.from_matrix(m, 3)


def _graph(pc, n, color, within=None):
    vs = list(range(1, n + 1) if within is None else within)
    m = pc.matrix
    g = nx.Graph()
    g.add_nodes_from(vs)
    g.add_edges_from((u, v) for u, v in itertools.combinations(vs, 2) if m[u, v] == color)
    return g


def _complete(pc, A, B, color):
    return all(pc.color(a, b) == color for a in A for b in B)


def _check_structure(pc, n, cert):
    """The three outcomes, checked edge by edge without the library validator."""
    roles = cert.roles
    if cert.case == "i":
        assert nx.is_connected(_graph(pc, n, cert.spanning_color))
        return
    P = {k: cert.part(k) for k in "WXYZ"}
    assert sorted(v for k in "WXYZ" for v in P[k]) == list(range(1, n + 1))
    b, r, g = roles["b"], roles["r"], roles["g"]
    assert len({b, r, g}) == 3
    if cert.case == "ii":
        assert all(P[k] for k in "WXYZ")
        assert _complete(pc, P["W"], P["X"], b) and _complete(pc, P["Y"], P["Z"], b)
        assert _complete(pc, P["W"], P["Y"], r) and _complete(pc, P["X"], P["Z"], r)
        assert _complete(pc, P["W"], P["Z"], g) and _complete(pc, P["X"], P["Y"], g)
    else:
        assert cert.case == "iii"
        assert P["X"] and P["Y"] and P["Z"]
        for color, names in ((b, "WXY"), (r, "WXZ"), (g, "WYZ")):
            vs = [v for k in names for v in P[k]]
            assert nx.is_connected(_graph(pc, n, color, vs))
        assert _complete(pc, P["X"], P["Y"], b)
        assert _complete(pc, P["X"], P["Z"], r)
        assert _complete(pc, P["Y"], P["Z"], g)
        for other, color in (("X", g), ("Y", r), ("Z", b)):
            assert not any(pc.color(w, x) == color for w in P["W"] for x in P[other])


def test_trichotomy_every_coloring_of_k4():
    seen = set()
    for codes in itertools.product(range(3), repeat=6):
        pc = _k(4, codes)
        cert = trichotomy(pc)
        _check_structure(pc, 4, cert)
        seen.add(cert.case)
    assert seen == {"i", "ii", "iii"}


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 64), st.integers(0, 2 ** 32 - 1))
def test_trichotomy_random(n, seed):
    pc = materialize(gen_random(seed, num_colors=3), n)
    cert = trichotomy(pc)
    _check_structure(pc, n, cert)


def test_certificate_round_trip_and_tamper():
    pc = _k(4, (0, 1, 2, 2, 1, 0))
    cert = trichotomy(pc)
    again = TrichotomyCertificate.from_dict(json.loads(cert.to_json()))
    assert validate_certificate(pc, again)
    if again.case != "i":
        parts = dict(again.parts)
        parts["W"], parts["Z"] = parts["Z"], parts["W"]
        bad = TrichotomyCertificate(again.case, again.n, parts, again.roles)
        with pytest.raises(InternalError):
            validate_certificate(pc, bad)


def test_trichotomy_needs_three_colors():
    with pytest.raises(ParameterError):
        trichotomy(materialize(gen_random(0), 6))


def test_type_ii_extends_to_exactly_one_part():
    # sampled K_5 colorings whose [4] is of type (ii) and whose [5] is not spanned by one color
    rng = np.random.default_rng(3)
    hits = 0
    for _ in range(6000):
        pc = _k(5, rng.integers(0, 3, 10))
        c4 = trichotomy(pc, 4)
        if c4.case != "ii" or trichotomy(pc, 5).case == "i":
            continue
        hits += 1
        fits = classify_new_vertex(pc, c4, 5)
        assert len(fits) == 1
        ext = extend_type_ii(pc, c4, 5)
        _check_structure(pc, 5, ext)
    assert hits > 0


def test_extension_rejects_other_vertices():
    rng = np.random.default_rng(0)
    while True:
        pc = _k(5, rng.integers(0, 3, 10))
        c4 = trichotomy(pc, 4)
        if c4.case == "ii":
            break
    with pytest.raises(ParameterError):
        extend_type_ii(pc, c4, 6)


@pytest.mark.parametrize("seed", range(4))
def test_tree_2col_is_connected(seed):
    spec = gen_random(seed)
    res = sud_tree_2col(spec, 300)
    pc = materialize(spec, 300)
    g = _graph(pc, 300, res.color, res.vertices)
    assert nx.is_connected(g)
    assert 1 in res.vertices
    # each certified ordering keeps every initial segment connected
    for n, order in res.orderings.items():
        assert sorted(order) == sorted(v for v in res.vertices if v <= n)
        for i in range(1, len(order) + 1):
            assert nx.is_connected(g.subgraph(order[:i]))


def test_tree_2col_constant():
    res = sud_tree_2col(gen_constant(), 64)
    assert res.profile.record == 1 and len(res.vertices) == 64


def test_default_checkpoints():
    assert default_checkpoints(gen_random(0), 20) == [2, 4, 8, 16, 20]
    g = {"kind": "power2"}
    cps = default_checkpoints(gen_affine_lower3(g), 100)
    assert cps[-1] == 100 and cps == sorted(set(cps))


def test_tree_3col_on_affine_plane():
    # [PAPER] with q = 2 no monochromatic connected subgraph has strong upper density above 1/2
    spec = gen_affine(2)
    res = sud_tree_3col(spec, 512)
    assert res.profile.record <= Fraction(1, 2) + Fraction(1, 100)
    pc = materialize(spec, 512)
    assert nx.is_connected(_graph(pc, 512, res.color, res.vertices))


def test_tree_3col_on_lower3_stays_below_class_pairs():
    # each color links the classes (by index mod 4) only in pairs, so a connected
    # monochromatic set lies in the union of two residues; its density cannot beat that union's
    spec = gen_affine_lower3({"kind": "power2"})
    N = 2048
    res = sud_tree_3col(spec, N)
    part = spec.partition(N)
    idx = np.asarray(part.index_of(np.arange(1, N + 1))) % 4
    prof = res.profile
    ceiling = Fraction(0)
    for pair in itertools.combinations(range(4), 2):
        inside = np.isin(idx, pair)
        vals = [Fraction(int(inside[:n].sum()), n) for n in prof.checkpoints]
        ceiling = max(ceiling, max(vals[prof.tail_start:]))
    assert prof.record <= ceiling
    assert len({int(i) for i in idx[[v - 1 for v in res.vertices]]}) <= 2
    pc = materialize(spec, N)
    assert nx.is_connected(_graph(pc, N, res.color, res.vertices))


def test_tree_3col_parameter_errors():
    with pytest.raises(ParameterError):
        sud_tree_3col(gen_random(0), 50)
    with pytest.raises(ParameterError):
        sud_tree_2col(gen_affine(2), 50)
