import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rdl.colorings import BLUE, RED, PrefixColoring, gen_affine, gen_constant, gen_random, materialize
from rdl.engine.bipartite import bipartite_3path_partition, bipartite_host, check_partition
from rdl.engine.components import largest_mono_component, mono_components
from rdl.engine.forests import IncrementTrace, glp_path_forests, mpf_dense_forest
from rdl.engine.lasvergnas import degree_condition, exhaustive_check, is_hamiltonian_path, las_vergnas_path
from rdl.engine.oracles import gg_oracle, gyarfas_oracle, raynaud_oracle
from rdl.engine.witness import validate_forest
from rdl.errors import ContractError, InternalError, ParameterError
from fractions import Fraction


# -- bipartite partition -----------------------------------------------------

def test_all_red_bipartite_is_one_path():
    pc, U, V = bipartite_host(np.zeros((4, 4), int))
    part = bipartite_3path_partition(pc, U, V)
    assert len(part.paths) == 1 and len(part.paths[0]) == 8


def test_every_k33_coloring():
    for code in range(2 ** 9):
        m = np.array([(code >> i) & 1 for i in range(9)]).reshape(3, 3)
        pc, U, V = bipartite_host(m)
        part = bipartite_3path_partition(pc, U, V)
        check_partition(pc, U, V, part.paths)
        for p in part.paths:
            sides = [v in U for v in p.vertices]
            assert all(a != b for a, b in zip(sides, sides[1:]))


def test_check_partition_rejects_bad_output():
    pc, U, V = bipartite_host(np.zeros((2, 2), int))
    from rdl.engine.witness import PathWitness
    with pytest.raises(ContractError):
        check_partition(pc, U, V, [PathWitness((1, 3), RED)])
    with pytest.raises(ContractError):
        check_partition(pc, U, V, [PathWitness((1, 2), RED), PathWitness((3, 4), RED)])


@pytest.mark.parametrize("m", [7, 10, 16, 25])
def test_heuristic_on_structured_colorings(m):
    rng = np.random.default_rng(m)
    for trial in range(8):
        a, b = rng.integers(0, 2, m), rng.integers(0, 2, m)
        table = rng.integers(0, 2, (2, 2))
        mat = table[a][:, b] if trial % 2 else rng.integers(0, 2, (m, m))
        pc, U, V = bipartite_host(mat)
        part = bipartite_3path_partition(pc, U, V, seed=trial)
        check_partition(pc, U, V, part.paths)


# -- forests -----------------------------------------------------------------

def _total(seed, n, p_blue=0.5):
    rng = np.random.default_rng(seed)
    return materialize(gen_random(seed), n).with_vertex_colors((rng.random(n) < p_blue).astype(int))


def test_glp_degenerate_all_red_edges_no_red_vertices():
    pc = materialize(gen_constant(RED), 6).with_vertex_colors([BLUE] * 6)
    pair = glp_path_forests(pc)
    assert len(pair.forest(RED)) == 0
    assert len(pair.forest(BLUE)) == 6 and all(len(p) == 1 for p in pair.forest(BLUE).paths)


def test_glp_bound_exhaustive_k4():
    # every edge coloring of K_4 with vertices 1,2 red and 3,4 blue (and the
    # mirrored vertex assignment), compared with the brute-force optimum
    for code in range(2 ** 6):
        edges = list(itertools.combinations(range(4), 2))
        m = np.zeros((4, 4), int)
        for i, (a, b) in enumerate(edges):
            m[a, b] = m[b, a] = (code >> i) & 1
        for vc in ([0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 1, 0]):
            pc = PrefixColoring.from_matrix(m, vertex_color=vc)
            pair = glp_path_forests(pc)
            assert pair.total >= 4 + 2 - 3
            assert pair.defect <= 3


def test_glp_rejects_bad_input():
    pc = materialize(gen_random(1), 10).with_vertex_colors([0, 0, 0] + [1] * 7)
    with pytest.raises(ContractError):
        glp_path_forests(pc, minor=1)
    with pytest.raises(ContractError):
        glp_path_forests(pc, Bprime=[4, 5])
    with pytest.raises(ContractError):
        glp_path_forests(materialize(gen_random(1), 5))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 60), p=st.floats(0.2, 0.8))
def test_glp_bound_property(seed, n, p):
    pc = _total(seed, n, p)
    vc = pc.vertex_color[1:]
    minor = 0 if (vc == 0).sum() <= (vc == 1).sum() else 1
    r = int((vc == minor).sum())
    pair = glp_path_forests(pc, minor=minor, seed=seed)
    assert pair.total >= n + r - 3
    assert pair.defect <= 3
    validate_forest(pc, pair.minor_forest)
    validate_forest(pc, pair.major_forest)
    rset = {v for v in range(1, n + 1) if vc[v - 1] == minor}
    bprime = sorted(set(range(1, n + 1)) - rset)[: len(rset)]
    assert pair.minor_forest.vertices <= rset | set(bprime)


def test_mpf_all_blue():
    pc = materialize(gen_constant(BLUE), 80).with_vertex_colors([BLUE] * 80)
    res = mpf_dense_forest(pc, Fraction(1, 4), 12)
    assert res.ratio == 1 and res.checkpoint == 80


@pytest.mark.parametrize("seed", range(25))
def test_mpf_bound_on_random(seed):
    pc = _total(seed, 200, [0.5, 0.6, 0.7, 0.45, 0.8][seed % 5])
    res = mpf_dense_forest(pc, 0.2, 15, seed=seed)
    assert res.checkpoint >= 15
    assert res.ratio >= Fraction(11, 20)
    validate_forest(pc, res.forest)
    res.trace.check()
    sizes = [s["J"] for s in res.trace.states]
    assert sizes == sorted(sizes, reverse=True)


def test_mpf_parameter_checks():
    pc = _total(0, 50)
    with pytest.raises(ParameterError):
        mpf_dense_forest(pc, 0.9, 10)
    with pytest.raises(ParameterError):
        mpf_dense_forest(pc, 0.2, 10)


def test_trace_checker_catches_violations():
    tr = IncrementTrace(Fraction(1, 5), 15, 100, 0, False)
    tr.states = [{"i": 0, "r": 40, "b": 60, "J": 100}, {"i": 1, "r": 30, "b": 40, "J": 70}]
    tr.branches = [{"i": 1, "branch": "iii", "diff_prev": 20, "diff": 10}]
    with pytest.raises(InternalError):
        tr.check()
    tr.branches = [{"i": 1, "branch": "iii", "diff_prev": 5, "diff": 10}]
    tr.check()
    tr.states[1]["b"] = 39
    with pytest.raises(InternalError):
        tr.check()


# -- Las Vergnas -------------------------------------------------------------

def test_lv_complete_graph():
    a = np.ones((4, 4), bool)
    for u in range(1, 5):
        for v in range(5, 9):
            res = las_vergnas_path(a, u, v)
            assert is_hamiltonian_path(a, res.path, u, v)


def test_lv_condition_indices():
    a = np.ones((4, 4), bool)
    a[0, 1:] = False  # d(u_1) = 1
    cond = degree_condition(a)
    assert cond["j"] == 1 and cond["d_uj"] == 1 and not cond["holds"]
    assert las_vergnas_path(a, 1, 5).path is None


def test_lv_exhaustive_m3():
    res = exhaustive_check(3)
    assert res["violations"] == 0 and res["condition_holds"] >= 1


def test_lv_against_networkx_paths():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = rng.random((4, 4)) < 0.8
        if not degree_condition(a)["holds"]:
            continue
        g = nx.Graph()
        g.add_edges_from((i, 4 + j) for i in range(4) for j in range(4) if a[i, j])
        for u, v in [(0, 4), (3, 7)]:
            exists = any(p[0] == u and p[-1] == v and all(g.has_edge(x, y) for x, y in zip(p, p[1:]))
                         for p in itertools.permutations(range(8)))
            assert exists
            assert is_hamiltonian_path(a, las_vergnas_path(a, u + 1, v + 1).path, u + 1, v + 1)


@pytest.mark.parametrize("seed", range(10))
def test_lv_random_up_to_10(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 11))
    a = rng.random((m, m)) < 0.9
    res = las_vergnas_path(a, 1, 2 * m)
    if res.condition["holds"]:
        assert is_hamiltonian_path(a, res.path, 1, 2 * m)


# -- components and oracles ----------------------------------------------------

def test_components_match_networkx():
    for seed in range(5):
        pc = materialize(gen_random(seed, 3), 15)
        m = pc.matrix
        for c in range(3):
            g = nx.Graph()
            g.add_nodes_from(range(1, 16))
            g.add_edges_from((u, v) for u, v in itertools.combinations(range(1, 16), 2) if m[u, v] == c)
            ours = sorted(map(sorted, mono_components(pc, c)))
            theirs = sorted(sorted(x) for x in nx.connected_components(g))
            assert ours == theirs


def test_two_colorings_have_spanning_component():
    for seed in range(5):
        color, comp = largest_mono_component(materialize(gen_random(seed), 20))
        assert len(comp) == 20


def test_affine_component_tightness():
    color, comp = largest_mono_component(materialize(gen_affine(2), 8))
    assert len(comp) == 4


@pytest.mark.parametrize("n", [4, 5, 6])
def test_gg_oracle_small(n):
    res = gg_oracle(n)
    assert res["min_longest"] == math.ceil((2 * n + 1) / 3)
    pc = materialize(__import__("rdl.colorings", fromlist=["ColoringSpec"]).ColoringSpec.from_dict(res["extremal"]), n)
    from rdl.engine.paths import longest_mono_path
    assert max(len(longest_mono_path(pc, c)) for c in (0, 1)) == res["min_longest"]


def test_raynaud_oracle_small_against_networkx():
    for n in (3, 4):
        res = raynaud_oracle(n)
        arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
        best = n
        for code in range(2 ** (len(arcs) - 1)):
            col = [(code << 1) >> k & 1 for k in range(len(arcs))]
            val = 0
            for c in (0, 1):
                g = nx.DiGraph([a for a, x in zip(arcs, col) if x == c])
                g.add_nodes_from(range(n))
                val = max(val, max(len(p) for s in range(n) for t in range(n)
                                   for p in ([[s]] if s == t else nx.all_simple_paths(g, s, t))))
            best = min(best, val)
        assert res["min_longest"] == best == math.ceil(n / 2) + 1


def test_gyarfas_oracle_small():
    res = gyarfas_oracle(4)
    assert res["min_largest"] >= 2
    assert res["colorings"] == 3 ** 6
