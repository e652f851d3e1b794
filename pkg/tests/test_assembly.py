import itertools
import json
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from rdl.assembly import (AssemblyTrace, assemble_23_sud_path, assemble_34_path, check_trace, connector_path,
                          find_alpha_connector, recheck_trace, two_matching)
from rdl.assembly.common import cut_intervals, full_table, min_separator, schedule_34
from rdl.assembly.connectors import check_connector
from rdl.assembly.strong import fast_schedule
from rdl.assembly.upper import find_cut, vertex_colors
from rdl.colorings import BLUE, RED, gen_affine, gen_eg_strong, gen_eg_upper, gen_explicit, gen_random, materialize
from rdl.errors import ContractError, ParameterError


def _edges_ok(spec, path, color):
    # independent of the witness validator: colors straight from the rule
    vs = list(path)
    return len(set(vs)) == len(vs) and all(spec.color(a, b) == color for a, b in zip(vs, vs[1:]))


# -- schedules -----------------------------------------------------------------

def test_schedule_meets_its_constraints():
    for eps, k, a in schedule_34(20):
        assert k >= 3 / eps and a >= 4 * k / eps
    assert schedule_34(1)[0] == (Fraction(1, 4), 12, 192)


def test_schedule_rejects_small_parameters():
    with pytest.raises(ParameterError):
        schedule_34(1, eps_seq=[Fraction(1, 4)], k_seq=[11])
    with pytest.raises(ParameterError):
        schedule_34(1, eps_seq=[Fraction(1, 4)], k_seq=[12], a_seq=[191])
    with pytest.raises(ParameterError):
        schedule_34(1, eps_seq=[Fraction(4, 5)])


def test_cut_intervals():
    assert cut_intervals(10, [3, 3, 3, 3]) == [(1, 3), (4, 6), (7, 9), (10, 10)]
    assert cut_intervals(10, [3, 3, 3, 3], min_last=2) == [(1, 3), (4, 6), (7, 9)]
    assert cut_intervals(9, [4, 5]) == [(1, 4), (5, 9)]


def test_fast_schedule_local_density():
    sizes = fast_schedule(50000)
    prefix = 0
    for n, a in enumerate(sizes, start=1):
        if n > 1:
            # the new interval takes at least a 1 - eps_n share of the prefix it closes
            assert Fraction(a, prefix + a) >= 1 - Fraction(1, n + 3)
        prefix += a
    assert prefix >= 50000


# -- helpers against brute force -----------------------------------------------

def test_vertex_colors_match_direct_count():
    pc = materialize(gen_random(3), 60)
    vc = vertex_colors(full_table(pc))
    for v in range(1, 60):
        later = [pc.color(v, w) for w in range(v + 1, 61)]
        assert vc[v] == (RED if 2 * later.count(RED) >= len(later) else BLUE)


@pytest.mark.parametrize("seed", range(12))
def test_min_separator_against_networkx(seed):
    rng = np.random.default_rng(seed)
    n = 14
    adj = np.triu(rng.random((n, n)) < 0.25, 1)
    adj = adj | adj.T
    g = nx.from_numpy_array(adj.astype(int))
    for x, y in itertools.combinations(range(n), 2):
        if adj[x, y]:
            continue
        S = min_separator(adj, x, y, 3)
        if not nx.has_path(g, x, y):
            assert S == []
            continue
        k = len(nx.minimum_node_cut(g, x, y))
        if k > 3:
            assert S is None
        else:
            assert S is not None and len(S) == k
            h = g.copy()
            h.remove_nodes_from(S)
            assert not nx.has_path(h, x, y)


def test_two_matching_against_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(300):
        m = np.triu(rng.integers(0, 2, (9, 9)), 1)
        pc = materialize(gen_explicit(m + m.T), 9)
        X1, X2 = [1, 2, 3, 4][: rng.integers(1, 5)], [5, 6, 7, 8, 9][: rng.integers(1, 6)]
        res = two_matching(pc, X1, X2, RED)
        edges = [(a, b) for a in X1 for b in X2 if pc.color(a, b) == RED]
        exists = any(e[0] != f[0] and e[1] != f[1] for e, f in itertools.combinations(edges, 2))
        assert (res is not None) == exists
        if res:
            (a1, b1), (a2, b2) = res
            assert a1 != a2 and b1 != b2 and {(a1, b1), (a2, b2)} <= set(edges)


def test_connector_is_maximal_and_routes():
    pc = materialize(gen_random(11), 120)
    conn = find_alpha_connector(pc, range(1, 121), seed=0)
    check_connector(pc, conn)
    assert 0 < conn.alpha <= 1
    xs = list(conn.X)
    w = connector_path(pc, conn, xs[0], xs[-1])
    assert w.vertices[0] == xs[0] and w.vertices[-1] == xs[-1]
    assert _edges_ok(pc.spec, w.vertices, conn.color)


def test_connector_round_trip():
    pc = materialize(gen_random(2), 40)
    conn = find_alpha_connector(pc, range(1, 41))
    again = type(conn).from_dict(json.loads(json.dumps(conn.to_dict())))
    assert again == conn


# -- the upper-density assembly ------------------------------------------------

def test_upper_assembly_on_eg89_stays_below_ceiling():
    # [PAPER] no monochromatic path of that coloring has upper density above 8/9
    asm = assemble_34_path(gen_eg_upper(), 2048)
    assert asm.profile.record <= Fraction(8, 9) + Fraction(1, 100)
    assert asm.profile.record >= Fraction(7, 10)
    assert _edges_ok(gen_eg_upper(), asm.path.vertices, asm.trace.color)
    assert asm.trace.case == "2"
    # the stitched path is at least as good as any one forest
    assert asm.trace.facts["record"] >= asm.trace.facts["best_single_forest"]


@pytest.mark.parametrize("seed", [0, 5])
def test_upper_assembly_on_random(seed):
    spec = gen_random(seed)
    asm = assemble_34_path(spec, 2048, seed=seed)
    assert asm.profile.record >= Fraction(7, 10)
    assert _edges_ok(spec, asm.path.vertices, asm.trace.color)
    assert set(asm.trace.stitched) <= set(asm.trace.path)


def test_upper_assembly_case1_on_split_coloring():
    # red inside parity classes, blue across: red is disconnected and blue spans
    n = 80
    m = np.array([[RED if (i - j) % 2 == 0 else BLUE for j in range(n)] for i in range(n)])
    spec = gen_explicit(m)
    # a low threshold makes every vertex red, so two vertices of opposite parity are cut apart by nothing
    asm = assemble_34_path(spec, n, eps_seq=[Fraction(3, 4)] * 64, threshold=Fraction(1, 3))
    assert asm.trace.case == "1"
    assert asm.trace.color == BLUE
    assert len(asm.path) == n
    cut = asm.trace.facts["case1"]["cut"]
    assert cut["S"] == [] and cut["color"] == RED


def test_find_cut_none_on_complete_color():
    table = full_table(materialize(gen_explicit(np.zeros((30, 30), int)), 30))
    vc = vertex_colors(table)
    assert find_cut(table, vc, (1, 30))["cut"] is None


def test_upper_assembly_parameter_errors():
    with pytest.raises(ParameterError):
        assemble_34_path(gen_affine(2), 2048)
    with pytest.raises(ParameterError):
        assemble_34_path(gen_random(0), 300)


def test_trace_round_trip_and_tamper():
    spec = gen_random(4)
    asm = assemble_34_path(spec, 1200)
    data = json.loads(asm.trace.to_json())
    again = recheck_trace(spec, data)
    assert again.path == asm.trace.path
    bad = dict(data)
    bad["stitched"] = data["stitched"][:-1] + [data["stitched"][0]]
    with pytest.raises(ContractError):
        recheck_trace(spec, bad)
    other = dict(data)
    other["color"] = 1 - data["color"]
    with pytest.raises(ContractError):
        recheck_trace(spec, other)


# -- the strong-density assembly -----------------------------------------------

def test_strong_assembly_on_eg23_stays_below_ceiling():
    # [PAPER] every monochromatic path there has strong upper density at most 2/3
    spec = gen_eg_strong()
    asm = assemble_23_sud_path(spec, 2187)
    assert asm.profile.record <= Fraction(2, 3) + Fraction(1, 100)
    assert _edges_ok(spec, asm.path.vertices, asm.trace.color)


@pytest.mark.parametrize("seed", [1, 8])
def test_strong_assembly_on_random(seed):
    spec = gen_random(seed)
    asm = assemble_23_sud_path(spec, 3000, seed=seed)
    assert asm.profile.record >= Fraction(3, 5)
    assert _edges_ok(spec, asm.path.vertices, asm.trace.color)
    tags = asm.trace.pair_tags
    colors = [a["color"] for a in asm.trace.artifacts]
    for t in tags:
        i, j = t["pair"]
        assert (t["tag"] == "2") == (colors[i - 1] != colors[j - 1])
    check_trace(materialize(spec, 3000), AssemblyTrace.from_dict(json.loads(asm.trace.to_json())))


def test_strong_assembly_artifact_densities():
    asm = assemble_23_sud_path(gen_random(2), 3000)
    arts = asm.trace.artifacts
    for a in arts[1:]:
        lo, hi = a["interval"]
        assert a["local_density"] == Fraction(hi - lo + 1, hi)
    assert arts[0]["local_density"] == 1


def test_strong_assembly_needs_two_intervals():
    with pytest.raises(ParameterError):
        assemble_23_sud_path(gen_random(0), 20)
    with pytest.raises(ParameterError):
        assemble_23_sud_path(gen_affine(2), 500)
