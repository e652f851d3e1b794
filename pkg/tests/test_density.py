import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from rdl.colorings import BLUE, RED, gen_eg_upper, gen_strong_lower, materialize
from rdl.density import (
    DensityProfile, density1_transversal, density_at, exhaustive_strong_density, is_prefix_connected,
    local_density, profile, strong_density_at, strong_density_connected,
)
from rdl.errors import ContractError, ParameterError
from rdl.intervals import IntervalPartition


def test_density_examples():
    assert density_at(range(2, 100, 2), 10) == Fraction(1, 2)
    a = set(range(1, 13)) - {3, 6, 9, 12}
    assert density_at(a, 12) == Fraction(8, 12)
    assert density_at([], 5) == 0
    with pytest.raises(ParameterError):
        density_at([1], 0)


def test_strong_density_examples():
    # a path through the same 8 vertices that leaves [12] after 6 steps
    path = (1, 2, 4, 5, 7, 8, 15, 10, 11)
    assert strong_density_at(path, 12) == Fraction(6, 12)
    assert density_at(path, 12) == Fraction(8, 12)
    assert strong_density_at(tuple(range(1, 50)), 17) == 1
    assert strong_density_at((2, 1, 5), 2) == 1
    assert strong_density_at((2, 1, 5), 1) == 0


def test_local_density():
    assert local_density(range(1, 8)) == 1
    assert local_density({2, 4}) == Fraction(1, 2)
    with pytest.raises(ParameterError):
        local_density([])
    part = IntervalPartition.from_growth({"kind": "factorial"}, 10 ** 6)
    ds = [local_density(part.interval(i)) for i in range(3, len(part) + 1)]
    assert all(a < b for a, b in zip(ds, ds[1:]))
    assert ds[-1] > Fraction(8, 9)


def test_profile_full_set_and_errors():
    prof = profile(range(1, 101), [10, 20, 50, 100])
    assert set(prof.values) == {1}
    assert prof.record_upper() == prof.record_lower() == 1
    with pytest.raises(ParameterError):
        profile([1], [])
    with pytest.raises(ParameterError):
        profile([1], [3, 2])


def _eg89_greedy_path(N, parity):
    # vertices of intervals with the given index parity form the spine; every
    # other-parity vertex is slotted between two smaller spine vertices
    import bisect
    part = IntervalPartition.from_growth({"kind": "power2"}, N, 0)
    idx = part.index_of(list(range(1, N + 1)))
    spine = [v for v in range(1, N + 1) if idx[v - 1] % 2 == parity]
    other = [v for v in range(1, N + 1) if idx[v - 1] % 2 != parity]
    path, p = [spine[0]], 0
    for e in spine[1:]:
        k = bisect.bisect_right(other, e, lo=p)
        if k >= len(other):
            break
        path += [other[k], e]
        p = k + 1
    return path, [int(x) for x in part.ends]


@pytest.mark.parametrize("parity,color", [(0, RED), (1, BLUE)])
def test_profile_eg89_greedy_approaches_8_9(parity, color):
    N = 3 * 4 ** 6
    path, ends = _eg89_greedy_path(N, parity)
    pc = materialize(gen_eg_upper(), 3000)
    head = list(itertools.takewhile(lambda v: v <= 3000, path))
    assert all(pc.color(a, b) == color for a, b in zip(head, head[1:]))
    # checkpoints halfway through each interval of the other parity
    cps = [ends[i] + 2 ** i for i in range(parity, len(ends), 2) if ends[i] + 2 ** i <= N]
    prof = profile(path, cps)
    vals = list(prof.values)
    assert all(a < b for a, b in zip(vals[1:], vals[2:]))
    assert all(v < Fraction(8, 9) for v in vals)
    assert Fraction(8, 9) - prof.record_upper() < Fraction(1, 1000)


def test_profile_strong_lower_red_component_tends_to_zero():
    import math
    sizes = [math.factorial(i) for i in range(1, 10)]
    part = IntervalPartition(tuple(sizes))
    spec = gen_strong_lower({"kind": "explicit", "sizes": sizes})
    assert spec.color(4, 9) == RED and spec.color(1, 2) == BLUE
    # red component through the odd intervals: enumerate A_1, A_3, ... in order
    order = [v for i in range(1, 10, 2) for v in part.interval(i)]
    cps = [int(part.ends[i - 1]) for i in range(2, 10, 2)]  # ends of A_{2i}
    prof = profile(order, cps, kind="strong-lower")
    assert all(a > b for a, b in zip(prof.values, prof.values[1:]))
    assert prof.record < Fraction(1, 8)


def test_profile_record_windows():
    prof = DensityProfile("upper", (1, 2, 3, 4), tuple(map(Fraction, (1, 3, 2, 1))), None, 0)
    assert [prof.record_upper(t) for t in range(4)] == [3, 3, 2, 1]
    assert [prof.record_lower(t) for t in range(4)] == [1, 1, 1, 1]
    assert profile(range(1, 5), [1, 2, 3, 4]).tail_start == 2


def test_profile_serialization():
    prof = profile([1, 3, 4], [2, 4], kind="upper")
    assert prof.to_csv().splitlines() == [
        "checkpoint,value_num,value_den,flagged", "2,1,2,True", "4,3,4,True"]
    assert DensityProfile.from_dict(__import__("json").loads(prof.to_json())).values == prof.values


@settings(max_examples=60, deadline=None)
@given(seq=st.lists(st.integers(1, 60), unique=True, max_size=40), n=st.integers(1, 70))
def test_strong_density_bounds(seq, n):
    s = strong_density_at(seq, n)
    assert s <= density_at(seq, n)
    if n > 1:
        assert strong_density_at(seq, n - 1) * (n - 1) <= s * n  # f nondecreasing
    comp = set(range(1, n + 1)) - set(seq)
    assert density_at(comp, n) == 1 - density_at(seq, n)


def test_strong_profile_matches_pointwise():
    seq = [3, 1, 2, 9, 4, 5, 6, 7, 8, 20]
    cps = list(range(1, 25))
    prof = profile(seq, cps, kind="strong-upper")
    assert list(prof.values) == [strong_density_at(seq, n) for n in cps]


def _adj(g):
    return lambda x, y: g.has_edge(x, y)


def test_connected_complete_and_path():
    n = 8
    k = nx.complete_graph(range(1, n + 1))
    res = strong_density_connected(range(1, n + 1), _adj(k), range(1, n + 1))
    assert all(res.profile.flags) and set(res.profile.values) == {1}
    p = nx.path_graph(range(1, n + 1))
    res = strong_density_connected(range(1, n + 1), _adj(p), range(1, n + 1))
    assert all(res.profile.flags)
    for cp, order in res.orderings.items():
        assert sorted(order) == list(range(1, cp + 1))
        assert is_prefix_connected(order, _adj(p))


def test_connected_star():
    n = 7
    star = nx.star_graph([n] + list(range(1, n)))
    res = strong_density_connected(range(1, n + 1), _adj(star), range(1, n + 1))
    # a single vertex is connected; 2..n-1 induce edgeless sets
    assert res.profile.flags == (True,) + (False,) * (n - 2) + (True,)
    assert is_prefix_connected(res.orderings[n], _adj(star))


def test_connected_rejects_disconnected():
    g = nx.Graph([(1, 2), (3, 4)])
    with pytest.raises(ContractError):
        strong_density_connected([1, 2, 3, 4], _adj(g), [4])


def test_connected_matches_exhaustive_on_small_graphs():
    # flagged records never exceed the exhaustive sup over orderings
    for seed in range(6):
        g = nx.gnp_random_graph(8, 0.45, seed=seed)
        g = nx.relabel_nodes(g, {i: 2 * i + 1 for i in g})
        if not nx.is_connected(g):
            continue
        cps = list(range(1, 17))
        res = strong_density_connected(list(g), _adj(g), cps, tail_start=0)
        exact = exhaustive_strong_density(list(g), _adj(g), 16)
        assert res.profile.record_upper() <= exact


def _diagonal_family(N):
    cols = {}
    k, d = 1, 1
    while k <= N:
        for c in range(d):
            if k > N:
                break
            cols.setdefault(c, []).append(k)
            k += 1
        d += 1
    return [cols[c] for c in sorted(cols)]


def test_density1_transversal_diagonal():
    N = 10 ** 4
    fam = _diagonal_family(N)
    eps = [Fraction(1, 2 ** i) for i in range(1, len(fam) + 1)]
    res = density1_transversal(fam, eps, N)
    j = res["active_index"]
    assert j >= 3
    assert res["density"] >= 1 - eps[j - 1]
    members = set(res["members"])
    for i, t in enumerate(res["thresholds"]):
        if t is not None:
            assert all(a <= t for a in members & set(fam[i]))
    # thresholds are minimal: the union dips to eps only from n_i onward
    for i, t in enumerate(res["thresholds"][:j]):
        union = set().union(*fam[: i + 1])
        assert all(density_at(union, m) < eps[i] for m in range(t, N + 1, 97))
        if t > 1:
            assert density_at(union, t - 1) >= eps[i]


def test_density1_transversal_rejections():
    with pytest.raises(ContractError):
        density1_transversal([range(1, 101)], [Fraction(1, 2)], 100)
    with pytest.raises(ContractError):
        density1_transversal([range(1, 50)], [Fraction(1, 2)], 100)
