import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rdl.colorings import (
    BLUE, RED, PrefixColoring, gen_constant, gen_directed_residue, gen_eg_upper, gen_random, materialize,
)
from rdl.density import profile
from rdl.engine.paths import (
    heuristic_long_path, longest_increasing_path, longest_mono_path, longest_oriented_path,
)
from rdl.engine.witness import PathWitness, path_problems, switch_profile, validate_path
from rdl.errors import BudgetError, ContractError, ParameterError


def brute_longest(mat, color, directed=False, word=None):
    """Longest path by trying every ordered vertex sequence (tiny n only)."""
    n = mat.shape[0]
    best = 1
    for size in range(n, 1, -1):
        for seq in itertools.permutations(range(n), size):
            ok = True
            for i, (a, b) in enumerate(zip(seq, seq[1:])):
                if not directed:
                    ok = mat[a, b] == color
                elif word == "consistent":
                    ok = mat[a, b] == color
                elif word == "anti":
                    ok = mat[a, b] == color if i % 2 == 0 else mat[b, a] == color
                    if not ok and i == 0:
                        break
                if not ok:
                    break
            if ok:
                return size
        if best > 1:
            break
    return best


def brute_anti(mat, color):
    n = mat.shape[0]
    best = 1
    for size in range(2, n + 1):
        for seq in itertools.permutations(range(n), size):
            for start in (0, 1):
                if all((mat[a, b] if (i + start) % 2 == 0 else mat[b, a]) == color
                       for i, (a, b) in enumerate(zip(seq, seq[1:]))):
                    best = size
    return best


def test_simple_examples():
    assert len(longest_mono_path(materialize(gen_constant(RED), 5), RED)) == 5
    assert len(longest_mono_path(materialize(gen_constant(RED), 2), RED)) == 2
    d = materialize(gen_constant(RED, directed=True), 5)
    assert len(longest_oriented_path(d, RED, "consistent")) == 5
    with pytest.raises(BudgetError):
        longest_mono_path(materialize(gen_random(1), 25), RED)
    with pytest.raises(ParameterError):
        longest_oriented_path(materialize(gen_random(1), 5), RED)


@pytest.mark.parametrize("seed", range(12))
def test_undirected_dp_matches_brute_force(seed):
    pc = materialize(gen_random(seed), 7)
    m = pc.matrix[1:, 1:]
    for c in (RED, BLUE):
        w = longest_mono_path(pc, c)
        assert not path_problems(pc, w)
        assert len(w) == brute_longest(m, c)


@pytest.mark.parametrize("seed", range(8))
def test_directed_dp_matches_brute_force(seed):
    pc = materialize(gen_random(seed, directed=True), 6)
    m = pc.matrix[1:, 1:]
    for c in (RED, BLUE):
        w = longest_oriented_path(pc, c, "consistent")
        assert set(w.pattern) <= {"F"}
        assert len(w) == brute_longest(m, c, True, "consistent")
        a = longest_oriented_path(pc, c, "anti-directed")
        assert len(a) == brute_anti(m, c)
        assert all(x != y for x, y in zip(a.pattern, a.pattern[1:]))


def test_explicit_word_and_unconstrained():
    pc = materialize(gen_random(5, directed=True), 8)
    w = longest_oriented_path(pc, RED, "FFB")
    assert len(w) <= 4 and w.pattern == "FFB"[: len(w) - 1]
    u = longest_oriented_path(pc, RED, "unconstrained")
    assert len(u) >= len(longest_oriented_path(pc, RED, "consistent"))


def test_residue_prefix_paths():
    # on a finite prefix a consistent red path can descend through all classes
    pc = materialize(gen_directed_residue(3), 12)
    w = longest_oriented_path(pc, RED, "consistent")
    classes = [v % 3 for v in w.vertices]
    # it visits the classes in blocks, never returning to an earlier class
    blocks = [c for i, c in enumerate(classes) if i == 0 or classes[i - 1] != c]
    assert len(blocks) == len(set(blocks))
    inc = longest_increasing_path(materialize(gen_directed_residue(3), 30), RED)
    cls = [v % 3 for v in inc.vertices]
    assert all(a >= b for a, b in zip(cls, cls[1:]))  # classes only descend
    assert 10 <= len(inc) <= 10 + 2


def test_increasing_path_matches_brute_force():
    for seed in range(6):
        pc = materialize(gen_random(seed), 8)
        m = pc.matrix
        for c in (RED, BLUE):
            best = 1
            for size in range(2, 9):
                for seq in itertools.combinations(range(1, 9), size):
                    if all(m[a, b] == c for a, b in zip(seq, seq[1:])):
                        best = max(best, size)
            assert len(longest_increasing_path(pc, c)) == best


def test_heuristic():
    assert len(heuristic_long_path(materialize(gen_constant(RED), 100), RED)) == 100
    pc = materialize(gen_eg_upper(), 127)
    w = heuristic_long_path(pc, BLUE)
    validate_path(pc, w)
    # best checkpoint density of the witness
    best = max(profile(w.vertices, range(1, 128)).values)
    assert best >= 0.85
    for seed in range(5):
        small = materialize(gen_random(seed), 10)
        for c in (RED, BLUE):
            assert len(heuristic_long_path(small, c)) <= len(longest_mono_path(small, c))


def test_witness_validation_and_json():
    pc = PrefixColoring.from_matrix([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    good = PathWitness((1, 2), RED)
    assert validate_path(pc, good) is good
    with pytest.raises(ContractError):
        validate_path(pc, PathWitness((1, 2, 3), RED))
    with pytest.raises(ContractError):
        validate_path(pc, PathWitness((1, 1), RED))
    doc = json.loads(PathWitness((3, 1, 2), BLUE, None).to_json())
    assert doc == {"vertices": [3, 1, 2], "color": 1, "pattern": None}
    assert PathWitness.from_dict(doc).vertices == (3, 1, 2)


def test_switch_profile():
    d = materialize(gen_constant(RED, directed=True), 5)
    cons = PathWitness((1, 2, 3, 4, 5), RED, "FFFF")
    assert switch_profile(d, cons)["all"] == [1, 5]
    anti = PathWitness((1, 2, 3, 4, 5), RED, "FBFB")
    assert switch_profile(d, anti)["all"] == [1, 2, 3, 4, 5]
    assert switch_profile(d, PathWitness((1, 2, 3, 4), RED, "FBF"))["all"] == [1, 2, 3, 4]
    with pytest.raises(ContractError):
        switch_profile(materialize(gen_constant(RED), 3), PathWitness((1, 2), RED))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6), n=st.integers(2, 40))
def test_heuristic_witness_always_valid(seed, n):
    pc = materialize(gen_random(seed, 2, directed=seed % 2 == 1), n)
    w = heuristic_long_path(pc, seed % 2, budget=500)
    assert not path_problems(pc, w)
