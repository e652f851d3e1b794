"""The acceptance criteria, each at its default configuration and tolerance."""
import json

import pytest

from rdl.experiments import DEFAULTS, run_criterion


def _run(cid, results):
    rep = run_criterion(cid)
    results[cid] = rep
    print(f"criterion {cid} {rep['status']}")
    return rep


def _passes(cid, results):
    rep = _run(cid, results)
    assert rep["status"] == "PASS", json.dumps(rep["details"], default=str)[:2000]
    return rep


def test_criterion_01_path_oracle(acceptance_results):
    rep = _passes(1, acceptance_results)
    assert [r["min_longest"] for r in rep["details"]["rows"]] == [-(-(2 * n + 1) // 3) for n in (4, 5, 6, 7)]


# The stated closed form floor(n/2)+1 disagrees with the exhaustive minimum at odd n
# (3 at n = 3, 4 at n = 5), so this criterion reports FAIL; the bound itself holds below.
@pytest.mark.xfail(strict=True, reason="closed form disagrees with the exhaustive minimum at odd n")
def test_criterion_02_consistent_path_oracle(acceptance_results):
    _passes(2, acceptance_results)


def test_criterion_02_bound_holds(acceptance_results):
    rep = acceptance_results.get(2) or run_criterion(2)
    rows = rep["details"]["rows"]
    assert all(r["at_least_half_plus_one"] and r["within_time"] for r in rows)
    assert {r["n"]: r["min_longest"] for r in rows} == {3: 3, 4: 3, 5: 4}
    assert [r["equal"] for r in rows] == [False, True, False]


def test_criterion_03_component_oracle(acceptance_results):
    rep = _passes(3, acceptance_results)
    assert rep["details"]["affine"]["largest"] == DEFAULTS[3]["affine_n"] // 2


def test_criterion_04_forest_pairs(acceptance_results):
    _passes(4, acceptance_results)


def test_criterion_05_dense_forests(acceptance_results):
    _passes(5, acceptance_results)


def test_criterion_06_bipartite_partitions(acceptance_results):
    _passes(6, acceptance_results)


def test_criterion_07_hamiltonian_paths(acceptance_results):
    _passes(7, acceptance_results)


def test_criterion_08_three_color_structure(acceptance_results):
    _passes(8, acceptance_results)


@pytest.mark.slow
def test_criterion_09_eight_ninths(acceptance_results):
    _passes(9, acceptance_results)


def test_criterion_10_two_thirds(acceptance_results):
    _passes(10, acceptance_results)


def test_criterion_11_directed_ceiling(acceptance_results):
    _passes(11, acceptance_results)


@pytest.mark.slow
def test_criterion_12_assembly_floors(acceptance_results):
    _passes(12, acceptance_results)


@pytest.mark.slow
def test_criterion_13_repeatable_reports(acceptance_results):
    rep = _passes(13, acceptance_results)
    assert all(r["identical"] for r in rep["details"]["rows"])

