"""Finite checks of the classical bounds, exhaustive when small and sampled under a time budget.

A run is exhaustive up to a per-theorem size limit.  Past the limit, or
when the nominal cost of the exhaustive run exceeds the given budget, it
draws a fixed number of seeded random instances instead and says so in the
report.  Instance counts come from nominal per-instance costs, never from
the clock, so reports stay reproducible.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from rdl.colorings import PrefixColoring, gen_explicit
from rdl.connected import trichotomy
from rdl.engine.bipartite import bipartite_3path_partition, bipartite_host, check_partition
from rdl.engine.components import largest_mono_component
from rdl.engine.forests import glp_path_forests
from rdl.engine.lasvergnas import degree_condition, exhaustive_check, las_vergnas_path
from rdl.engine.oracles import gg_oracle, gyarfas_oracle, raynaud_oracle
from rdl.engine.paths import DIRECTED_BUDGET, UNDIRECTED_BUDGET, longest_path_on
from rdl.engine.witness import validate_forest
from rdl.errors import BudgetError, ParameterError, RDLError

THEOREMS = ("gg", "raynaud", "gyarfas", "glp", "bipartite3", "lasvergnas", "trichotomy")

# largest size run exhaustively
EXHAUSTIVE_LIMIT = {"gg": 7, "raynaud": 5, "gyarfas": 6, "glp": 5, "bipartite3": 4, "lasvergnas": 4,
                    "trichotomy": 5}
# largest size a sampled run accepts
SAMPLE_LIMIT = {"gg": UNDIRECTED_BUDGET, "raynaud": DIRECTED_BUDGET, "gyarfas": 400, "glp": 400,
                "bipartite3": 40, "lasvergnas": 10, "trichotomy": 400}
# nominal seconds per instance
EXHAUSTIVE_COST = {"gg": 2e-6, "raynaud": 1e-6, "gyarfas": 1e-6, "glp": 1e-4, "bipartite3": 5e-4,
                   "lasvergnas": 2e-5, "trichotomy": 2e-4}
SAMPLE_COST = {"gg": 0.05, "raynaud": 0.05, "gyarfas": 0.002, "glp": 0.01, "bipartite3": 0.01,
               "lasvergnas": 0.01, "trichotomy": 0.005}
MIN_SIZE = {"gg": 2, "raynaud": 2, "gyarfas": 2, "glp": 1, "bipartite3": 1, "lasvergnas": 2, "trichotomy": 1}


def exhaustive_instances(theorem: str, n: int) -> int:
    pairs = n * (n - 1) // 2
    return {"gg": 2 ** max(pairs - 1, 0), "raynaud": 2 ** max(n * (n - 1) - 1, 0), "gyarfas": 3 ** pairs,
            "glp": 2 ** pairs * 2 ** n, "bipartite3": 2 ** (n * n), "lasvergnas": 2 ** (n * n),
            "trichotomy": 3 ** pairs}[theorem]


def plan(theorem: str, n: int, budget=None) -> dict:
    """Decide between an exhaustive and a sampled run; raises BudgetError when neither fits."""
    if theorem not in THEOREMS:
        raise ParameterError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    if n < MIN_SIZE[theorem]:
        raise ParameterError(f"{theorem} needs size at least {MIN_SIZE[theorem]}")
    count = exhaustive_instances(theorem, n)
    cost = count * EXHAUSTIVE_COST[theorem]
    if n <= EXHAUSTIVE_LIMIT[theorem] and (budget is None or cost <= budget):
        return {"mode": "exhaustive", "instances": count}
    if budget is None:
        raise BudgetError(f"{theorem} at size {n} is over the exhaustive limit "
                          f"{EXHAUSTIVE_LIMIT[theorem]}; pass a budget to sample")
    if n > SAMPLE_LIMIT[theorem]:
        raise BudgetError(f"{theorem} samples are limited to size {SAMPLE_LIMIT[theorem]}")
    return {"mode": "sampled", "instances": max(1, int(budget / SAMPLE_COST[theorem]))}


def verify(theorem: str, n: int, budget=None, seed: int = 0) -> dict:
    """Run the check and return a report with "pass", the observed extreme and a witness."""
    p = plan(theorem, n, budget)
    rng = np.random.default_rng(seed)
    out = _RUNNERS[theorem](n, p, rng)
    return {"theorem": theorem, "n": n, "mode": p["mode"], "sampled": p["mode"] == "sampled",
            "instances": p["instances"], "seed": seed} | out


def _random_matrix(rng, n, base, directed=False):
    m = rng.integers(0, base, (n, n))
    if not directed:
        m = np.triu(m, 1)
        m = m + m.T
    np.fill_diagonal(m, 0)
    return m


def _explicit(m, base, directed):
    return gen_explicit(m, base, directed).to_dict()


def _path_run(n, p, rng, directed, oracle, bound_ok, bound):
    if p["mode"] == "exhaustive":
        res = oracle(n)
        best, extremal = res["min_longest"], res["extremal"]
    else:
        best, extremal = None, None
        for _ in range(p["instances"]):
            m = _random_matrix(rng, n, 2, directed)
            pc = PrefixColoring.from_matrix(m, 2, directed)
            val = max(len(longest_path_on(pc, range(1, n + 1), c)) for c in (0, 1))
            if best is None or val < best:
                best, extremal = val, _explicit(m, 2, directed)
    return {"bound": bound, "observed_min": best, "pass": bound_ok(best), "extremal": extremal}


def _gg(n, p, rng):
    b = math.ceil((2 * n + 1) / 3)
    return _path_run(n, p, rng, False, gg_oracle, lambda v: v >= b, b)


def _raynaud(n, p, rng):
    return _path_run(n, p, rng, True, raynaud_oracle, lambda v: 2 * v >= n + 2, Fraction(n + 2, 2))


def _gyarfas(n, p, rng):
    b = math.ceil(n / 2)
    if p["mode"] == "exhaustive":
        res = gyarfas_oracle(n, 3)
        best, extremal = res["min_largest"], res["extremal"]
    else:
        best, extremal = None, None
        for _ in range(p["instances"]):
            m = _random_matrix(rng, n, 3)
            val = len(largest_mono_component(PrefixColoring.from_matrix(m, 3))[1])
            if best is None or val < best:
                best, extremal = val, _explicit(m, 3, False)
    return {"bound": b, "observed_min": best, "pass": best >= b, "extremal": extremal}


def _instances(n, p, rng, base, exhaustive_codes):
    """Edge matrices of K_n in ``base`` colors: every one, or random ones."""
    if p["mode"] == "exhaustive":
        edges = list(itertools.combinations(range(n), 2))
        for code in exhaustive_codes:
            m = np.zeros((n, n), dtype=np.int64)
            for a, b in edges:
                m[a, b] = m[b, a] = code % base
                code //= base
            yield m
    else:
        for _ in range(p["instances"]):
            yield _random_matrix(rng, n, base)


def _glp(n, p, rng):
    failure, slack = None, None
    pairs = n * (n - 1) // 2
    if p["mode"] == "exhaustive":
        cases = ((m, vc) for m in _instances(n, p, rng, 2, range(2 ** pairs))
                 for vc in itertools.product((0, 1), repeat=n))
    else:
        cases = ((m, tuple(int(x) for x in rng.integers(0, 2, n))) for m in _instances(n, p, rng, 2, ()))
    for m, vc in cases:
        pc = PrefixColoring.from_matrix(m, vertex_color=np.asarray(vc))
        minor = 0 if vc.count(0) <= vc.count(1) else 1
        r = vc.count(minor)
        try:
            pair = glp_path_forests(pc, minor=minor)
            validate_forest(pc, pair.minor_forest)
            validate_forest(pc, pair.major_forest)
            gap = pair.total - (n + r - 3)
        except RDLError as exc:
            failure = {"matrix": m.tolist(), "vertex_colors": list(vc), "reason": str(exc)}
            break
        slack = gap if slack is None else min(slack, gap)
        if gap < 0:
            failure = {"matrix": m.tolist(), "vertex_colors": list(vc), "reason": "bound"}
            break
    return {"bound": "|F_minor| + |F_major| >= n + |R| - 3", "min_slack": slack, "pass": failure is None,
            "first_failure": failure}


def _bipartite3(m_size, p, rng):
    failure, most = None, 0
    if p["mode"] == "exhaustive":
        mats = (np.array([(c >> i) & 1 for i in range(m_size * m_size)]).reshape(m_size, m_size)
                for c in range(2 ** (m_size * m_size)))
    else:
        mats = (rng.integers(0, 2, (m_size, m_size)) for _ in range(p["instances"]))
    for mat in mats:
        pc, U, V = bipartite_host(mat)
        try:
            part = bipartite_3path_partition(pc, U, V)
            check_partition(pc, U, V, part.paths)
        except RDLError as exc:
            failure = {"matrix": mat.tolist(), "reason": str(exc)}
            break
        most = max(most, len(part.paths))
        if len(part.paths) > 3:
            failure = {"matrix": mat.tolist(), "reason": f"{len(part.paths)} paths"}
            break
    return {"bound": 3, "observed_max_paths": most, "pass": failure is None, "first_failure": failure}


def _lasvergnas(m, p, rng):
    if p["mode"] == "exhaustive":
        res = exhaustive_check(m)
        return {"bound": "Hamiltonian u,v-path for every opposite pair", "condition_holds": res["condition_holds"],
                "pass": res["violations"] == 0, "first_failure": res["first_violation"]}
    holds, failure = 0, None
    for _ in range(p["instances"]):
        a = rng.random((m, m)) < 0.75
        if not degree_condition(a)["holds"]:
            continue
        holds += 1
        for u in range(1, m + 1):
            for v in range(m + 1, 2 * m + 1):
                try:
                    las_vergnas_path(a, u, v)
                except RDLError as exc:
                    failure = {"matrix": a.astype(int).tolist(), "u": u, "v": v, "reason": str(exc)}
                    break
            if failure:
                break
        if failure:
            break
    return {"bound": "Hamiltonian u,v-path for every opposite pair", "condition_holds": holds,
            "pass": failure is None, "first_failure": failure}


def _trichotomy(n, p, rng):
    pairs = n * (n - 1) // 2
    cases, failure = {}, None
    for m in _instances(n, p, rng, 3, range(3 ** pairs)):
        try:
            cert = trichotomy(PrefixColoring.from_matrix(m, 3))
        except RDLError as exc:
            failure = {"matrix": m.tolist(), "reason": str(exc)}
            break
        cases[cert.case] = cases.get(cert.case, 0) + 1
    return {"bound": "validated certificate for every coloring", "cases": dict(sorted(cases.items())),
            "pass": failure is None, "first_failure": failure}


_RUNNERS = {"gg": _gg, "raynaud": _raynaud, "gyarfas": _gyarfas, "glp": _glp, "bipartite3": _bipartite3,
            "lasvergnas": _lasvergnas, "trichotomy": _trichotomy}
