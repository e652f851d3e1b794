"""Named experiments and the acceptance checks, as plain dict reports.

Every report is deterministic for a given config: wall-clock times only
enter through pass/fail comparisons against generous limits and are never
written into the report itself.
"""
from __future__ import annotations

import copy
import hashlib
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np

from rdl import __version__
from rdl.assembly import assemble_23_sud_path, assemble_34_path
from rdl.assembly.common import _jsonable
from rdl.colorings import (BLUE, GREEN, RED, PrefixColoring, gen_affine, gen_directed_growth,
                           gen_directed_residue, gen_eg_strong, gen_eg_upper, gen_random, gen_strong_lower,
                           gen_bounded_independence, materialize)
from rdl.connected import trichotomy
from rdl.density import profile
from rdl.engine.bipartite import bipartite_3path_partition, bipartite_host, check_partition
from rdl.engine.components import largest_mono_component
from rdl.engine.forests import glp_path_forests, mpf_dense_forest
from rdl.engine.lasvergnas import exhaustive_check
from rdl.engine.oracles import gg_oracle, gyarfas_oracle, raynaud_oracle
from rdl.engine.paths import heuristic_long_path, longest_increasing_table, longest_mono_path
from rdl.engine.witness import PathWitness, validate_forest, validate_path
from rdl.errors import ParameterError, RDLError

EIGHT_NINTHS = Fraction(8, 9)
TWO_THIRDS = Fraction(2, 3)


# -- plumbing ---------------------------------------------------------------


def canonical(obj, indent=2) -> str:
    """Sorted-key JSON with rationals as [num, den]; the byte form every report is written in."""
    return json.dumps(obj, sort_keys=True, indent=indent, default=_jsonable) + "\n"


def config_hash(config) -> str:
    return hashlib.sha256(canonical(config, indent=None).encode()).hexdigest()


def header(config, seed=0) -> dict:
    return {"tool_version": __version__, "config_hash": config_hash(config), "seed": int(seed)}


def _frac(x) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def _report(cid, name, ok, details) -> dict:
    return {"id": cid, "name": name, "status": "PASS" if ok else "FAIL", "details": details}


def _edge_matrix(code, base, n, edges):
    m = np.zeros((n, n), dtype=np.int64)
    for a, b in edges:
        m[a, b] = m[b, a] = code % base
        code //= base
    return m


def _random_total(rng, n, p_blue):
    m = np.triu(rng.integers(0, 2, (n, n)), 1)
    return PrefixColoring.from_matrix(m + m.T, vertex_color=(rng.random(n) < p_blue).astype(np.int64))


# -- the eight-ninths coloring ----------------------------------------------


def eg89_classes(N: int) -> list:
    """Consecutive classes of sizes 1, 2, 4, ... truncated to [N]."""
    out, k = [], 0
    while (1 << k) <= N:
        out.append(range(1 << k, min((1 << (k + 1)) - 1, N) + 1))
        k += 1
    return out


def eg89_alternating_path(N: int) -> PathWitness:
    """Red path alternating each even class with the first vertices of the next class.

    The blocks read y_0 x_0 y_1 x_1 ... with x_j the even class and y_j the
    following odd class; consecutive blocks meet through red edges.
    """
    classes = eg89_classes(N)
    path = []
    for i in range(0, len(classes), 2):
        xs = classes[i]
        ys = classes[i + 1] if i + 1 < len(classes) else range(0)
        for j, x in enumerate(xs):
            if j < len(ys):
                path.append(ys[j])
            path.append(x)
    return validate_path(materialize(gen_eg_upper(), N), PathWitness(tuple(path), RED))


def eg89_checkpoints(N: int, midpoints: bool = True) -> list:
    """Class ends 2^k - 1 and, optionally, the middles 2^(2n+1) - 1 + 2^(2n) of the odd classes."""
    cps = {(1 << k) - 1 for k in range(1, N.bit_length() + 1) if (1 << k) - 1 <= N}
    if midpoints:
        cps |= {(1 << (2 * n + 1)) - 1 + (1 << (2 * n)) for n in range(N.bit_length())}
    return sorted(c for c in cps if c <= N)


def eg89_ceiling(depth: int) -> dict:
    """Density series of the alternating red path against 8/9 up to N = 2^depth - 1."""
    if not 2 <= depth <= 24:
        raise ParameterError("depth must lie in [2, 24]")
    N = (1 << depth) - 1
    path = eg89_alternating_path(N)
    full = profile(path.vertices, eg89_checkpoints(N), "upper")
    ends = profile(path.vertices, eg89_checkpoints(N, midpoints=False), "upper")
    series = [{"checkpoint": n, "kind": "end" if (n + 1) & n == 0 else "middle", "value": _frac(v),
               "float": round(float(v), 6)} for n, v in zip(full.checkpoints, full.values)]
    return {"N": N, "target": _frac(EIGHT_NINTHS), "series": series,
            "record": _frac(full.record), "record_float": round(float(full.record), 6),
            "record_at_ends": _frac(ends.record), "path_length": len(path)}


# -- criteria ---------------------------------------------------------------


def crit_gg(cfg) -> dict:
    rows, ok = [], True
    for n in cfg["sizes"]:
        t = time.perf_counter()
        res = gg_oracle(n)
        fast = time.perf_counter() - t <= cfg["time_limit"]
        good = res["min_longest"] == math.ceil((2 * n + 1) / 3) and fast
        ok &= good
        rows.append({"n": n, "colorings": res["colorings"], "min_longest": res["min_longest"],
                     "expected": math.ceil((2 * n + 1) / 3), "within_time": fast, "extremal": res["extremal"]})
    return _report(1, "longest monochromatic path oracle", ok, {"rows": rows})


def crit_raynaud(cfg) -> dict:
    rows, ok = [], True
    for n in cfg["sizes"]:
        t = time.perf_counter()
        res = raynaud_oracle(n)
        fast = time.perf_counter() - t <= cfg["time_limit"]
        equal = res["min_longest"] == n // 2 + 1
        ok &= equal and fast
        rows.append({"n": n, "colorings": res["colorings"], "min_longest": res["min_longest"],
                     "stated": n // 2 + 1, "equal": equal, "at_least_half_plus_one": 2 * res["min_longest"] >= n + 2,
                     "within_time": fast, "extremal": res["extremal"]})
    return _report(2, "longest consistent path oracle", ok, {"rows": rows})


def crit_gyarfas(cfg) -> dict:
    rows, ok = [], True
    for n in cfg["sizes"]:
        res = gyarfas_oracle(n, 3)
        good = res["min_largest"] >= math.ceil(n / 2)
        ok &= good
        rows.append({"n": n, "colorings": res["colorings"], "min_largest": res["min_largest"],
                     "bound": math.ceil(n / 2), "extremal": res["extremal"]})
    m = cfg["affine_n"]
    color, comp = largest_mono_component(materialize(gen_affine(2), m))
    tight = len(comp) == m // 2
    return _report(3, "largest monochromatic component oracle", ok and tight,
                   {"rows": rows, "affine": {"n": m, "largest": len(comp), "color": color, "component": comp}})


def crit_glp(cfg) -> dict:
    rng = np.random.default_rng(cfg["seed"])
    failures, tight = [], 0
    for run in range(cfg["count"]):
        n = int(rng.integers(1, cfg["max_n"] + 1))
        pc = _random_total(rng, n, float(rng.uniform(0.2, 0.8)))
        vc = pc.vertex_color[1:]
        minor = 0 if (vc == 0).sum() <= (vc == 1).sum() else 1
        r = int((vc == minor).sum())
        try:
            pair = glp_path_forests(pc, minor=minor, seed=run)
            validate_forest(pc, pair.minor_forest)
            validate_forest(pc, pair.major_forest)
            good = pair.total >= n + r - 3
            tight += pair.total == n + r - 3
        except RDLError as exc:
            good, pair = False, str(exc)
        if not good:
            failures.append({"run": run, "n": n, "r": r, "reason": pair if isinstance(pair, str) else "bound"})
    return _report(4, "two-forest bound on random total colorings", not failures,
                   {"runs": cfg["count"], "failures": failures[:10], "failure_count": len(failures),
                    "tight_runs": tight})


def crit_mpf(cfg) -> dict:
    rng = np.random.default_rng(cfg["seed"])
    eps, k, need = Fraction(*cfg["eps"]), cfg["k"], Fraction(*cfg["ratio"])
    failures, outcomes, worst = [], {}, None
    for run in range(cfg["count"]):
        pc = _random_total(rng, cfg["n"], float(rng.uniform(0.3, 0.8)))
        try:
            res = mpf_dense_forest(pc, eps, k, seed=run)
            validate_forest(pc, res.forest)
            res.trace.check()
            good = res.checkpoint >= k and res.ratio >= need
        except RDLError as exc:
            failures.append({"run": run, "reason": str(exc)})
            continue
        outcomes[res.trace.outcome] = outcomes.get(res.trace.outcome, 0) + 1
        worst = res.ratio if worst is None else min(worst, res.ratio)
        if not good:
            failures.append({"run": run, "reason": f"ratio {res.ratio} at {res.checkpoint}"})
    return _report(5, "dense path forest on random total colorings", not failures,
                   {"runs": cfg["count"], "failures": failures[:10], "failure_count": len(failures),
                    "outcomes": dict(sorted(outcomes.items())), "worst_ratio": worst})


def crit_bipartite(cfg) -> dict:
    m = cfg["exhaustive_m"]
    failures, exhaustive = [], 0
    for code in range(2 ** (m * m)):
        mat = np.array([(code >> i) & 1 for i in range(m * m)]).reshape(m, m)
        exhaustive += 1
        failures += _bipartite_case(mat, code, "exhaustive")
    rng = np.random.default_rng(cfg["seed"])
    sizes = {}
    for run in range(cfg["random_count"]):
        mat = rng.integers(0, 2, (cfg["random_m"], cfg["random_m"]))
        fails = _bipartite_case(mat, run, "random", sizes)
        failures += fails
    return _report(6, "bipartite three-path partition", not failures,
                   {"exhaustive": exhaustive, "random": cfg["random_count"], "failures": failures[:10],
                    "failure_count": len(failures), "path_counts": dict(sorted(sizes.items()))})


def _bipartite_case(mat, tag, kind, sizes=None) -> list:
    pc, U, V = bipartite_host(mat)
    try:
        part = bipartite_3path_partition(pc, U, V, seed=tag if kind == "random" else 0)
        check_partition(pc, U, V, part.paths)
    except RDLError as exc:
        return [{"kind": kind, "case": tag, "reason": str(exc)}]
    if sizes is not None:
        sizes[len(part.paths)] = sizes.get(len(part.paths), 0) + 1
    return [] if len(part.paths) <= 3 else [{"kind": kind, "case": tag, "reason": "more than 3 paths"}]


def crit_lasvergnas(cfg) -> dict:
    res = exhaustive_check(cfg["m"])
    return _report(7, "Hamiltonian paths between opposite sides", res["violations"] == 0, res)


def crit_trichotomy(cfg) -> dict:
    rows, ok = [], True
    t = time.perf_counter()
    for n in cfg["sizes"]:
        edges = list(itertools.combinations(range(n), 2))
        cases, notes, failures = {}, 0, []
        for code in range(3 ** len(edges)):
            pc = PrefixColoring.from_matrix(_edge_matrix(code, 3, n, edges), 3)
            try:
                cert = trichotomy(pc)
            except RDLError as exc:
                failures.append({"code": code, "reason": str(exc)})
                continue
            cases[cert.case] = cases.get(cert.case, 0) + 1
            notes += bool(cert.notes)
        ok &= not failures
        rows.append({"n": n, "colorings": 3 ** len(edges), "cases": dict(sorted(cases.items())),
                     "w_empty": notes, "failures": failures[:10]})
    fast = time.perf_counter() - t <= cfg["time_limit"]
    return _report(8, "three-color structure certificates", ok and fast, {"rows": rows, "within_time": fast})


def crit_eg89(cfg) -> dict:
    depth = cfg["depth"]
    N = (1 << depth) - 1
    series = eg89_ceiling(depth)
    rec = Fraction(*series["record"])
    near = abs(rec - EIGHT_NINTHS) <= Fraction(*cfg["record_tol"])
    cap = EIGHT_NINTHS + Fraction(*cfg["witness_tol"])
    # exact windows: the longest path of either color inside [b], b a class end
    windows = []
    for b in eg89_checkpoints(cfg["exact_max"], midpoints=False):
        pc = materialize(gen_eg_upper(), b)
        best = max((longest_mono_path(pc, c) for c in (RED, BLUE)), key=len)
        windows.append({"n": b, "length": len(best), "color": best.color, "density": _frac(Fraction(len(best), b))})
    tail = windows[len(windows) // 2:]
    window_rec = max(Fraction(*w["density"]) for w in tail)
    # long witnesses on the full prefix
    cps = eg89_checkpoints(N)
    pc = materialize(gen_eg_upper(), N)
    witnesses = []
    for c in (RED, BLUE):
        w = heuristic_long_path(pc, c, budget=cfg["heuristic_budget"])
        witnesses.append({"method": "heuristic", "color": c, "length": len(w),
                          "record": _frac(profile(w.vertices, cps, "upper").record)})
    del pc
    asm = assemble_34_path(gen_eg_upper(), N)
    witnesses.append({"method": "assembly", "color": asm.trace.color, "length": len(asm.path),
                      "record": _frac(profile(asm.path.vertices, cps, "upper").record)})
    worst = max(Fraction(*w["record"]) for w in witnesses)
    ok = near and window_rec <= cap and worst <= cap
    return _report(9, "eight-ninths ceiling", ok,
                   {"N": N, "alternating_record": series["record"], "alternating_record_at_ends": series["record_at_ends"],
                    "windows": windows, "window_record": _frac(window_rec), "witnesses": witnesses,
                    "witness_record": _frac(worst), "cap": _frac(cap)})


def crit_eg23(cfg) -> dict:
    rows, ok = [], True
    for N in cfg["sizes"]:
        asm = assemble_23_sud_path(gen_eg_strong(), N)
        cps = sorted({hi for _, hi in asm.trace.intervals} | {N})
        B = [v for v in range(1, N + 1) if v % 3]
        blue = validate_path(materialize(gen_eg_strong(), N), PathWitness(tuple(B), BLUE))
        brec = profile(blue.vertices, cps, "strong-upper").record
        arec = asm.profile.record
        good = arec <= TWO_THIRDS + Fraction(*cfg["tol_assembly"]) and abs(brec - TWO_THIRDS) <= Fraction(*cfg["tol_blue"])
        ok &= good
        rows.append({"N": N, "case": asm.trace.case, "color": asm.trace.color, "assembly_record": _frac(arec),
                     "in_order_record": _frac(brec), "checkpoints": len(cps)})
    return _report(10, "two-thirds ceiling", ok, {"rows": rows})


def _walk(prev, end):
    """Increasing path ending at ``end`` read back through the predecessor table."""
    out = []
    while end:
        out.append(int(end))
        end = int(prev[end])
    return out[::-1]


def crit_directed(cfg) -> dict:
    N, k = cfg["N"], cfg["k"]
    pc = materialize(gen_directed_residue(k), N)
    cps = sorted({1 << j for j in range(1, N.bit_length()) if (1 << j) <= N} | {N})
    cap = Fraction(1, k) + Fraction(*cfg["tol"])
    residue = []
    for c in (RED, BLUE):
        best, prev = longest_increasing_table(pc, c, N)
        end = int(np.argmax(best[1:])) + 1
        w = validate_path(pc, PathWitness(tuple(_walk(prev, end)), c, "F" * (int(best[end]) - 1)))
        residue.append({"color": c, "length": len(w), "record": _frac(profile(w.vertices, cps, "upper").record)})
    residue_ok = all(Fraction(*r["record"]) <= cap for r in residue)
    # growth h(n) = n: every increasing path ending anywhere in [M]
    M = cfg["growth_N"]
    spec = gen_directed_growth({"kind": "poly", "coef": 1, "power": 1})
    gc = materialize(spec, M)
    kmin, worst, checked = cfg["k_min"], None, 0
    for c in (RED, BLUE, GREEN):
        best, prev = longest_increasing_table(gc, c, M)
        for end in range(1, M + 1):
            if best[end] < kmin:
                continue
            path = _walk(prev, end)
            checked += 1
            for idx in range(kmin, len(path) + 1):
                slack = path[idx - 1] - idx * (idx - 1) // 2
                if worst is None or slack < worst[0]:
                    worst = (slack, c, end, idx)
    growth_ok = worst is None or worst[0] >= 0
    return _report(11, "directed ceilings", residue_ok and growth_ok,
                   {"residue": {"N": N, "k": k, "cap": _frac(cap), "witnesses": residue},
                    "growth": {"N": M, "k_min": kmin, "paths_checked": checked,
                               "min_slack": None if worst is None else
                               {"slack": worst[0], "color": worst[1], "end": worst[2], "k": worst[3]}}})


def crit_floors(cfg) -> dict:
    N = cfg["N"]
    fu, fs = Fraction(*cfg["floor_upper"]), Fraction(*cfg["floor_strong"])
    a2 = assemble_34_path(gen_eg_upper(), N)
    upper, strong = [], []
    for s in range(cfg["seed"], cfg["seed"] + cfg["count"]):
        spec = gen_random(s)
        upper.append(assemble_34_path(spec, N, seed=s).profile.record)
        strong.append(assemble_23_sud_path(spec, N, seed=s).profile.record)
    ok = a2.profile.record >= fu and min(upper) >= fu and min(strong) >= fs
    return _report(12, "assembly floors", ok,
                   {"N": N, "a2_record": _frac(a2.profile.record), "random_specs": cfg["count"],
                    "upper_min": _frac(min(upper)), "strong_min": _frac(min(strong)),
                    "upper_below_floor": sum(r < fu for r in upper), "strong_below_floor": sum(r < fs for r in strong),
                    "upper_records": [_frac(r) for r in upper], "strong_records": [_frac(r) for r in strong]})


def crit_determinism(cfg) -> dict:
    rows, ok = [], True
    for cid in cfg["criteria"]:
        sub = copy.deepcopy(DEFAULTS[cid]) | cfg.get("overrides", {}).get(str(cid), {})
        first = canonical(run_criterion(cid, sub))
        second = canonical(run_criterion(cid, sub))
        same = first == second
        ok &= same
        rows.append({"id": cid, "config_hash": config_hash(sub), "identical": same,
                     "sha256": hashlib.sha256(first.encode()).hexdigest()})
    return _report(13, "repeatable reports", ok, {"rows": rows})


CRITERIA = {
    1: crit_gg, 2: crit_raynaud, 3: crit_gyarfas, 4: crit_glp, 5: crit_mpf, 6: crit_bipartite,
    7: crit_lasvergnas, 8: crit_trichotomy, 9: crit_eg89, 10: crit_eg23, 11: crit_directed,
    12: crit_floors, 13: crit_determinism,
}

DEFAULTS = {
    1: {"sizes": [4, 5, 6, 7], "time_limit": 120},
    2: {"sizes": [3, 4, 5], "time_limit": 300},
    3: {"sizes": [4, 5], "affine_n": 8},
    4: {"count": 10000, "max_n": 60, "seed": 0},
    5: {"count": 1000, "n": 200, "eps": [1, 5], "k": 15, "ratio": [11, 20], "seed": 0},
    6: {"exhaustive_m": 3, "random_m": 6, "random_count": 10000, "seed": 0},
    7: {"m": 4},
    8: {"sizes": [4, 5], "time_limit": 60},
    9: {"depth": 14, "exact_max": 20, "record_tol": [1, 50], "witness_tol": [1, 100], "heuristic_budget": 20000},
    10: {"sizes": [2187, 6561], "tol_assembly": [1, 100], "tol_blue": [1, 50]},
    11: {"N": 10000, "k": 5, "tol": [1, 100], "growth_N": 10000, "k_min": 10},
    12: {"N": 10000, "count": 100, "seed": 0, "floor_upper": [7, 10], "floor_strong": [3, 5]},
    13: {"criteria": [1, 3, 4, 5, 6, 7, 8, 10, 11, 12],
         "overrides": {"4": {"count": 1000}, "6": {"random_count": 1000}, "12": {"count": 3}}},
}


def run_criterion(cid: int, cfg=None) -> dict:
    if cid not in CRITERIA:
        raise ParameterError(f"no criterion {cid}")
    return CRITERIA[cid](copy.deepcopy(DEFAULTS[cid]) if cfg is None else cfg)


def acceptance_all(ids=None, overrides=None) -> dict:
    """Run the selected criteria (default all) and collect their reports under one header."""
    ids = sorted(CRITERIA) if ids is None else sorted(int(i) for i in ids)
    overrides = overrides or {}
    config = {"experiment": "acceptance-all", "criteria": ids,
              "config": {str(i): DEFAULTS[i] | overrides.get(str(i), {}) for i in ids}}
    reports = [run_criterion(i, config["config"][str(i)]) for i in ids]
    return {"header": header(config), "config": config, "criteria": reports,
            "passed": sum(r["status"] == "PASS" for r in reports), "total": len(reports)}


# -- exploratory -----------------------------------------------------------

# nominal seconds per instance, used to turn a wall-clock budget into a fixed instance count
CONJECTURE_COST = 3.0


def adversarial_specs(count: int, seed: int = 0) -> list:
    """Structured 2-colorings first, then seeded random ones."""
    fixed = [gen_eg_upper(), gen_eg_strong(), gen_strong_lower({"kind": "power2"}),
             gen_strong_lower({"kind": "factorial"}), gen_bounded_independence({"kind": "poly", "power": 1})]
    specs = fixed[:count]
    specs += [gen_random(seed + i) for i in range(max(0, count - len(fixed)))]
    return specs


def conjecture_89(budget_seconds: float, N: int = 4096, seed: int = 0) -> dict:
    """Best upper-density record found by the path assembly on adversarial specs (no pass/fail)."""
    count = max(1, int(budget_seconds // CONJECTURE_COST))
    rows = []
    for spec in adversarial_specs(count, seed):
        try:
            asm = assemble_34_path(spec, N, seed=seed)
        except RDLError as exc:
            rows.append({"spec": spec.to_dict(), "error": str(exc)})
            continue
        rows.append({"spec": spec.to_dict(), "case": asm.trace.case, "color": asm.trace.color,
                     "record": _frac(asm.profile.record), "float": round(float(asm.profile.record), 6)})
    recs = [Fraction(*r["record"]) for r in rows if "record" in r]
    return {"N": N, "instances": len(rows), "budget_seconds": budget_seconds,
            "nominal_cost": CONJECTURE_COST, "rows": rows,
            "lowest_record": _frac(min(recs)) if recs else None, "reference": _frac(EIGHT_NINTHS)}
