"""rdl command line: generate, analyze, verify, experiment, recheck.

Exit codes: 0 success or bound holds, 1 bound violated or a run failed to
certify, 2 usage error.  Every JSON output starts with a header carrying the
tool version, the hash of the full command config and the seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction

from rdl import __version__
from rdl.colorings import SCHEMES, ColoringSpec, materialize
from rdl.errors import BudgetError, ParameterError, RDLError

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2

PRESETS = {
    "all-red": {"scheme": "explicit", "params": {"constant": 0}, "directed": False, "num_colors": 2},
    "all-blue": {"scheme": "explicit", "params": {"constant": 1}, "directed": False, "num_colors": 2},
    "eg-strong-2-3": {"scheme": "eg-strong-2-3", "params": {}, "directed": False, "num_colors": 2},
    "eg-upper-8-9": {"scheme": "eg-upper-8-9", "params": {}, "directed": False, "num_colors": 2},
}
TARGETS = ("path", "sud-path", "component", "directed-path")
EXPERIMENTS = ("acceptance-all", "eg89-ceiling", "conjecture-89")


class UsageError(Exception):
    pass


# -- argument helpers -------------------------------------------------------


def parse_budget(text) -> float:
    """Seconds from '90', '90s', '2m' or '1h'."""
    if text is None:
        return None
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([smh]?)\s*", str(text))
    if not m:
        raise UsageError(f"cannot read budget {text!r}; use e.g. 60s, 2m, 1h")
    return float(m.group(1)) * {"": 1, "s": 1, "m": 60, "h": 3600}[m.group(2)]


def parse_growth(text) -> dict:
    """A growth descriptor from JSON or a shorthand such as power2, const:3, poly:2, geometric:1:2, explicit:1,2,4."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind in ("power2", "factorial"):
            return {"kind": kind}
        if kind == "const":
            return {"kind": "const", "value": int(args[0])}
        if kind == "poly":
            return {"kind": "poly", "coef": 1, "power": int(args[0]) if args else 1}
        if kind == "geometric":
            return {"kind": "geometric", "first": int(args[0]), "ratio": int(args[1])}
        if kind == "explicit":
            return {"kind": "explicit", "sizes": [int(x) for x in args[0].split(",")]}
    except (IndexError, ValueError):
        pass
    raise UsageError(f"cannot read growth {text!r}")


def parse_fracs(text):
    if text is None:
        return None
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot read rationals from {text!r}")


def parse_ints(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot read integers from {text!r}")


def add_spec_args(p):
    g = p.add_argument_group("coloring")
    g.add_argument("--spec", help="preset name (" + ", ".join(PRESETS) + "), a JSON file or inline JSON")
    g.add_argument("--scheme", choices=SCHEMES)
    g.add_argument("--k", type=int, help="residue classes (directed-residue-k)")
    g.add_argument("--q", type=int, help="affine plane order")
    g.add_argument("--growth", help="interval growth, e.g. power2 or const:3")
    g.add_argument("--colors", type=int, help="number of colors (seeded-random)")
    g.add_argument("--directed", action="store_true", help="directed host (seeded-random)")
    g.add_argument("--constant", type=int, help="constant color (explicit)")
    g.add_argument("--spec-seed", type=int, default=0, help="seed of a seeded-random coloring")


def spec_from_args(args) -> ColoringSpec:
    from rdl import colorings as C
    if args.spec and args.scheme:
        raise UsageError("give either --spec or --scheme, not both")
    if args.spec:
        text = args.spec
        if text in PRESETS:
            return ColoringSpec.from_dict(PRESETS[text])
        if os.path.exists(text):
            with open(text) as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            raise UsageError(f"--spec is neither a preset, a file nor JSON: {args.spec!r}")
        return ColoringSpec.from_dict(data.get("spec", data))
    s = args.scheme
    if s is None:
        raise UsageError("a coloring is required: --spec or --scheme")
    need = {"directed-residue-k": "k", "affine": "q"}
    if s in need and getattr(args, need[s]) is None:
        raise UsageError(f"--scheme {s} needs --{need[s]}")
    if s in ("directed-growth", "strong-lower", "affine-lower-3", "bounded-independence") and not args.growth:
        raise UsageError(f"--scheme {s} needs --growth")
    if s == "directed-residue-k":
        return C.gen_directed_residue(args.k)
    if s == "affine":
        return C.gen_affine(args.q)
    if s == "directed-growth":
        return C.gen_directed_growth(parse_growth(args.growth))
    if s == "strong-lower":
        return C.gen_strong_lower(parse_growth(args.growth))
    if s == "affine-lower-3":
        return C.gen_affine_lower3(parse_growth(args.growth))
    if s == "bounded-independence":
        return C.gen_bounded_independence(parse_growth(args.growth))
    if s == "eg-strong-2-3":
        return C.gen_eg_strong()
    if s == "eg-upper-8-9":
        return C.gen_eg_upper()
    if s == "explicit":
        if args.constant is None:
            raise UsageError("--scheme explicit needs --constant (or pass a matrix with --spec)")
        return C.gen_constant(args.constant, args.colors or 2, args.directed)
    return C.gen_random(args.spec_seed, args.colors or 2, args.directed)


def emit(text: str, path=None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def profile_csv(prof) -> str:
    """Profile rows with the rational as num/den plus a float convenience column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["checkpoint", "value_num", "value_den", "value_float", "flagged"])
    flags = prof.flags or (True,) * len(prof.values)
    for n, v, f in zip(prof.checkpoints, prof.values, flags):
        w.writerow([n, v.numerator, v.denominator, f"{float(v):.6f}", str(bool(f)).lower()])
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    from rdl.experiments import canonical, header
    spec = spec_from_args(args)
    config = {"command": "generate", "spec": spec.to_dict(), "materialize": args.materialize}
    doc = {"header": header(config, args.seed), "spec": spec.to_dict()}
    if args.materialize:
        pc = materialize(spec, args.materialize)
        doc["matrix"] = pc.matrix[1:, 1:].tolist()
    emit(canonical(doc), args.out)
    return EXIT_OK


def _analysis(spec, N, target, args, cps):
    """(witness dict, profile, trace dict or None, method)."""
    from rdl.assembly import assemble_23_sud_path, assemble_34_path
    from rdl.connected import sud_tree_2col, sud_tree_3col
    from rdl.density import profile
    from rdl.engine import paths as P
    eps = parse_fracs(args.eps)
    method = args.method
    if target in ("path", "sud-path") and spec.directed:
        raise UsageError(f"target {target} needs an undirected coloring")
    if target == "directed-path" and not spec.directed:
        raise UsageError("target directed-path needs a directed coloring")
    if target == "component":
        if spec.directed or spec.num_colors not in (2, 3):
            raise UsageError("target component needs an undirected 2- or 3-coloring")
        res = (sud_tree_2col if spec.num_colors == 2 else sud_tree_3col)(spec, N, cps)
        return {"vertices": list(res.vertices), "color": res.color}, res.profile, res.trace, "component"
    if target == "sud-path":
        if spec.num_colors != 2:
            raise UsageError("target sud-path needs a 2-coloring")
        asm = assemble_23_sud_path(spec, N, eps_seq=eps, seed=args.seed)
        return asm.path.to_dict(), profile(asm.path.vertices, cps, "strong-upper"), asm.trace.to_dict(), "assembly"
    pc = materialize(spec, N)
    colors = range(spec.num_colors)
    if target == "directed-path":
        if method == "auto":
            method = "exact" if N <= P.DIRECTED_BUDGET else "increasing"
        if method == "exact":
            ws = [P.longest_oriented_path(pc, c, args.pattern) for c in colors]
        elif method == "increasing":
            if args.pattern != "consistent":
                raise UsageError("only consistent paths are searched beyond the exact size limit")
            ws = [P.longest_increasing_path(pc, c) for c in colors]
        else:
            raise UsageError(f"method {method} does not apply to directed paths")
    else:
        auto = method == "auto"
        if auto:
            method = "exact" if N <= 20 else ("assembly" if spec.num_colors == 2 else "heuristic")
        if method == "assembly":
            if spec.num_colors != 2:
                raise UsageError("the path assembly needs a 2-coloring")
            try:
                asm = assemble_34_path(spec, N, eps_seq=eps, seed=args.seed)
            except ParameterError:
                if not auto:
                    raise
                method = "heuristic"   # prefix too short for the schedule
            else:
                return asm.path.to_dict(), profile(asm.path.vertices, cps, "upper"), asm.trace.to_dict(), method
        if method == "exact":
            ws = [P.longest_mono_path(pc, c) for c in colors]
        elif method == "heuristic":
            ws = [P.heuristic_long_path(pc, c) for c in colors]
        else:
            raise UsageError(f"method {method} does not apply to undirected paths")
    scored = [(profile(w.vertices, cps, "upper").record, len(w), -w.color, w) for w in ws if len(w)]
    best = max(scored, key=lambda s: s[:3])[3]
    return best.to_dict(), profile(best.vertices, cps, "upper"), None, method


def cmd_analyze(args) -> int:
    from rdl.connected import default_checkpoints
    from rdl.experiments import canonical, header
    spec = spec_from_args(args)
    N = args.N
    if N < 1:
        raise UsageError("--N must be positive")
    cps = parse_ints(args.checkpoints) or default_checkpoints(spec, N)
    if cps[-1] > N:
        raise UsageError("checkpoints must not exceed N")
    witness, prof, trace, method = _analysis(spec, N, args.target, args, cps)
    if args.window is not None:
        if not 1 <= args.window <= len(cps):
            raise UsageError(f"--window must lie in 1..{len(cps)} (the number of checkpoints)")
        prof = prof.with_window(len(cps) - args.window)
    config = {"command": "analyze", "spec": spec.to_dict(), "N": N, "target": args.target, "method": args.method,
              "pattern": args.pattern, "checkpoints": cps, "eps": args.eps, "window": args.window}
    rec = prof.record
    doc = {"header": header(config, args.seed), "config": config, "spec": spec.to_dict(), "target": args.target,
           "method": method, "witness": witness, "profile": prof.to_dict(), "trace": trace,
           "record": None if rec is None else [rec.numerator, rec.denominator],
           "record_float": None if rec is None else round(float(rec), 6)}
    lo, hi = parse_fracs(args.min_record), parse_fracs(args.max_record)
    violated = rec is not None and ((hi and rec > hi[0]) or (lo and rec < lo[0]))
    doc["bound_violated"] = bool(violated)
    text = canonical(doc)
    emit(text, args.out)
    if args.csv:
        emit(profile_csv(prof), args.csv)
    if args.recheck:
        recheck_document(json.loads(text))
    return EXIT_VIOLATED if violated else EXIT_OK


def recheck_document(doc) -> dict:
    """Re-validate an analyze output: witness, trace and profile are recomputed from the spec."""
    from rdl.assembly import recheck_trace
    from rdl.connected import _adjacency
    from rdl.assembly.common import full_table
    from rdl.density import DensityProfile, profile, strong_density_connected
    from rdl.engine.witness import PathWitness, validate_path
    spec = ColoringSpec.from_dict(doc["spec"])
    stored = DensityProfile.from_dict(doc["profile"])
    cps = list(stored.checkpoints)
    N = doc["config"]["N"]
    w = doc["witness"]
    if doc["target"] == "component":
        table = full_table(materialize(spec, N))
        again = strong_density_connected(w["vertices"], _adjacency(table, w["color"]), cps,
                                         stored.tail_start).profile
    else:
        path = PathWitness.from_dict(w)
        validate_path(materialize(spec, max(max(path.vertices, default=1), 1)), path)
        again = profile(path.vertices, cps, stored.kind, stored.tail_start)
    if doc["target"] != "component" and doc.get("trace"):
        recheck_trace(spec, doc["trace"])
    if again.to_dict() != stored.to_dict():
        raise RDLError("recomputed profile differs from the stored one")
    return {"valid": True, "target": doc["target"], "record": again.to_dict()["record"]}


def cmd_recheck(args) -> int:
    from rdl.experiments import canonical, header
    with open(args.file) as fh:
        doc = json.load(fh)
    if "witness" not in doc or "spec" not in doc:
        raise UsageError(f"{args.file} is not an analyze output")
    try:
        res = recheck_document(doc)
    except RDLError as exc:
        res = {"valid": False, "reason": str(exc)}
    config = {"command": "recheck", "file_header": doc.get("header")}
    emit(canonical({"header": header(config, args.seed)} | res), args.out)
    return EXIT_OK if res["valid"] else EXIT_VIOLATED


def cmd_verify(args) -> int:
    from rdl.experiments import canonical, header
    from rdl.verify import verify
    budget = parse_budget(args.budget)
    config = {"command": "verify", "theorem": args.theorem, "n": args.n, "budget": budget}
    rep = verify(args.theorem, args.n, budget, args.seed)
    emit(canonical({"header": header(config, args.seed)} | rep), args.out)
    return EXIT_OK if rep["pass"] else EXIT_VIOLATED


def cmd_experiment(args) -> int:
    from rdl import experiments as E
    budget = parse_budget(args.budget)
    if args.name == "acceptance-all":
        overrides = {}
        if args.config:
            with open(args.config) as fh:
                overrides = json.load(fh)
        only = parse_ints(args.only)
        if only and any(i not in E.CRITERIA for i in only):
            raise UsageError(f"criteria are numbered {min(E.CRITERIA)}..{max(E.CRITERIA)}")
        bundle = E.acceptance_all(only, overrides)
        emit(E.canonical(bundle), args.out)
        for rep in bundle["criteria"]:
            print(f"criterion {rep['id']:>2} {rep['status']}  {rep['name']}", file=sys.stderr)
        return EXIT_OK if bundle["passed"] == bundle["total"] else EXIT_VIOLATED
    if args.name == "eg89-ceiling":
        config = {"command": "experiment", "name": args.name, "depth": args.depth}
        res = E.eg89_ceiling(args.depth)
        ok = abs(Fraction(*res["record"]) - E.EIGHT_NINTHS) <= Fraction(1, 50)
        emit(E.canonical({"header": E.header(config, args.seed), "status": "PASS" if ok else "FAIL"} | res), args.out)
        return EXIT_OK if ok else EXIT_VIOLATED
    if budget is None:
        raise UsageError("conjecture-89 needs --budget")
    config = {"command": "experiment", "name": args.name, "budget": budget, "N": args.N, "seed": args.seed}
    res = E.conjecture_89(budget, args.N, args.seed)
    emit(E.canonical({"header": E.header(config, args.seed)} | res), args.out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    common.add_argument("--threads", type=int, help="worker threads (default: RDL_THREADS, else all cores)")
    common.add_argument("--budget", help="wall-clock budget such as 60s or 2m; oversize runs are sampled")
    common.add_argument("--out", help="write the JSON output here instead of stdout")

    parser = argparse.ArgumentParser(prog="rdl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rdl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a coloring spec")
    add_spec_args(g)
    g.add_argument("--materialize", type=int, metavar="N", help="also write the color matrix of [N]")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", parents=[common], help="find a dense monochromatic structure on [N]")
    add_spec_args(a)
    a.add_argument("--target", choices=TARGETS, required=True)
    a.add_argument("--N", type=int, default=1024)
    a.add_argument("--method", default="auto", choices=("auto", "exact", "heuristic", "assembly", "increasing"))
    a.add_argument("--pattern", default="consistent", help="orientation for directed-path targets")
    a.add_argument("--checkpoints", help="comma-separated checkpoints (default: interval ends or powers of 2, and N)")
    a.add_argument("--window", type=int, help="trailing checkpoints counted in the record (default: half)")
    a.add_argument("--eps", help="comma-separated eps schedule for the assemblies")
    a.add_argument("--max-record", help="exit 1 when the record exceeds this rational")
    a.add_argument("--min-record", help="exit 1 when the record is below this rational")
    a.add_argument("--csv", help="also write the profile as CSV")
    a.add_argument("--recheck", action="store_true", help="re-validate the output before exiting")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", parents=[common], help="check a classical bound on all small instances")
    from rdl.verify import THEOREMS
    v.add_argument("theorem", choices=THEOREMS)
    v.add_argument("--n", type=int, required=True, help="size (vertices, or side length for bipartite checks)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    e.add_argument("name", choices=EXPERIMENTS)
    e.add_argument("--only", help="comma-separated criterion ids (acceptance-all)")
    e.add_argument("--config", help="JSON file of per-criterion overrides (acceptance-all)")
    e.add_argument("--depth", type=int, default=14, help="prefix [2^depth - 1] (eg89-ceiling)")
    e.add_argument("--N", type=int, default=4096, help="prefix size (conjecture-89)")
    e.set_defaults(func=cmd_experiment)

    r = sub.add_parser("recheck", parents=[common], help="re-validate an analyze output file")
    r.add_argument("file")
    r.set_defaults(func=cmd_recheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from rdl.engine.oracles import set_threads
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")
    set_threads(args.threads)
    try:
        return args.func(args)
    except (UsageError, ParameterError, BudgetError, OSError, json.JSONDecodeError) as exc:
        print(f"rdl {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RDLError as exc:
        print(f"rdl {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATED


if __name__ == "__main__":
    sys.exit(main())
