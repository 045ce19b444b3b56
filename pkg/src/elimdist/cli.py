"""Command-line front end.

Exit codes: 0 for true or success, 1 for false, 2 for usage, parse and cap
errors. Formula arguments are file paths or ``catalog:NAME``. Reports and
witnesses are JSON with sorted keys; the only nondeterministic fields are
named ``wall_time_s``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog
from .distance import ExactSolver, SizeCapError, Variant, validate_witness
from .elimination import EliminationRepresentation, RepresentationError, depth_with_rep
from .fixtures import random_graph, rng_from, unbreakable_graph
from .formula import FormulaError, Formula, load_formula, pad_to_sigma3, render_formula
from .fpt import NotUnbreakableError, solve_unbreakable
from .graph import Graph, GraphError, format_edgelist, is_unbreakable, load_graph, save_graph, to_mask
from .hardness import InstanceError, SetCoverInstance, hard_formula, reduction_verdicts, setcover_to_graph
from .modelcheck import ArityError, check_mask, specialized_evaluator
from .msol import MsolCapError, emit_msol, eval_msol, render_msol
from .separation import FamilyCapError, SeparatingFamily, build_family, verify_family

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2

_ERRORS = (
    ArityError,
    FamilyCapError,
    FormulaError,
    GraphError,
    InstanceError,
    MsolCapError,
    NotUnbreakableError,
    OSError,
    RepresentationError,
    SizeCapError,
    ValueError,
    KeyError,
)


@dataclass
class RunReport:
    verdict: bool | None
    value: int | None = None
    witness: dict | None = None
    counters: dict = field(default_factory=dict)
    wall_time_s: float = 0.0
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "value": self.value,
            "witness": self.witness,
            "counters": self.counters,
            "wall_time_s": self.wall_time_s,
            **self.meta,
        }


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def strip_timing(obj):
    """Drop every ``wall_time_s`` field, recursively."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "wall_time_s"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# argument helpers


def read_formula(arg: str, free_vars=()) -> Formula:
    if arg.startswith("catalog:"):
        f = catalog.get(arg.split(":", 1)[1])
        if free_vars:
            raise FormulaError("catalog formulas are sentences")
        return f
    return load_formula(arg, free_vars)


def catalog_evaluator(f: Formula):
    name = catalog.lookup(f)
    return specialized_evaluator(name) if name is not None else None


def int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()] if text else []


def name_list(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split()] if text else []


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def witness_payload(variant: Variant, k: int, witness, rep, parts) -> dict:
    def enc_parts(ps):
        return [
            {
                "component": list(pt["component"]),
                "witness": sorted(pt["witness"]),
                "representation": _enc_rep(pt["representation"]),
            }
            for pt in ps
        ]

    return {
        "variant": variant.value,
        "k": k,
        "witness": sorted(witness) if witness is not None else None,
        "representation": _enc_rep(rep) if parts is None else None,
        "parts": enc_parts(parts) if parts is not None else None,
    }


def _enc_rep(rep):
    if rep is None:
        return None
    return rep.to_dict() if isinstance(rep, EliminationRepresentation) else rep


def load_witness(data: dict):
    rep = data.get("representation")
    rep = EliminationRepresentation.from_dict(rep) if rep is not None else None
    parts = data.get("parts")
    if parts is not None:
        parts = [
            {
                "component": pt["component"],
                "witness": frozenset(pt["witness"]),
                "representation": EliminationRepresentation.from_dict(pt["representation"]),
            }
            for pt in parts
        ]
    return frozenset(data["witness"] or ()), rep, parts


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    g = load_graph(args.graph)
    free = name_list(args.free)
    f = read_formula(args.formula, free)
    assignment = int_list(args.assign)
    ok = check_mask(g, g.mask, f, assignment)
    print("true" if ok else "false")
    return EXIT_TRUE if ok else EXIT_FALSE


def run_dist(g: Graph, f: Formula, variant: Variant, k: int | None, method: str, p: int | None,
             verify_unbreakable: bool = False) -> RunReport:
    evaluator = catalog_evaluator(f)
    start = time.perf_counter()
    meta = {"variant": variant.value, "method": method, "k": k, "n": g.n}
    if method == "fpt":
        if k is None:
            raise ValueError("--method fpt needs --k")
        pad_to_sigma3(f)
        res = solve_unbreakable(g, f, k, p, variant, verify_unbreakable, evaluator)
        meta["p"] = 2 ** k if p is None else p
        wit = None
        if res.verdict:
            parts = None
            if res.representation is None:
                parts = [
                    {
                        "component": pt["component"],
                        "witness": pt["witness"],
                        "representation": pt["representation"],
                    }
                    for pt in res.parts
                ]
            wit = witness_payload(variant, k, res.witness, res.representation, parts)
        return RunReport(res.verdict, None, wit, res.counters.to_dict(),
                         time.perf_counter() - start, meta)
    solver = ExactSolver(g, f, evaluator)
    value = None
    if k is None:
        value = solver.value(variant)
        k_eff = value
    else:
        k_eff = k
    res = solver.solve(variant, k_eff)
    wit = None
    if res.verdict:
        wit = witness_payload(variant, k_eff, res.witness, res.representation, res.extra.get("parts"))
    counters = {"sentence_checks": solver.check.calls}
    return RunReport(bool(res.verdict) if k is not None else None, value, wit, counters,
                     time.perf_counter() - start, meta)


def cmd_dist(args) -> int:
    g = load_graph(args.graph)
    f = read_formula(args.formula)
    variant = Variant(args.variant)
    report = run_dist(g, f, variant, args.k, args.method, args.p, args.verify_unbreakable)
    if args.witness and report.witness is not None:
        _write(args.witness, dump(report.witness))
    sys.stdout.write(dump(report.to_dict()))
    if args.k is None:
        return EXIT_TRUE
    return EXIT_TRUE if report.verdict else EXIT_FALSE


def cmd_witness_check(args) -> int:
    g = load_graph(args.graph)
    f = read_formula(args.formula)
    data = json.loads(Path(args.witness).read_text(encoding="utf-8"))
    witness, rep, parts = load_witness(data)
    ok = validate_witness(g, f, data["variant"], int(data["k"]), witness, rep, parts, catalog_evaluator(f))
    print("true" if ok else "false")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_depth_of_set(args) -> int:
    g = load_graph(args.graph)
    X = int_list(args.set)
    d, rep = depth_with_rep(g, to_mask(X))
    sys.stdout.write(dump({"set": sorted(X), "depth": d, "representation": rep.to_dict()}))
    return EXIT_TRUE


def cmd_unbreakable(args) -> int:
    g = load_graph(args.graph)
    ok, sep = is_unbreakable(g, args.p, args.q)
    out = {"unbreakable": ok, "p": args.p, "q": args.q}
    if sep is not None:
        out["separation"] = {"A": sorted(sep.A), "B": sorted(sep.B), "order": sep.order}
    sys.stdout.write(dump(out))
    return EXIT_TRUE if ok else EXIT_FALSE


def random_setcover(rng: np.random.Generator, n: int, m: int, k: int) -> SetCoverInstance:
    sets = [frozenset(int(i) for i in np.flatnonzero(rng.random(n) < 0.5)) for _ in range(m)]
    return SetCoverInstance(n, tuple(sets), k)


def cmd_gen(args) -> int:
    rng = rng_from(args.seed)
    if args.kind == "setcover":
        inst = random_setcover(rng, args.n, args.m, args.k)
        prefix = args.out
        _write(prefix + ".sc", inst.format())
        save_graph(setcover_to_graph(inst), prefix + ".el")
        _write(prefix + ".fol", render_formula(hard_formula()) + "\n")
        print(f"{prefix}.el {prefix}.fol {prefix}.sc")
    elif args.kind == "family":
        fam = build_family(args.n, args.a, args.b)
        _write(args.out, fam.format())
        print(f"{args.out} {len(fam)} sets")
    else:
        if args.unbreakable:
            g = unbreakable_graph(rng, args.n, args.p, args.k)
        else:
            g = random_graph(rng, args.n, args.density)
        save_graph(g, args.out)
        print(args.out)
    return EXIT_TRUE


def cmd_msol(args) -> int:
    f = read_formula(args.formula)
    print(render_msol(emit_msol(f, args.k, args.variant)))
    return EXIT_TRUE


def cmd_family_verify(args) -> int:
    text = Path(args.family).read_text(encoding="utf-8")
    fam = SeparatingFamily.parse(text, args.n, args.a, args.b)
    ok = verify_family(fam)
    print("true" if ok else "false")
    return EXIT_TRUE if ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# seeded suite


def run_suite(seed: int) -> dict:
    """A small seeded end-to-end run; identical seeds give identical reports."""
    rng = rng_from(seed)
    start = time.perf_counter()
    report: dict = {"seed": seed}

    t = time.perf_counter()
    exact = []
    for _ in range(12):
        n = int(rng.integers(3, 8))
        g = random_graph(rng, n, float(rng.choice([0.3, 0.5, 0.7])))
        row = {"graph": format_edgelist(g)}
        for name in catalog.NAMES:
            solver = ExactSolver(g, catalog.get(name), specialized_evaluator(name))
            row[name] = {v.value: solver.value(v) for v in Variant}
        exact.append(row)
    report["exact"] = {"cases": exact, "wall_time_s": time.perf_counter() - t}

    t = time.perf_counter()
    fpt = []
    for _ in range(4):
        n = int(rng.integers(11, 13))
        g = unbreakable_graph(rng, n, 1, 1)
        for name in catalog.SIGMA3_NAMES[:3]:
            f, ev = catalog.get(name), specialized_evaluator(name)
            for v in Variant:
                res = solve_unbreakable(g, f, 1, 1, v, evaluator=ev)
                ref = ExactSolver(g, f, ev).solve(v, 1).verdict
                fpt.append({
                    "graph": format_edgelist(g),
                    "formula": name,
                    "variant": v.value,
                    "verdict": res.verdict,
                    "exact": bool(ref),
                    "witness": sorted(res.witness) if res.witness is not None else None,
                    "counters": res.counters.to_dict(),
                })
    report["fpt"] = {"cases": fpt, "wall_time_s": time.perf_counter() - t}

    t = time.perf_counter()
    ms = []
    for _ in range(6):
        g = random_graph(rng, 4, 0.5)
        for name in ("triangle_free", "all_equal"):
            f = catalog.get(name)
            solver = ExactSolver(g, f)
            for v in Variant:
                for k in range(3):
                    ms.append([name, v.value, k, eval_msol(g, emit_msol(f, k, v)), solver.value(v) <= k])
    report["msol"] = {"cases": ms, "wall_time_s": time.perf_counter() - t}

    t = time.perf_counter()
    fam = {str(n): len(build_family(n, 2, 2)) for n in (64, 128, 256, 512)}
    small = build_family(10, 2, 2)
    report["separation"] = {
        "sizes_2_2": fam,
        "n10_size": len(small),
        "n10_verified": verify_family(small),
        "wall_time_s": time.perf_counter() - t,
    }

    t = time.perf_counter()
    hard = []
    for _ in range(3):
        inst = random_setcover(rng, 2, 2, 1)
        hard.append({"instance": inst.format(), "cover": inst.has_cover(), "verdicts": reduction_verdicts(inst)})
    report["hardness"] = {"cases": hard, "wall_time_s": time.perf_counter() - t}

    report["wall_time_s"] = time.perf_counter() - start
    return report


def cmd_suite(args) -> int:
    text = dump(run_suite(args.seed))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="elimdist", description="Elimination distance to first-order properties.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="model-check a formula on a graph")
    p.add_argument("graph")
    p.add_argument("formula")
    p.add_argument("--free", default="", help="free variable names, comma separated")
    p.add_argument("--assign", default="", help="vertices for the free variables")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dist", help="elimination distance, exact or by branching")
    p.add_argument("graph")
    p.add_argument("formula")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="conn")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--method", choices=["exact", "fpt"], default="exact")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--witness", default=None, help="write the certificate here")
    p.add_argument("--verify-unbreakable", action="store_true")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("witness-check", help="re-validate a certificate written by dist")
    p.add_argument("graph")
    p.add_argument("formula")
    p.add_argument("witness")
    p.set_defaults(func=cmd_witness_check)

    p = sub.add_parser("depth-of-set", help="depth of an elimination set")
    p.add_argument("graph")
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_depth_of_set)

    p = sub.add_parser("unbreakable", help="test (p, q)-unbreakability")
    p.add_argument("graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_unbreakable)

    p = sub.add_parser("gen", help="generate fixtures")
    p.add_argument("kind", choices=["setcover", "family", "fixture"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--unbreakable", action="store_true")
    p.add_argument("--out", required=True, help="output path (prefix for setcover)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("msol", help="print the MSOL sentence for ed <= k")
    p.add_argument("formula")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="conn")
    p.set_defaults(func=cmd_msol)

    p = sub.add_parser("family-verify", help="exhaustively check a separating family file")
    p.add_argument("family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_family_verify)

    p = sub.add_parser("suite", help="seeded end-to-end run with a JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


__all__ = ["RunReport", "build_parser", "main", "run_dist", "run_suite", "strip_timing"]
