"""Compare the numba and numpy model-checking backends.

Runs the same workloads under both kernels, checks that the answers agree,
and prints a table of median wall times. Usage:

    python benchmarks/bench_backends.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import statistics
import time

import numpy as np

from elimdist import catalog, kernels
from elimdist.distance import ExactSolver
from elimdist.fixtures import random_graph, unbreakable_graph
from elimdist.fpt import solve_unbreakable
from elimdist.modelcheck import check_mask, first_failing_mask
from elimdist.formula import pad_to_sigma3


def sentences(graphs, name):
    f = catalog.get(name)
    return [check_mask(g, g.mask, f) for g in graphs]


def failing_tuples(graphs, name):
    form = pad_to_sigma3(catalog.get(name))
    out = []
    for g in graphs:
        v = tuple(range(form.r))
        out.append(first_failing_mask(g, g.mask, form.phi_x, v, form.s))
    return out


def exact_conn(graphs, name):
    f = catalog.get(name)
    return [ExactSolver(g, f).conn() for g in graphs]


def fpt_conn(graphs, name):
    f = catalog.get(name)
    return [solve_unbreakable(g, f, 1, 1, "conn").verdict for g in graphs]


def workloads(seed):
    rng = np.random.default_rng(seed)
    mid = [random_graph(rng, 24, 0.3) for _ in range(20)]
    big = [random_graph(rng, 60, 0.2) for _ in range(4)]
    small = [random_graph(rng, 9, 0.4) for _ in range(6)]
    unb = [unbreakable_graph(rng, 12, 1, 1) for _ in range(3)]
    return [
        ("check triangle_free n=24", sentences, mid, "triangle_free"),
        ("check diameter_le_2 n=60", sentences, big, "diameter_le_2"),
        ("first failing s-tuple n=24", failing_tuples, mid, "diameter_le_2"),
        ("exact ed_conn n=9 (generic)", exact_conn, small, "diameter_le_2"),
        ("fpt conn n=12 (generic)", fpt_conn, unb, "triangle_free"),
    ]


def timed(fn, graphs, name, repeat):
    times, result = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(graphs, name)
        times.append(time.perf_counter() - t)
    return statistics.median(times), result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()

    rows = []
    for label, fn, graphs, name in workloads(args.seed):
        res = {}
        for be in ("numba", "numpy"):
            kernels.set_backend(be)
            fn(graphs[:1], name)  # warm-up, includes JIT compilation
            res[be] = timed(fn, graphs, name, args.repeat)
        agree = res["numba"][1] == res["numpy"][1]
        rows.append({
            "workload": label,
            "numba_s": res["numba"][0],
            "numpy_s": res["numpy"][0],
            "speedup": res["numpy"][0] / max(res["numba"][0], 1e-12),
            "agree": agree,
        })

    print(f"{'workload':32s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s} agree")
    for r in rows:
        print(f"{r['workload']:32s} {r['numba_s']:10.4f} {r['numpy_s']:10.4f} {r['speedup']:8.1f} {r['agree']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    if not all(r["agree"] for r in rows):
        raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
