"""Seeded generators for test and benchmark graphs.

All randomness comes from a ``numpy.random.Generator`` passed in by the
caller, so a seed fixes every artifact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .elimination import EliminationRepresentation, _DepthSearch, anchored_masks, prop_representation
from .formula import pad_to_sigma3
from .graph import Graph, bits, component_masks, is_unbreakable, neighbors_mask, to_mask
from .modelcheck import SentenceChecker, check_mask


def rng_from(seed: int | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_graph(rng: np.random.Generator, n: int, density: float) -> Graph:
    pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < density
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


def random_connected_graph(rng: np.random.Generator, n: int, density: float) -> Graph:
    """A random spanning tree plus independent extra edges."""
    edges = set()
    for v in range(1, n):
        edges.add((int(rng.integers(v)), v))
    for u, v in combinations(range(n), 2):
        if rng.random() < density:
            edges.add((u, v))
    return Graph(n, sorted(edges))


def clique_with_pendant_triangles(p: int, k: int) -> Graph:
    """K_{p+2} with k triangles, each sharing one vertex with the clique."""
    m = p + 2
    edges = [(u, v) for u, v in combinations(range(m), 2)]
    n = m
    for i in range(k):
        a, b = n, n + 1
        c = i % m
        edges += [(c, a), (c, b), (a, b)]
        n += 2
    return Graph(n, edges)


def unbreakable_graph(
    rng: np.random.Generator,
    n: int,
    p: int,
    k: int,
    density: float | None = None,
    max_tries: int = 500,
) -> Graph:
    """A (p, k)-unbreakable graph: a random core plus small satellites.

    Satellites have at most p vertices and at most k attachment vertices, so
    they never create a balanced small separation on their own; the result is
    still checked with ``is_unbreakable`` and redrawn on failure.
    """
    for attempt in range(max_tries):
        d = density if density is not None else float(rng.choice([0.15, 0.35, 0.6]))
        d = min(1.0, d + 0.05 * (attempt // 20))
        extra = int(rng.integers(0, max(1, n // 3) + 1))
        core = max(2, n - extra)
        edges = set()
        for i in range(core):  # a Hamiltonian cycle keeps the core 2-connected
            j = (i + 1) % core
            if i != j:
                edges.add((min(i, j), max(i, j)))
        for u, v in combinations(range(core), 2):
            if rng.random() < d:
                edges.add((u, v))
        v = core
        while v < n:
            size = int(rng.integers(1, min(p, n - v) + 1))
            group = list(range(v, v + size))
            for a, b in zip(group, group[1:]):
                edges.add((a, b))
            attach = rng.choice(core, size=int(rng.integers(1, min(k, core) + 1)), replace=False)
            for t in attach:
                edges.add((int(t), int(rng.choice(group))))
            v += size
        g = Graph(n, sorted(edges))
        if is_unbreakable(g, p, k)[0]:
            return g
    raise RuntimeError(f"no ({p},{k})-unbreakable graph on {n} vertices found")


# ---------------------------------------------------------------------------
# planted colourful solutions for the branching subroutines

@dataclass(frozen=True)
class PlantedConn:
    graph: Graph
    k: int
    p: int
    X: int
    C: int  # big component
    S: int  # N(C)
    red: int


@dataclass(frozen=True)
class PlantedProp:
    graph: Graph
    k: int
    p: int
    X: int
    rep: EliminationRepresentation
    w: int
    F: int  # G_x for the leaf anchored at w
    S: int  # N(F)
    red: int


@dataclass(frozen=True)
class PlantedDepth:
    graph: Graph
    k: int
    p: int
    X: int
    red: int
    yellow: int


def _random_extra_red(rng: np.random.Generator, mask: int) -> int:
    out = 0
    for v in bits(mask):
        if rng.random() < 0.5:
            out |= 1 << v
    return out


def minimal_solutions(graph: Graph, is_solution, max_size: int):
    """Inclusion-minimal sets X (|X| <= max_size) with is_solution(X), by size."""
    found: list[int] = []
    verts = list(range(graph.n))
    for size in range(max_size + 1):
        for c in combinations(verts, size):
            X = to_mask(c)
            if any(Y & X == Y for Y in found):
                continue
            if is_solution(X):
                found.append(X)
                yield X


def big_component(graph: Graph, mask: int, X: int) -> tuple[int, int] | None:
    """(C, p): the largest component and the largest other size, if unique."""
    comps = sorted(component_masks(graph, mask & ~X), key=lambda c: -bin(c).count("1"))
    if not comps:
        return None
    sizes = [bin(c).count("1") for c in comps]
    p = max([1] + sizes[1:])
    if sizes[0] < p + 1:
        return None
    return comps[0], p


def _first_model_tuple(graph: Graph, mask: int, form, prefer: int = 0) -> tuple[int, ...] | None:
    """First tuple v with (graph[mask], v) |= phi[x], trying tuples inside ``prefer`` first."""
    inner = list(bits(mask & prefer))
    for v in product(inner, repeat=form.r):
        if check_mask(graph, mask, form.phi_x, v):
            return tuple(v)
    for v in product(list(bits(mask)), repeat=form.r):
        if check_mask(graph, mask, form.phi_x, v):
            return tuple(v)
    return None


def plant_conn(rng: np.random.Generator, f, k: int, n_range=(7, 10), evaluator=None, max_tries=300):
    """A connected graph with an inclusion-minimal solution X for ed_conn <= k.

    The colouring makes X colourful: every vertex outside N[C] is red, N(C)
    is blue, and C gets random colours.
    """
    form = pad_to_sigma3(f)
    for _ in range(max_tries):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_connected_graph(rng, n, float(rng.choice([0.1, 0.25, 0.45])))
        check = SentenceChecker(g, f, evaluator)
        full = g.full
        if check(full):
            continue

        def ok(X: int) -> bool:
            if _DepthSearch(g, X).at_most(full, k - 1) is False:
                return False
            return all(check(c) for c in component_masks(g, full & ~X))

        for X in minimal_solutions(g, ok, min(n - 1, k + 3)):
            if X == 0:
                break
            bc = big_component(g, full, X)
            if bc is None:
                continue
            C, p = bc
            S = neighbors_mask(g, C, full)
            v = _first_model_tuple(g, C, form)
            if v is None:
                continue
            red = (full & ~C & ~S) | _random_extra_red(rng, C)
            return PlantedConn(g, k, p, X, C, S, red), v
    raise RuntimeError("could not plant a conn solution")


def plant_prop(rng: np.random.Generator, f, k: int, n_range=(7, 10), evaluator=None, max_tries=400):
    """A graph whose prop solution has a leaf anchor w with a disconnected G_x.

    Only plants meeting the hypotheses of the FindF correctness argument are
    returned: the red components adjacent to w lie inside G_x.
    """
    form = pad_to_sigma3(f)
    for _ in range(max_tries):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_connected_graph(rng, n, float(rng.choice([0.1, 0.25, 0.45])))
        check = SentenceChecker(g, f, evaluator)
        full = g.full
        if check(full):
            continue
        reps: dict[int, EliminationRepresentation] = {}

        def ok(X: int) -> bool:
            if X == 0:
                return False
            rep = prop_representation(g, X, k, check)
            if rep is None:
                return False
            reps[X] = rep
            return True

        for X in minimal_solutions(g, ok, min(n - 1, k + 3)):
            rep = reps[X]
            bc = big_component(g, full, X)
            if bc is None:
                continue
            C, p = bc
            anchored = anchored_masks(g, full, rep)
            x = next(node for node, comps in anchored.items() if C in comps)
            comps = anchored[x]
            if not rep.is_leaf(x) or len(comps) < 2:
                continue
            F = 0
            for c in comps:
                F |= c
            if not check(F):
                continue
            w = rep.alpha[x]
            S = neighbors_mask(g, F, full)
            v = _first_model_tuple(g, F, form, prefer=C)
            if v is None or w in v:
                continue
            red = (full & ~C & ~S) | _random_extra_red(rng, C)
            red_v = red | to_mask(v)
            W = 0
            for comp in component_masks(g, (full & ~(1 << w)) & red_v):
                if g.adj[w] & comp:
                    W |= comp
            if W & ~F:
                continue
            return PlantedProp(g, k, p, X, rep, w, F, S, red), v, W
    raise RuntimeError("could not plant a prop solution")


def plant_depth(rng: np.random.Generator, f, k: int, n_range=(7, 10), evaluator=None, max_tries=300):
    """A graph with an inclusion-minimal depth solution and a colourful colouring.

    Small components of G - X are red, X minus N(C) is yellow, N(C) is blue,
    and the big component C gets random red/yellow/blue colours.
    """
    form = pad_to_sigma3(f)
    for _ in range(max_tries):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_graph(rng, n, float(rng.choice([0.2, 0.35, 0.5])))
        check = SentenceChecker(g, f, evaluator)
        full = g.full
        if check(full):
            continue

        def ok(X: int) -> bool:
            if _DepthSearch(g, X).at_most(full, k - 1) is False:
                return False
            return check(full & ~X)

        for X in minimal_solutions(g, ok, min(n - 1, k + 4)):
            if X == 0:
                break
            bc = big_component(g, full, X)
            if bc is None:
                continue
            C, p = bc
            if bin(X).count("1") > p + k:
                continue
            v = _first_model_tuple(g, full & ~X, form, prefer=C)
            if v is None:
                continue
            NC = neighbors_mask(g, C, full)
            small = full & ~X & ~C
            extra_red = _random_extra_red(rng, C)
            red = small | extra_red
            yellow = (X & ~NC) | _random_extra_red(rng, C & ~extra_red)
            return PlantedDepth(g, k, p, X, red, yellow), v
    raise RuntimeError("could not plant a depth solution")


__all__ = [
    "PlantedConn",
    "plant_conn",
    "plant_depth",
    "plant_prop",
    "PlantedDepth",
    "PlantedProp",
    "big_component",
    "clique_with_pendant_triangles",
    "minimal_solutions",
    "random_connected_graph",
    "random_graph",
    "rng_from",
    "unbreakable_graph",
]
