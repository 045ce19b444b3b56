"""Branching solvers for elimination distance on (p, k)-unbreakable graphs.

Formulas are brought to the block form E^r A^s E^t. Colour classes are masks:
red vertices lie away from the sought boundary, blue vertices may belong to
it, and the depth variant adds yellow vertices that belong to the solution
but not to the boundary of the big component. The guessed tuple v is always
recoloured red for the duration of its iteration.

Every solver verifies its witness with the original sentence, so a returned
``True`` is always certified; completeness relies on the unbreakability
promise (checked when ``verify_unbreakable`` is set).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .distance import ExactSolver, Variant
from .elimination import EMPTY, EliminationRepresentation, _DepthSearch, from_nested, prop_representation
from .formula import Formula, Sigma3Form, pad_to_sigma3
from .graph import (
    Graph,
    GraphLike,
    bits,
    component_masks,
    component_of,
    from_mask,
    is_unbreakable,
    neighbors_mask,
    popcount,
    to_mask,
)
from .modelcheck import Evaluator, SentenceChecker, first_failing_mask
from .separation import build_family


class NotUnbreakableError(ValueError):
    pass


class WitnessBoundError(AssertionError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Red, yellow and blue masks partitioning ``universe``."""

    universe: int
    red: int
    yellow: int = 0

    def __post_init__(self):
        if self.red & self.yellow:
            raise ValueError("red and yellow overlap")
        if (self.red | self.yellow) & ~self.universe:
            raise ValueError("colour classes leave the universe")

    @property
    def blue(self) -> int:
        return self.universe & ~self.red & ~self.yellow

    def with_red(self, mask: int) -> "Coloring":
        """Overlay: the vertices of ``mask`` become red."""
        return Coloring(self.universe, self.red | mask, self.yellow & ~mask)


@dataclass(frozen=True)
class Candidate:
    region: int
    boundary: int
    budget_used: int


@dataclass
class Counters:
    findc_nodes: int = 0
    findf_nodes: int = 0
    findx_nodes: int = 0
    candidates: int = 0
    family_size: int = 0
    inner_family_sizes: int = 0
    tuples: int = 0
    y_checks: int = 0
    max_children: int = 0
    max_step5_children: int = 0
    max_recursion: int = 0
    exact_components: int = 0
    branching_components: int = 0

    def child_count(self, n: int, step5: bool = False) -> None:
        if step5:
            self.max_step5_children = max(self.max_step5_children, n)
        else:
            self.max_children = max(self.max_children, n)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FptResult:
    verdict: bool
    witness: frozenset[int] | None = None
    representation: EliminationRepresentation | None = None
    counters: Counters = field(default_factory=Counters)
    parts: list[dict] = field(default_factory=list)


# ---------------------------------------------------------------------------
# shared helpers

class _Tester:
    """First failing s-tuples of phi[x] under an assignment, memoised by mask."""

    def __init__(self, graph: Graph, form: Sigma3Form):
        self.graph = graph
        self.form = form
        self.memo: dict[tuple[int, tuple[int, ...]], tuple[int, ...] | None] = {}

    def __call__(self, mask: int, v: tuple[int, ...]) -> tuple[int, ...] | None:
        key = (mask, v)
        if key not in self.memo:
            self.memo[key] = first_failing_mask(self.graph, mask, self.form.phi_x, v, self.form.s)
        return self.memo[key]


def _as_form(f: Formula | Sigma3Form) -> Sigma3Form:
    return f if isinstance(f, Sigma3Form) else pad_to_sigma3(f)


def _distinct(u: Sequence[int]) -> list[int]:
    seen: list[int] = []
    for x in u:
        if x not in seen:
            seen.append(x)
    return seen


def _contains(big: int, small: int) -> bool:
    return small & ~big == 0


def _subsets(mask: int):
    verts = list(bits(mask))
    for size in range(len(verts) + 1):
        for c in combinations(verts, size):
            yield to_mask(c)


def _map_family(fam_sets: Iterable[int], verts: list[int]) -> list[int]:
    out = []
    for s in fam_sets:
        m = 0
        for i in bits(s):
            m |= 1 << verts[i]
        out.append(m)
    return out


def red_neighbour_components(graph: Graph, universe: int, red: int, w: int) -> int:
    """Union of the red components of graph[universe] adjacent to w."""
    out = 0
    for comp in component_masks(graph, universe & red):
        if graph.adj[w] & comp:
            out |= comp
    return out


# ---------------------------------------------------------------------------
# FindC

def find_c(
    host: GraphLike,
    v_tuple: Sequence[int],
    coloring: Coloring,
    f: Formula | Sigma3Form,
    k: int,
    counters: Counters | None = None,
    tester: _Tester | None = None,
) -> list[Candidate]:
    """Candidate big components C with S = N(C) containing the tuple v."""
    form = _as_form(f)
    graph = host.graph
    v = tuple(v_tuple)
    if len(v) != form.r:
        raise ValueError(f"expected {form.r} guessed vertices, got {len(v)}")
    vmask = to_mask(v)
    if not _contains(host.mask, vmask):
        raise ValueError("guessed vertices must lie in the host")
    red = coloring.with_red(vmask).red
    counters = counters if counters is not None else Counters()
    tester = tester or _Tester(graph, form)
    out: list[Candidate] = []
    seen: set[tuple[int, int]] = set()

    def rec(C: int, S: int, h: int, level: int) -> None:
        counters.findc_nodes += 1
        counters.max_recursion = max(counters.max_recursion, level)
        if level > k:
            raise AssertionError("FindC recursion deeper than k")
        u = tester(C, v)
        if u is None:
            if h >= 0 and (C, S) not in seen:
                seen.add((C, S))
                out.append(Candidate(C, S, k - h))
            return
        if h <= 0:
            return
        children = 0
        for uj in _distinct(u):
            if not red >> uj & 1:
                rest = C & ~(1 << uj)
                C2 = component_of(graph, rest, v[0])
                if _contains(C2, vmask):
                    children += 1
                    rec(C2, S | 1 << uj, h - 1, level + 1)
            else:
                W = component_of(graph, C & red, uj)
                Sp = neighbors_mask(graph, W, C)
                if popcount(Sp) > h:
                    continue
                rest = C & ~(W | Sp)
                if not _contains(rest, vmask):
                    continue
                C2 = component_of(graph, rest, v[0])
                if _contains(C2, vmask):
                    if Sp == 0:
                        raise AssertionError("budget must strictly decrease")
                    children += 1
                    rec(C2, S | Sp, h - popcount(Sp), level + 1)
        if children > form.s:
            raise AssertionError("FindC node has more than s children")
        counters.child_count(children)

    rec(host.mask, 0, k, 0)
    counters.candidates += len(out)
    return out


# ---------------------------------------------------------------------------
# FindF

def find_f(
    host: GraphLike,
    w: int,
    W: int,
    v_tuple: Sequence[int],
    coloring: Coloring,
    f: Formula | Sigma3Form,
    k: int,
    counters: Counters | None = None,
    tester: _Tester | None = None,
) -> list[Candidate]:
    """Candidate unions F = G_x for a leaf anchored at the blue vertex w.

    ``W`` is the union of red components adjacent to w (computed with v red).
    The search starts from G - w; every branching step keeps only the
    components that meet W or the tuple.
    """
    form = _as_form(f)
    graph = host.graph
    v = tuple(v_tuple)
    if len(v) != form.r:
        raise ValueError(f"expected {form.r} guessed vertices, got {len(v)}")
    vmask = to_mask(v)
    col = coloring.with_red(vmask)
    if not col.blue >> w & 1 or not host.mask >> w & 1:
        raise ValueError("w must be a blue vertex of the host")
    if not _contains(host.mask & ~(1 << w), vmask | W):
        raise ValueError("W and the tuple must avoid w and lie in the host")
    red = col.red
    keep_mask = W | vmask
    counters = counters if counters is not None else Counters()
    tester = tester or _Tester(graph, form)
    out: list[Candidate] = []
    seen: set[tuple[int, int]] = set()

    def keep(mask: int) -> int:
        F = 0
        for comp in component_masks(graph, mask):
            if comp & keep_mask:
                F |= comp
        return F

    def rec(F: int, S: int, h: int, level: int) -> None:
        counters.findf_nodes += 1
        counters.max_recursion = max(counters.max_recursion, level)
        if level > k:
            raise AssertionError("FindF recursion deeper than k")
        u = tester(F, v)
        if u is None:
            if h >= 0 and (F, S) not in seen:
                seen.add((F, S))
                out.append(Candidate(F, S, k - h))
            return
        if h <= 0:
            return
        children = 0
        for uj in _distinct(u):
            if not red >> uj & 1:
                F2 = keep(F & ~(1 << uj))
                if _contains(F2, keep_mask):
                    children += 1
                    rec(F2, S | 1 << uj, h - 1, level + 1)
            else:
                Z = component_of(graph, F & red, uj)
                if Z & keep_mask:
                    continue
                Sp = neighbors_mask(graph, Z, F)
                if popcount(Sp) > h:
                    continue
                F2 = keep(F & ~(Z | Sp))
                if _contains(F2, keep_mask):
                    # Sp is empty only when Z is a whole component of the
                    # unfiltered start region; that step cannot repeat
                    if Sp == 0 and F != start:
                        raise AssertionError("budget must strictly decrease")
                    children += 1
                    rec(F2, S | Sp, h - popcount(Sp), level + 1)
        if children > form.s:
            raise AssertionError("FindF node has more than s children")
        counters.child_count(children)

    start = host.mask & ~(1 << w)
    rec(start, 1 << w, k - 1, 0)
    counters.candidates += len(out)
    return out


# ---------------------------------------------------------------------------
# FindX

def find_x(
    g: GraphLike,
    v_tuple: Sequence[int],
    coloring: Coloring,
    f: Formula | Sigma3Form,
    k: int,
    p: int,
    counters: Counters | None = None,
    tester: _Tester | None = None,
) -> int | None:
    """A set Z with depth(Z) <= k-1 and (G - Z, v) |= phi[x], found by branching.

    Step 5 branches over every red-yellow component H of G - Z with
    |N(H)| <= k, |H| <= p and a non-red vertex in N[H]; see the module notes
    in the README for why the anchoring filter on H is dropped.
    """
    form = _as_form(f)
    graph, mask = g.graph, g.mask
    v = tuple(v_tuple)
    if len(v) != form.r:
        raise ValueError(f"expected {form.r} guessed vertices, got {len(v)}")
    vmask = to_mask(v)
    col = coloring.with_red(vmask)
    red, yellow, blue = col.red, col.yellow, col.blue
    counters = counters if counters is not None else Counters()
    tester = tester or _Tester(graph, form)
    depth_ok: dict[int, bool] = {}
    visited: set[int] = set()
    limit = p + k

    def shallow(Z: int) -> bool:
        if Z not in depth_ok:
            depth_ok[Z] = _DepthSearch(graph, Z).at_most(mask, k - 1) is not False
        return depth_ok[Z]

    def rec(Z: int, h: int, level: int) -> int | None:
        # h = p + k - |Z| on every call, so Z determines the node
        if h < 0 or Z in visited:
            return None
        visited.add(Z)
        counters.findx_nodes += 1
        counters.max_recursion = max(counters.max_recursion, level)
        if level > limit:
            raise AssertionError("FindX recursion deeper than p + k")
        F = mask & ~Z
        u = tester(F, v)
        ok_depth = shallow(Z)
        if u is None and ok_depth:
            return Z
        if u is not None:
            if h <= 0:
                return None
            if all(red >> x & 1 for x in u):
                return None
            children = 0
            for uj in _distinct(u):
                if not red >> uj & 1:
                    children += 1
                    found = rec(Z | 1 << uj, h - 1, level + 1)
                    if found is not None:
                        return found
            if children > form.s:
                raise AssertionError("FindX step 4 has more than s children")
            counters.child_count(children)
        if not ok_depth:
            children = 0
            for H in component_masks(graph, F & (red | yellow)):
                NH = neighbors_mask(graph, H, F)
                if popcount(NH) > k or popcount(H) > p:
                    continue
                S = (H | NH) & (blue | yellow)
                if S == 0:
                    continue
                children += 1
                found = rec(Z | S, h - popcount(S), level + 1)
                if found is not None:
                    return found
            counters.child_count(children, step5=True)
        return None

    return rec(0, limit, 0)


# ---------------------------------------------------------------------------
# full solvers

def exact_cutoff(p: int, k: int) -> int:
    """Graphs up to this size are handed to the exact solver."""
    return (3 * p + 2 * k) * (p + 1)


class _Run:
    def __init__(self, g: GraphLike, f: Formula, k: int, p: int, evaluator, cutoff):
        self.graph = g.graph
        self.mask = g.mask
        self.f = f
        self.form = pad_to_sigma3(f)
        self.k = k
        self.p = p
        self.check = SentenceChecker(self.graph, f, evaluator)
        self.evaluator = evaluator
        self.tester = _Tester(self.graph, self.form)
        self.counters = Counters()
        self.cutoff = exact_cutoff(p, k) if cutoff is None else cutoff

    def tuples(self, universe: int):
        verts = list(bits(universe))
        for t in product(verts, repeat=self.form.r):
            self.counters.tuples += 1
            yield t

    def family(self, universe: int, a: int, b: int) -> list[int]:
        verts = list(bits(universe))
        fam = build_family(len(verts), a, b)
        return _map_family(fam.sets, verts)

    def depth_rep(self, X: int, within: int, d: int) -> EliminationRepresentation | None:
        res = _DepthSearch(self.graph, X).at_most(within, d)
        if res is False:
            return None
        return EMPTY if res is True else from_nested(res)

    def exact(self, within: int, variant: Variant):
        self.counters.exact_components += 1
        solver = ExactSolver(self.graph.view(within), self.f, self.evaluator)
        solver.check = self.check
        return solver.solve(variant, self.k)

    def leftover(self, within: int, region: int) -> int:
        """Vertices outside N[region]; at most p on unbreakable inputs."""
        rest = within & ~region & ~neighbors_mask(self.graph, region, within)
        if popcount(rest) > self.p:
            raise NotUnbreakableError(
                f"{popcount(rest)} vertices beyond a big component's neighbourhood exceed p = {self.p}"
            )
        return rest

    def assert_bounds(self, X: int, within: int) -> None:
        if popcount(within) <= self.cutoff:
            return
        if popcount(X) > self.p + self.k:
            raise WitnessBoundError(f"witness of size {popcount(X)} exceeds p + k")
        big = [c for c in component_masks(self.graph, within & ~X) if popcount(c) >= self.p + 1]
        if len(big) != 1:
            raise WitnessBoundError(f"expected one big component, found {len(big)}")

    # -- conn ------------------------------------------------------------

    def conn_component(self, comp: int):
        if all(self.check(c) for c in component_masks(self.graph, comp)):
            return 0, EMPTY
        if popcount(comp) <= self.cutoff:
            res = self.exact(comp, Variant.CONN)
            return (to_mask(res.witness), res.representation) if res.verdict else None
        self.counters.branching_components += 1
        fam = self.family(comp, self.p, self.k)
        self.counters.family_size += len(fam)
        tried: set[tuple[int, int]] = set()
        host = self.graph.view(comp)
        for R in fam:
            col = Coloring(comp, R & comp)
            for v in self.tuples(comp):
                for cand in find_c(host, v, col, self.form, self.k, self.counters, self.tester):
                    key = (cand.region, cand.boundary)
                    if key in tried:
                        continue
                    tried.add(key)
                    found = self.conn_finish(comp, cand)
                    if found is not None:
                        return found
        return None

    def conn_finish(self, comp: int, cand: Candidate):
        C, S = cand.region, cand.boundary
        if popcount(C) < self.p + 1:
            return None
        for Y in _subsets(self.leftover(comp, C)):
            self.counters.y_checks += 1
            X = S | Y
            rep = self.depth_rep(X, comp, self.k - 1)
            if rep is None:
                continue
            if all(self.check(c) for c in component_masks(self.graph, comp & ~X)):
                self.assert_bounds(X, comp)
                return X, rep
        return None

    # -- prop ------------------------------------------------------------

    def prop_component(self, comp: int):
        if self.check(comp):
            return 0, EMPTY
        if popcount(comp) <= self.cutoff:
            res = self.exact(comp, Variant.PROP)
            return (to_mask(res.witness), res.representation) if res.verdict else None
        self.counters.branching_components += 1
        fam = self.family(comp, self.p, self.k)
        self.counters.family_size += len(fam)
        host = self.graph.view(comp)
        tried: set[tuple[int, int]] = set()
        for R in fam:
            col = Coloring(comp, R & comp)
            for v in self.tuples(comp):
                for cand in find_c(host, v, col, self.form, self.k, self.counters, self.tester):
                    key = (cand.region, cand.boundary)
                    if key in tried:
                        continue
                    tried.add(key)
                    if popcount(cand.region) < self.p + 1:
                        continue
                    found = self.prop_finish(comp, cand.region, cand.boundary)
                    if found is not None:
                        return found
        tried = set()
        for R in fam:
            base = Coloring(comp, R & comp)
            for w in bits(base.blue):
                for v in self.tuples(comp & ~(1 << w)):
                    col = base.with_red(to_mask(v))
                    W = red_neighbour_components(self.graph, comp & ~(1 << w), col.red, w)
                    cands = find_f(host, w, W, v, base, self.form, self.k, self.counters, self.tester)
                    for cand in cands:
                        key = (cand.region, cand.boundary)
                        if key in tried:
                            continue
                        tried.add(key)
                        F = cand.region
                        if not any(popcount(c) >= self.p + 1 for c in component_masks(self.graph, F)):
                            continue
                        found = self.prop_finish(comp, F, cand.boundary)
                        if found is not None:
                            return found
        return None

    def prop_finish(self, comp: int, region: int, S: int):
        view = self.graph.view(comp)
        for Y in _subsets(self.leftover(comp, region)):
            self.counters.y_checks += 1
            X = S | Y
            if X == 0:
                continue
            rep = prop_representation(view, X, self.k, self.check)
            if rep is not None:
                self.assert_bounds(X, comp)
                return X, rep
        return None

    # -- depth -----------------------------------------------------------

    def depth_all(self):
        if self.check(self.mask):
            return 0, EMPTY
        if popcount(self.mask) <= self.cutoff:
            res = self.exact(self.mask, Variant.DEPTH)
            return (to_mask(res.witness), res.representation) if res.verdict else None
        self.counters.branching_components += 1
        fam = self.family(self.mask, self.p, self.p + self.k)
        self.counters.family_size += len(fam)
        g = self.graph.view(self.mask)
        for R in fam:
            U = self.mask & ~R
            famY = self.family(U, self.p, self.k)
            self.counters.inner_family_sizes += len(famY)
            for Y in famY:
                col = Coloring(self.mask, R, Y)
                for v in self.tuples(self.mask):
                    Z = find_x(g, v, col, self.form, self.k, self.p, self.counters, self.tester)
                    if Z is None:
                        continue
                    rep = self.depth_rep(Z, self.mask, self.k - 1)
                    if rep is None or not self.check(self.mask & ~Z):
                        raise AssertionError("FindX returned an invalid set")
                    self.assert_bounds(Z, self.mask)
                    return Z, rep
        return None


def solve_unbreakable(
    g: GraphLike,
    f: Formula,
    k: int,
    p: int | None = None,
    variant: Variant | str = Variant.CONN,
    verify_unbreakable: bool = False,
    evaluator: Evaluator | None = None,
    cutoff: int | None = None,
) -> FptResult:
    """Decide ed_variant(g) <= k for a (p, k)-unbreakable g and a Sigma_3 sentence.

    ``p`` defaults to 2**k. ``cutoff`` overrides the size up to which the exact
    solver is used (default ``exact_cutoff(p, k)``); lowering it exercises the
    branching on small graphs but drops the completeness guarantee.
    """
    variant = Variant(variant)
    if k < 0:
        raise ValueError("k must be non-negative")
    if not f.is_sentence:
        raise ValueError("f must be a sentence")
    p = 2 ** k if p is None else p
    if p < 1:
        raise ValueError("p must be positive")
    if verify_unbreakable and k >= 1:
        ok, sep = is_unbreakable(g, p, k)
        if not ok:
            raise NotUnbreakableError(f"graph is not ({p},{k})-unbreakable: {sep}")
    run = _Run(g, f, k, p, evaluator, cutoff)
    graph, mask = run.graph, run.mask
    if k == 0:
        if variant is Variant.CONN:
            ok = all(run.check(c) for c in component_masks(graph, mask))
        else:
            ok = run.check(mask)
        return FptResult(ok, frozenset() if ok else None, EMPTY if ok else None, run.counters)

    if variant is Variant.DEPTH:
        found = run.depth_all()
        if found is None:
            return FptResult(False, counters=run.counters)
        X, rep = found
        return FptResult(True, from_mask(X), rep, run.counters)

    if variant is Variant.PROP and run.check(mask):
        return FptResult(True, frozenset(), EMPTY, run.counters)
    solve_comp = run.conn_component if variant is Variant.CONN else run.prop_component
    parts = []
    union = 0
    for comp in component_masks(graph, mask):
        found = solve_comp(comp)
        if found is None:
            return FptResult(False, counters=run.counters)
        X, rep = found
        union |= X
        parts.append({"component": sorted(bits(comp)), "witness": sorted(bits(X)), "representation": rep})
    nonempty = [pt for pt in parts if pt["witness"]]
    rep = None
    # a single tree certifies prop only on a connected graph
    if len(nonempty) <= 1 and (variant is Variant.CONN or len(parts) == 1):
        rep = nonempty[0]["representation"] if nonempty else EMPTY
    return FptResult(True, from_mask(union), rep, run.counters, parts)


__all__ = [
    "Candidate",
    "Coloring",
    "Counters",
    "FptResult",
    "NotUnbreakableError",
    "WitnessBoundError",
    "exact_cutoff",
    "find_c",
    "find_f",
    "find_x",
    "red_neighbour_components",
    "solve_unbreakable",
]
