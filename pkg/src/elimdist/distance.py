"""Exact elimination distances by their recursive definitions, plus set-based oracles.

The property is a first-order sentence; the empty graph always counts as
satisfying it. Everything here is exponential and intended for small graphs
(see ``size_cap``).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from itertools import combinations

from .elimination import (
    EMPTY,
    EliminationRepresentation,
    _DepthSearch,
    from_nested,
    prop_representation,
    satisfies_prop_conditions,
    validate_representation,
)
from .formula import Formula
from .graph import Graph, GraphLike, bits, component_masks, from_mask, to_mask
from .modelcheck import Evaluator, SentenceChecker

DEFAULT_SIZE_CAP = 20


class Variant(str, enum.Enum):
    CONN = "conn"
    PROP = "prop"
    DEPTH = "depth"


class SizeCapError(ValueError):
    pass


def size_cap() -> int:
    return int(os.environ.get("ELIMDIST_SIZE_CAP", DEFAULT_SIZE_CAP))


@dataclass
class DistanceResult:
    verdict: bool | None = None  # for budgeted queries
    value: int | None = None  # for exact-value queries
    witness: frozenset[int] | None = None
    representation: EliminationRepresentation | None = None
    extra: dict = field(default_factory=dict)


class ExactSolver:
    """Memoised exact solvers for one graph (or view) and one sentence."""

    def __init__(self, g: GraphLike, f: Formula, evaluator: Evaluator | None = None, cap: int | None = None):
        cap = size_cap() if cap is None else cap
        if g.n > cap:
            raise SizeCapError(f"{g.n} vertices exceed the exact-mode cap of {cap}")
        self.graph: Graph = g.graph
        self.mask = g.mask
        self.check = SentenceChecker(self.graph, f, evaluator)
        self._conn: dict[int, int] = {}
        self._prop: dict[int, int] = {}
        self._depth_search: dict[int, _DepthSearch] = {}

    # -- recursive definitions -------------------------------------------

    def conn(self, mask: int | None = None) -> int:
        mask = self.mask if mask is None else mask
        hit = self._conn.get(mask)
        if hit is not None:
            return hit
        comps = component_masks(self.graph, mask)
        if len(comps) > 1:
            val = max(self.conn(c) for c in comps)
        elif self.check(mask):
            val = 0
        else:
            val = 1 + min(self.conn(mask & ~(1 << v)) for v in bits(mask))
        self._conn[mask] = val
        return val

    def prop(self, mask: int | None = None) -> int:
        mask = self.mask if mask is None else mask
        hit = self._prop.get(mask)
        if hit is not None:
            return hit
        if self.check(mask):
            val = 0
        else:
            comps = component_masks(self.graph, mask)
            if len(comps) == 1:
                val = 1 + min(self.prop(mask & ~(1 << v)) for v in bits(mask))
            else:
                val = max(1, max(self.prop(c) for c in comps))
        self._prop[mask] = val
        return val

    def depth_search(self, X: int) -> _DepthSearch:
        s = self._depth_search.get(X)
        if s is None:
            s = self._depth_search[X] = _DepthSearch(self.graph, X)
        return s

    def depth_of(self, X: int, d: int) -> EliminationRepresentation | None:
        res = self.depth_search(X).at_most(self.mask, d)
        if res is False:
            return None
        return EMPTY if res is True else from_nested(res)

    def _subsets(self, max_size: int | None = None):
        """All subsets of the vertex set, by increasing size then lexicographically."""
        verts = list(bits(self.mask))
        top = len(verts) if max_size is None else min(max_size, len(verts))
        for size in range(top + 1):
            for combo in combinations(verts, size):
                yield to_mask(combo)

    def depth_value(self) -> DistanceResult:
        """ed_depth with a witness set and representation."""
        d = 0
        while True:
            res = self.depth_at_most(d)
            if res.verdict:
                res.value = d
                return res
            d += 1

    # -- budgeted decisions ------------------------------------------------

    def conn_at_most(self, k: int) -> bool:
        return self.conn() <= k

    def prop_at_most(self, k: int) -> bool:
        return self.prop() <= k

    def depth_at_most(self, k: int) -> DistanceResult:
        if self.check(self.mask):
            return DistanceResult(verdict=True, witness=frozenset(), representation=EMPTY)
        if k <= 0:
            return DistanceResult(verdict=False)
        # depth 0 forces a single vertex; otherwise scan every subset
        subsets = self._subsets(max_size=1) if k == 1 else self._subsets()
        for X in subsets:
            if X == 0:
                continue
            rep = self.depth_of(X, k - 1)
            if rep is not None and self.check(self.mask & ~X):
                return DistanceResult(verdict=True, witness=from_mask(X), representation=rep)
        return DistanceResult(verdict=False)

    # -- characterisations via elimination sets ----------------------------

    def conn_via_sets(self, k: int) -> DistanceResult:
        if len(component_masks(self.graph, self.mask)) > 1:
            raise ValueError("conn_via_sets needs a connected graph")
        for X in self._subsets():
            rep = self.depth_of(X, k - 1)
            if rep is None:
                continue
            if all(self.check(c) for c in component_masks(self.graph, self.mask & ~X)):
                return DistanceResult(verdict=True, witness=from_mask(X), representation=rep)
        return DistanceResult(verdict=False)

    def prop_via_sets(self, k: int) -> DistanceResult:
        if len(component_masks(self.graph, self.mask)) > 1:
            raise ValueError("prop_via_sets needs a connected graph")
        if k < 1:
            raise ValueError("prop_via_sets needs k >= 1")
        view = self.graph.view(self.mask)
        for X in self._subsets():
            if X == 0:
                continue
            rep = prop_representation(view, X, k, self.check)
            if rep is not None:
                return DistanceResult(verdict=True, witness=from_mask(X), representation=rep)
        return DistanceResult(verdict=False)

    def solve(self, variant: Variant, k: int) -> DistanceResult:
        """Budgeted decision ed_variant <= k with a certificate when available."""
        variant = Variant(variant)
        if variant is Variant.DEPTH:
            return self.depth_at_most(k)
        if variant is Variant.CONN:
            ok = self.conn() <= k
            res = DistanceResult(verdict=ok)
            if ok:
                if len(component_masks(self.graph, self.mask)) > 1:
                    res.extra["parts"] = self._parts(k, Variant.CONN)
                    res.witness = frozenset().union(*(pt["witness"] for pt in res.extra["parts"]))
                else:
                    res.witness, res.representation = self._conn_certificate(k)
            return res
        ok = self.prop() <= k
        res = DistanceResult(verdict=ok)
        if ok:
            res.witness, res.representation = self._prop_certificate(k)
            if res.witness is None:
                res.extra["parts"] = self._parts(k, Variant.PROP)
                res.witness = frozenset().union(*(pt["witness"] for pt in res.extra["parts"]))
        return res

    def value(self, variant: Variant) -> int:
        variant = Variant(variant)
        if variant is Variant.CONN:
            return self.conn()
        if variant is Variant.PROP:
            return self.prop()
        return self.depth_value().value

    def _conn_certificate(self, k: int):
        """Elimination set of depth <= k-1 whose removal leaves only models."""
        for X in self._subsets():
            rep = self.depth_of(X, k - 1)
            if rep is not None and all(
                self.check(c) for c in component_masks(self.graph, self.mask & ~X)
            ):
                return from_mask(X), rep
        raise AssertionError("no certificate although the value is within budget")

    def _parts(self, k: int, variant: Variant) -> list[dict]:
        """Per-component certificates for a disconnected graph."""
        parts = []
        for comp in component_masks(self.graph, self.mask):
            sub = ExactSolver.__new__(ExactSolver)
            sub.graph, sub.mask, sub.check = self.graph, comp, self.check
            sub._conn, sub._prop, sub._depth_search = self._conn, self._prop, self._depth_search
            if variant is Variant.CONN:
                X, rep = sub._conn_certificate(k)
            else:
                X, rep = sub._prop_certificate(k)
            parts.append({"component": sorted(bits(comp)), "witness": X, "representation": rep})
        return parts

    def _prop_certificate(self, k: int):
        if self.check(self.mask):
            return frozenset(), EMPTY
        comps = component_masks(self.graph, self.mask)
        if len(comps) > 1:
            # certificates are per component; report the union without a tree
            return None, None
        view = self.graph.view(self.mask)
        for X in self._subsets():
            if X and (rep := prop_representation(view, X, k, self.check)) is not None:
                return from_mask(X), rep
        raise AssertionError("no certificate although the value is within budget")


# ---------------------------------------------------------------------------
# certificate checking

def validate_witness(
    g: GraphLike,
    f: Formula,
    variant: Variant | str,
    k: int,
    witness: frozenset[int] | set[int],
    representation: EliminationRepresentation | None,
    parts: list[dict] | None = None,
    evaluator: Evaluator | None = None,
) -> bool:
    """Does the certificate show ed_variant(g) <= k.

    ``parts`` holds per-component certificates (keys component, witness,
    representation) and replaces ``representation`` when a single tree over
    all components is not available.
    """
    variant = Variant(variant)
    check = SentenceChecker(g.graph, f, evaluator)
    graph, mask = g.graph, g.mask
    X = to_mask(witness)
    if X & ~mask:
        return False
    if parts is not None:
        if variant is Variant.DEPTH:
            return False
        comps = component_masks(graph, mask)
        if sorted(to_mask(pt["component"]) for pt in parts) != sorted(comps):
            return False
        if X != _union(to_mask(pt["witness"]) for pt in parts):
            return False
        if variant is Variant.PROP and len(comps) > 1 and k < 1:
            return False
        return all(
            validate_witness(
                graph.view(to_mask(pt["component"])), f, variant, k,
                pt["witness"], pt["representation"], evaluator=evaluator,
            )
            for pt in parts
        )
    if representation is None or representation.mask != X:
        return False
    if not validate_representation(g, representation):
        return False
    if X == 0:
        if variant is Variant.CONN:
            return all(check(c) for c in component_masks(graph, mask))
        return check(mask)
    if representation.depth > k - 1:
        return False
    if variant is Variant.CONN:
        return all(check(c) for c in component_masks(graph, mask & ~X))
    if variant is Variant.DEPTH:
        return check(mask & ~X)
    if len(component_masks(graph, mask)) != 1:
        return False
    return satisfies_prop_conditions(g, representation, k, check)


def _union(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


# ---------------------------------------------------------------------------
# functional interface

def ed_conn(g: GraphLike, f: Formula, evaluator: Evaluator | None = None) -> int:
    return ExactSolver(g, f, evaluator).conn()


def ed_prop(g: GraphLike, f: Formula, evaluator: Evaluator | None = None) -> int:
    return ExactSolver(g, f, evaluator).prop()


def ed_depth(g: GraphLike, f: Formula, evaluator: Evaluator | None = None) -> int:
    return ExactSolver(g, f, evaluator).depth_value().value


def ed_conn_via_sets(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None) -> DistanceResult:
    return ExactSolver(g, f, evaluator).conn_via_sets(k)


def ed_prop_via_sets(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None) -> DistanceResult:
    return ExactSolver(g, f, evaluator).prop_via_sets(k)


def deletion_distance_at_most(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None) -> bool:
    """Is there a set of at most k vertices whose deletion leaves a model of f."""
    solver = ExactSolver(g, f, evaluator)
    verts = list(bits(g.mask))
    for size in range(min(k, len(verts)) + 1):
        for combo in combinations(verts, size):
            if solver.check(g.mask & ~to_mask(combo)):
                return True
    return False


__all__ = [
    "DistanceResult",
    "ExactSolver",
    "SizeCapError",
    "Variant",
    "deletion_distance_at_most",
    "ed_conn",
    "ed_conn_via_sets",
    "ed_depth",
    "ed_prop",
    "ed_prop_via_sets",
    "validate_witness",
]
