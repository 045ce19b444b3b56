"""Set-cover instances turned into elimination-distance instances.

Each element i becomes k+2 vertices u_i^(p), and all element vertices form
one clique. Each set S_j becomes a path s_j - v_j - w_j with s_j adjacent to
every copy of every element of S_j. Under the sentence "every vertex has a
vertex of degree <= 1 within distance two" the instance has a cover of size
<= k exactly when any of the three elimination distances is <= k.

Vertex layout: u_i^(p) = i*(k+2) + p for 0 <= p < k+2, then (s_j, v_j, w_j)
occupy the next three ids for each j in order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import catalog
from .distance import ExactSolver, Variant
from .formula import Formula
from .graph import Graph
from .modelcheck import specialized_evaluator

HARD_NAME = "hardness_dist2_degree1"


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class SetCoverInstance:
    universe_size: int
    sets: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        n, m = self.universe_size, len(self.sets)
        if n < 2:
            raise InstanceError("the universe needs at least two elements")
        if not 0 <= self.k <= m:
            raise InstanceError("the budget must satisfy 0 <= k <= number of sets")
        for s in self.sets:
            if any(not 0 <= e < n for e in s):
                raise InstanceError(f"set {sorted(s)} leaves the universe 0..{n - 1}")

    @property
    def m(self) -> int:
        return len(self.sets)

    def has_cover(self) -> bool:
        """Is there a subfamily of at most k sets covering the universe."""
        full = frozenset(range(self.universe_size))
        for size in range(self.k + 1):
            for chosen in combinations(self.sets, size):
                if frozenset().union(*chosen) == full:
                    return True
        return False

    def format(self) -> str:
        lines = [f"{self.universe_size} {self.m} {self.k}"]
        lines += [" ".join(map(str, sorted(s))) for s in self.sets]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "SetCoverInstance":
        lines = text.splitlines()
        try:
            n, m, k = (int(t) for t in lines[0].split())
        except (IndexError, ValueError):
            raise InstanceError("first line must be 'n m k'") from None
        if len(lines) - 1 < m:
            raise InstanceError(f"expected {m} set lines, found {len(lines) - 1}")
        try:
            sets = tuple(frozenset(int(t) for t in line.split()) for line in lines[1 : m + 1])
        except ValueError:
            raise InstanceError("set lines must hold integers") from None
        return cls(n, sets, k)


def hard_formula() -> Formula:
    """The Pi_3 sentence: every vertex is within distance two of a vertex of degree <= 1."""
    return catalog.get(HARD_NAME)


def element_vertex(inst: SetCoverInstance, i: int, p: int) -> int:
    return i * (inst.k + 2) + p


def set_vertices(inst: SetCoverInstance, j: int) -> tuple[int, int, int]:
    base = inst.universe_size * (inst.k + 2) + 3 * j
    return base, base + 1, base + 2


def setcover_to_graph(inst: SetCoverInstance) -> Graph:
    copies = inst.k + 2
    clique = inst.universe_size * copies
    edges = list(combinations(range(clique), 2))
    for j, s in enumerate(inst.sets):
        sj, vj, wj = set_vertices(inst, j)
        edges += [(sj, vj), (vj, wj)]
        for i in sorted(s):
            edges += [(element_vertex(inst, i, p), sj) for p in range(copies)]
    return Graph(clique + 3 * inst.m, edges)


def expected_counts(inst: SetCoverInstance) -> tuple[int, int]:
    """Closed-form vertex and edge counts of ``setcover_to_graph``."""
    c = inst.universe_size * (inst.k + 2)
    incid = sum(len(s) for s in inst.sets)
    return c + 3 * inst.m, c * (c - 1) // 2 + 2 * inst.m + incid * (inst.k + 2)


def reduction_verdicts(inst: SetCoverInstance, cap: int | None = None) -> dict[str, bool]:
    """ed_variant(G) <= k for each variant, with the specialised evaluator."""
    g = setcover_to_graph(inst)
    solver = ExactSolver(g, hard_formula(), specialized_evaluator(HARD_NAME), cap=cap)
    return {v.value: bool(solver.solve(v, inst.k).verdict) for v in Variant}


def reduction_equivalence_check(inst: SetCoverInstance, cap: int | None = None) -> bool:
    """A cover of size <= k exists iff every elimination distance is <= k."""
    cover = inst.has_cover()
    return all(v == cover for v in reduction_verdicts(inst, cap).values())


__all__ = [
    "HARD_NAME",
    "InstanceError",
    "SetCoverInstance",
    "element_vertex",
    "expected_counts",
    "hard_formula",
    "reduction_equivalence_check",
    "reduction_verdicts",
    "set_vertices",
    "setcover_to_graph",
]
