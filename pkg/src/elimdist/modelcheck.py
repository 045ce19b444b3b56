"""First-order model checking on graphs and r-structures.

Formulas are compiled once into integer slot programs (free variables first,
then the prefix) and evaluated by the active kernel backend. Quantifiers range
over the vertex set of the graph or view being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .formula import And, Adj, Eq, Formula, Implies, Node, Not, Or, QKind
from .graph import Graph, GraphLike, bits

Evaluator = Callable[[GraphLike], bool]


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Structure:
    """A graph (or view) with vertices interpreting the free variables."""

    graph: GraphLike
    assignment: tuple[int, ...] = ()


@dataclass(frozen=True)
class Program:
    variables: tuple[str, ...]
    nfree: int
    kinds: np.ndarray
    ops: np.ndarray
    oa: np.ndarray
    ob: np.ndarray


def _emit(node: Node, slot: dict[str, int], out: list[tuple[int, int, int]]) -> None:
    if isinstance(node, Eq):
        out.append((kernels.OP_EQ, slot[node.a], slot[node.b]))
    elif isinstance(node, Adj):
        out.append((kernels.OP_ADJ, slot[node.a], slot[node.b]))
    elif isinstance(node, Not):
        _emit(node.arg, slot, out)
        out.append((kernels.OP_NOT, 0, 0))
    elif isinstance(node, (And, Or)):
        op = kernels.OP_AND if isinstance(node, And) else kernels.OP_OR
        _emit(node.args[0], slot, out)
        for arg in node.args[1:]:
            _emit(arg, slot, out)
            out.append((op, 0, 0))
    else:
        op = kernels.OP_IMP if isinstance(node, Implies) else kernels.OP_IFF
        _emit(node.left, slot, out)
        _emit(node.right, slot, out)
        out.append((op, 0, 0))


@lru_cache(maxsize=4096)
def compile_formula(f: Formula) -> Program:
    variables = f.variables
    slot = {v: i for i, v in enumerate(variables)}
    code: list[tuple[int, int, int]] = []
    _emit(f.matrix, slot, code)
    arr = np.array(code, dtype=np.int64).reshape(-1, 3)
    kinds = np.array(
        [kernels.FORALL if q.kind is QKind.FORALL else kernels.EXISTS for q in f.prefix],
        dtype=np.int8,
    )
    return Program(
        variables,
        len(f.free_vars),
        kinds,
        np.ascontiguousarray(arr[:, 0]),
        np.ascontiguousarray(arr[:, 1]),
        np.ascontiguousarray(arr[:, 2]),
    )


def _verts(mask: int) -> np.ndarray:
    return np.fromiter(bits(mask), dtype=np.int64)


def _prepare(graph: Graph, mask: int, f: Formula, assignment: Sequence[int]):
    if len(assignment) != len(f.free_vars):
        raise ArityError(
            f"formula has {len(f.free_vars)} free variable(s), got {len(assignment)} value(s)"
        )
    for v in assignment:
        if not (0 <= v < graph.n) or not mask >> v & 1:
            raise ArityError(f"assigned vertex {v} is not in the structure")
    prog = compile_formula(f)
    vals = np.zeros(len(prog.variables), dtype=np.int64)
    vals[: prog.nfree] = assignment
    return prog, vals


def check_mask(graph: Graph, mask: int, f: Formula, assignment: Sequence[int] = ()) -> bool:
    """(graph[mask], assignment) |= f."""
    prog, vals = _prepare(graph, mask, f, assignment)
    return kernels.backend().check(
        graph.matrix, _verts(mask), prog.kinds, vals, prog.ops, prog.oa, prog.ob
    )


def models(s: Structure | GraphLike, f: Formula) -> bool:
    if not isinstance(s, Structure):
        s = Structure(s)
    return check_mask(s.graph.graph, s.graph.mask, f, s.assignment)


def leading_forall_block(f: Formula) -> tuple[str, ...]:
    out = []
    for q in f.prefix:
        if q.kind is not QKind.FORALL:
            break
        out.append(q.var)
    return tuple(out)


def first_failing_mask(
    graph: Graph, mask: int, f: Formula, assignment: Sequence[int] = (), s: int | None = None
) -> tuple[int, ...] | None:
    block = leading_forall_block(f)
    if s is None:
        s = len(block)
    if s > len(block):
        raise ValueError("requested block is longer than the leading universal block")
    prog, vals = _prepare(graph, mask, f, assignment)
    if s == 0:
        ok = kernels.backend().check(
            graph.matrix, _verts(mask), prog.kinds, vals, prog.ops, prog.oa, prog.ob
        )
        return None if ok else ()
    return kernels.backend().first_failing(
        graph.matrix, _verts(mask), s, prog.kinds, vals, prog.ops, prog.oa, prog.ob
    )


def first_failing_tuple(
    s: Structure | GraphLike, f: Formula, block: Sequence[str] | None = None
) -> tuple[int, ...] | None:
    """Lexicographically first tuple for the leading universal block that falsifies f.

    ``block`` names the universal variables to instantiate; it must be a prefix
    of the leading universal block. Returns None when the structure models f.
    """
    if not isinstance(s, Structure):
        s = Structure(s)
    lead = leading_forall_block(f)
    if block is None:
        block = lead
    block = tuple(block)
    if lead[: len(block)] != block:
        raise ValueError(f"{list(block)} is not a leading universal block of the formula")
    return first_failing_mask(s.graph.graph, s.graph.mask, f, s.assignment, len(block))


# ---------------------------------------------------------------------------
# specialised evaluators for catalog sentences

def _submatrix(g: GraphLike) -> np.ndarray:
    verts = _verts(g.mask)
    return g.graph.matrix[np.ix_(verts, verts)].astype(np.int64)


def _triangle_free(g: GraphLike) -> bool:
    a = _submatrix(g)
    return not np.any((a @ a) * a)


def _diameter_le_2(g: GraphLike) -> bool:
    a = _submatrix(g)
    reach = np.eye(len(a), dtype=bool) | (a > 0) | ((a @ a) > 0)
    return bool(reach.all())


def _nonadjacent_pair(g: GraphLike) -> bool:
    a = _submatrix(g)
    m = len(a)
    return m >= 2 and int(a.sum()) < m * (m - 1)


def _all_equal(g: GraphLike) -> bool:
    return g.n <= 1


def _dist2_degree1(g: GraphLike) -> bool:
    a = _submatrix(g)
    if len(a) == 0:
        return True
    reach = np.eye(len(a), dtype=bool) | (a > 0) | ((a @ a) > 0)
    low = a.sum(axis=1) <= 1
    return bool((reach & low[None, :]).any(axis=1).all())


_SPECIALIZED: dict[str, Evaluator] = {
    "triangle_free": _triangle_free,
    "diameter_le_2": _diameter_le_2,
    "nonadjacent_pair": _nonadjacent_pair,
    "all_equal": _all_equal,
    "hardness_dist2_degree1": _dist2_degree1,
}


def specialized_evaluator(name: str) -> Evaluator:
    try:
        return _SPECIALIZED[name]
    except KeyError:
        raise KeyError(f"no specialised evaluator for {name!r}") from None


# ---------------------------------------------------------------------------
# cached sentence checking for the solvers

class SentenceChecker:
    """Memoised ``graph[mask] |= f`` for one graph and one sentence.

    ``evaluator`` replaces generic model checking when given (it must agree
    with ``models`` on ``f``). The empty graph counts as a model, matching the
    convention that every elimination distance of the empty graph is 0.
    """

    def __init__(self, graph: Graph, f: Formula, evaluator: Evaluator | None = None):
        if not f.is_sentence:
            raise ArityError("SentenceChecker needs a sentence")
        self.graph = graph
        self.formula = f
        self.evaluator = evaluator
        self.cache: dict[int, bool] = {0: True}
        self.calls = 0

    def __call__(self, mask: int) -> bool:
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        self.calls += 1
        if self.evaluator is not None:
            val = bool(self.evaluator(self.graph.view(mask)))
        else:
            val = check_mask(self.graph, mask, self.formula)
        self.cache[mask] = val
        return val
