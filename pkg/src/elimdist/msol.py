"""Monadic second-order formulas for bounded elimination distance.

``emit_msol`` builds a sentence psi with ``G |= psi`` iff ``ed_variant(G) <= k``
and ``eval_msol`` evaluates such sentences by brute force over set
assignments, which makes it a cross-check for the exact solvers on tiny
graphs.

Subformulas are shared: psi_k refers to the same psi_{k-1} object several
times, so the node graph is a DAG and grows linearly in k even though the
rendered text grows exponentially.

Semantics. Every node is evaluated inside a domain (a vertex set of the input
graph). Quantifiers range over the domain or its subsets, ``comp`` refers to
the subgraph induced by the domain, and ``Within(S, body)`` evaluates
``body`` with the domain narrowed to S; this is how "the subgraph induced by
X models psi" is written. ``Phi(S)`` holds when the subgraph induced by S
models the first-order sentence; the empty graph counts as a model.

Rendered text: set quantifiers are written without a space ("AX", "EY"),
vertex quantifiers with one ("E x"), membership as "x in X", set difference
with a vertex as "X - x", intersection as "X & Y", complement as "co(X)" and
relativisation as "@[S] body" or "@[S; X := T] body".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Union

from .distance import Variant
from .formula import Adj, Eq, Formula, render_formula
from .graph import Graph, GraphLike, bits, component_of
from .modelcheck import SentenceChecker

DEFAULT_EVAL_CAP = 6


class MsolCapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# set expressions


@dataclass(frozen=True, eq=False)
class SetVar:
    name: str


@dataclass(frozen=True, eq=False)
class Minus:
    """S minus the vertex bound to ``var``."""

    base: "SetExpr"
    var: str


@dataclass(frozen=True, eq=False)
class Inter:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True, eq=False)
class Complement:
    """Domain minus S."""

    base: "SetExpr"


SetExpr = Union[SetVar, Minus, Inter, Complement]


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True, eq=False)
class VAtom:
    """A first-order atom (``Eq`` or ``Adj``) over vertex variables."""

    atom: Union[Eq, Adj]


@dataclass(frozen=True, eq=False)
class Member:
    var: str
    set: SetExpr


@dataclass(frozen=True, eq=False)
class IsEmpty:
    set: SetExpr


@dataclass(frozen=True, eq=False)
class Singleton:
    set: SetExpr


@dataclass(frozen=True, eq=False)
class SetEq:
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True, eq=False)
class Comp:
    """S induces a component of the domain."""

    set: SetExpr


@dataclass(frozen=True, eq=False)
class CompMinus:
    """S induces a component of the domain minus the vertex bound to ``var``."""

    set: SetExpr
    var: str


@dataclass(frozen=True, eq=False)
class Phi:
    """The subgraph induced by S models the first-order sentence."""

    sentence: Formula
    set: SetExpr


@dataclass(frozen=True, eq=False)
class MNot:
    arg: "MsolFormula"


@dataclass(frozen=True, eq=False)
class MAnd:
    args: tuple["MsolFormula", ...]


@dataclass(frozen=True, eq=False)
class MOr:
    args: tuple["MsolFormula", ...]


@dataclass(frozen=True, eq=False)
class MImplies:
    left: "MsolFormula"
    right: "MsolFormula"


@dataclass(frozen=True, eq=False)
class VQuant:
    exists: bool
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class SQuant:
    exists: bool
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class Within:
    """Evaluate ``body`` inside the domain S, rebinding set variables first.

    ``bind`` pairs are evaluated in the outer domain; S must lie inside it.
    """

    domain: SetExpr
    body: "MsolFormula"
    bind: tuple[tuple[str, SetExpr], ...] = ()


MsolFormula = Union[
    VAtom, Member, IsEmpty, Singleton, SetEq, Comp, CompMinus, Phi,
    MNot, MAnd, MOr, MImplies, VQuant, SQuant, Within,
]

_SET_TYPES = (SetVar, Minus, Inter, Complement)


def _children(node) -> tuple:
    if isinstance(node, (MAnd, MOr)):
        return node.args
    if isinstance(node, MNot):
        return (node.arg,)
    if isinstance(node, MImplies):
        return (node.left, node.right)
    if isinstance(node, (VQuant, SQuant)):
        return (node.body,)
    if isinstance(node, Within):
        return (node.domain, node.body) + tuple(e for _, e in node.bind)
    if isinstance(node, Minus):
        return (node.base,)
    if isinstance(node, Inter):
        return (node.left, node.right)
    if isinstance(node, Complement):
        return (node.base,)
    if isinstance(node, (Member, IsEmpty, Singleton, Comp, CompMinus, Phi)):
        return (node.set,)
    if isinstance(node, SetEq):
        return (node.left, node.right)
    return ()


def node_count(m) -> int:
    """Distinct nodes of the formula DAG (shared subterms counted once)."""
    seen: set[int] = set()
    stack = [m]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(_children(node))
    return len(seen)


def tree_size(m) -> int:
    """Node count of the fully expanded tree (size of the rendered text)."""
    memo: dict[int, int] = {}

    def size(node) -> int:
        hit = memo.get(id(node))
        if hit is None:
            hit = memo[id(node)] = 1 + sum(size(c) for c in _children(node))
        return hit

    return size(m)


# ---------------------------------------------------------------------------
# construction

X, Y, Z = SetVar("X"), SetVar("Y"), SetVar("Z")
EMPTY_X = IsEmpty(X)


def _exists_member(var: str, S: SetExpr, body) -> VQuant:
    return VQuant(True, var, MAnd((Member(var, S), body)))


def _forall_comp(body) -> SQuant:
    """AX (comp(X) -> body)."""
    return SQuant(False, "X", MImplies(Comp(X), body))


def _component_step(prev) -> MOr:
    """prev or every component X satisfies prev, or does after deleting one vertex."""
    return MOr((
        prev,
        _forall_comp(MOr((Within(X, prev), _exists_member("x", X, Within(Minus(X, "x"), prev))))),
    ))


@lru_cache(maxsize=None)
def _conn(f: Formula, k: int):
    if k == 0:
        return _forall_comp(Phi(f, X))
    return _component_step(_conn(f, k - 1))


@lru_cache(maxsize=None)
def _prop(f: Formula, k: int):
    if k == 0:
        return Phi(f, SetVar("V"))
    return _component_step(_prop(f, k - 1))


@lru_cache(maxsize=None)
def nice_depth_formula(d: int):
    """xi_d(X): X has a nice representation of depth <= d (connected domain)."""
    if d == -1:
        return EMPTY_X
    if d == 0:
        return MOr((EMPTY_X, Singleton(X)))
    prev = nice_depth_formula(d - 1)
    inner = Inter(X, Y)
    step = _exists_member(
        "x",
        X,
        SQuant(
            False,
            "Y",
            MImplies(
                MAnd((CompMinus(Y, "x"), MNot(IsEmpty(inner)))),
                Within(Y, prev, (("X", inner),)),
            ),
        ),
    )
    return MOr((prev, step))


@lru_cache(maxsize=None)
def depth_formula(d: int):
    """xi~_d(X): X is an elimination set of depth <= d (any domain)."""
    if d <= 0:
        return nice_depth_formula(d)
    prev = depth_formula(d - 1)
    step = SQuant(
        True,
        "Y",
        MAnd((
            Comp(Y),
            Within(Y, nice_depth_formula(d), (("X", Inter(X, Y)),)),
            SQuant(
                False,
                "Z",
                MImplies(
                    MAnd((Comp(Z), MNot(SetEq(Z, Y)))),
                    Within(Z, prev, (("X", Inter(X, Z)),)),
                ),
            ),
        )),
    )
    return MOr((prev, step))


@lru_cache(maxsize=None)
def _depth(f: Formula, k: int):
    return SQuant(True, "X", MAnd((depth_formula(k - 1), Phi(f, Complement(X)))))


def emit_msol(f: Formula, k: int, variant: Variant | str):
    """psi_k for the variant: G |= psi_k iff ed_variant(G, f) <= k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if not f.is_sentence:
        raise ValueError("the property must be a sentence")
    variant = Variant(variant)
    if variant is Variant.CONN:
        return _conn(f, k)
    if variant is Variant.PROP:
        return _prop(f, k)
    return _depth(f, k)


# ---------------------------------------------------------------------------
# rendering


def render_set(e: SetExpr) -> str:
    if isinstance(e, SetVar):
        return e.name
    if isinstance(e, Minus):
        return f"{render_set(e.base)} - {e.var}"
    if isinstance(e, Inter):
        return f"{render_set(e.left)} & {render_set(e.right)}"
    return f"co({render_set(e.base)})"


def render_msol(m) -> str:
    if isinstance(m, VAtom):
        op = "=" if isinstance(m.atom, Eq) else "~"
        return f"({m.atom.a} {op} {m.atom.b})"
    if isinstance(m, Member):
        return f"({m.var} in {render_set(m.set)})"
    if isinstance(m, IsEmpty):
        return f"({render_set(m.set)} = {{}})"
    if isinstance(m, Singleton):
        return f"(|{render_set(m.set)}| = 1)"
    if isinstance(m, SetEq):
        return f"({render_set(m.left)} = {render_set(m.right)})"
    if isinstance(m, Comp):
        return f"comp({render_set(m.set)})"
    if isinstance(m, CompMinus):
        return f"comp({render_set(m.set)}, {m.var})"
    if isinstance(m, Phi):
        if isinstance(m.set, SetVar) and m.set.name == "V":
            return render_formula(m.sentence)
        return f"phi({render_set(m.set)})"
    if isinstance(m, MNot):
        return "!" + render_msol(m.arg)
    if isinstance(m, MAnd):
        return "(" + " & ".join(render_msol(a) for a in m.args) + ")"
    if isinstance(m, MOr):
        return "(" + " | ".join(render_msol(a) for a in m.args) + ")"
    if isinstance(m, MImplies):
        return f"({render_msol(m.left)} -> {render_msol(m.right)})"
    if isinstance(m, VQuant):
        return f"{'E' if m.exists else 'A'} {m.var} {render_msol(m.body)}"
    if isinstance(m, SQuant):
        return f"{'E' if m.exists else 'A'}{m.var} {render_msol(m.body)}"
    head = render_set(m.domain)
    if m.bind:
        head += "; " + ", ".join(f"{n} := {render_set(e)}" for n, e in m.bind)
    return f"@[{head}] {render_msol(m.body)}"


# ---------------------------------------------------------------------------
# evaluation


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class _Evaluator:
    def __init__(self, graph: Graph):
        self.graph = graph
        self.checkers: dict[Formula, SentenceChecker] = {}

    def set_value(self, e: SetExpr, dom: int, sets: dict, verts: dict) -> int:
        if isinstance(e, SetVar):
            return dom if e.name == "V" and "V" not in sets else sets[e.name]
        if isinstance(e, Minus):
            return self.set_value(e.base, dom, sets, verts) & ~(1 << verts[e.var])
        if isinstance(e, Inter):
            return self.set_value(e.left, dom, sets, verts) & self.set_value(e.right, dom, sets, verts)
        return dom & ~self.set_value(e.base, dom, sets, verts)

    def is_component(self, S: int, within: int) -> bool:
        if S == 0 or S & ~within:
            return False
        return component_of(self.graph, within, (S & -S).bit_length() - 1) == S

    def phi(self, f: Formula, S: int) -> bool:
        checker = self.checkers.get(f)
        if checker is None:
            checker = self.checkers[f] = SentenceChecker(self.graph, f)
        return checker(S)

    def ev(self, m, dom: int, sets: dict, verts: dict) -> bool:
        if isinstance(m, VAtom):
            a, b = verts[m.atom.a], verts[m.atom.b]
            if isinstance(m.atom, Eq):
                return a == b
            return bool(self.graph.adj[a] >> b & 1)
        if isinstance(m, Member):
            return bool(self.set_value(m.set, dom, sets, verts) >> verts[m.var] & 1)
        if isinstance(m, IsEmpty):
            return self.set_value(m.set, dom, sets, verts) == 0
        if isinstance(m, Singleton):
            return bin(self.set_value(m.set, dom, sets, verts)).count("1") == 1
        if isinstance(m, SetEq):
            return self.set_value(m.left, dom, sets, verts) == self.set_value(m.right, dom, sets, verts)
        if isinstance(m, Comp):
            return self.is_component(self.set_value(m.set, dom, sets, verts), dom)
        if isinstance(m, CompMinus):
            within = dom & ~(1 << verts[m.var])
            return self.is_component(self.set_value(m.set, dom, sets, verts), within)
        if isinstance(m, Phi):
            return self.phi(m.sentence, self.set_value(m.set, dom, sets, verts))
        if isinstance(m, MNot):
            return not self.ev(m.arg, dom, sets, verts)
        if isinstance(m, MAnd):
            return all(self.ev(a, dom, sets, verts) for a in m.args)
        if isinstance(m, MOr):
            return any(self.ev(a, dom, sets, verts) for a in m.args)
        if isinstance(m, MImplies):
            return not self.ev(m.left, dom, sets, verts) or self.ev(m.right, dom, sets, verts)
        if isinstance(m, VQuant):
            test = any if m.exists else all
            return test(self.ev(m.body, dom, sets, {**verts, m.var: v}) for v in bits(dom))
        if isinstance(m, SQuant):
            test = any if m.exists else all
            return test(self.ev(m.body, dom, {**sets, m.var: S}, verts) for S in _submasks(dom))
        inner = self.set_value(m.domain, dom, sets, verts)
        if m.bind:
            sets = {**sets, **{n: self.set_value(e, dom, sets, verts) for n, e in m.bind}}
        return self.ev(m.body, inner & dom, sets, verts)


def eval_msol(g: GraphLike, m, cap: int = DEFAULT_EVAL_CAP, free_sets: dict | None = None) -> bool:
    """Truth of m on g; set quantifiers enumerate all subsets, so |V(g)| <= cap."""
    if g.n > cap:
        raise MsolCapError(f"{g.n} vertices exceed the MSOL evaluation cap of {cap}")
    sets = {}
    for name, val in (free_sets or {}).items():
        sets[name] = val if isinstance(val, int) else sum(1 << v for v in val)
    return _Evaluator(g.graph).ev(m, g.mask, sets, {})


def comp_by_definition(g: GraphLike, S: int) -> bool:
    """S induces a component, checked through partitions only.

    S is connected when every split (U, S - U) into nonempty parts has a
    crossing edge, and maximal when adding any outside vertex breaks that.
    """
    graph, dom = g.graph, g.mask

    def connected(T: int) -> bool:
        if T == 0:
            return False
        verts = list(bits(T))
        first, rest = verts[0], verts[1:]
        for size in range(len(rest)):
            for chosen in combinations(rest, size):
                U = (1 << first) | sum(1 << v for v in chosen)
                W = T & ~U
                if not any(graph.adj[u] & W for u in bits(U)):
                    return False
        return True

    if S & ~dom or not connected(S):
        return False
    return not any(connected(S | (1 << v)) for v in bits(dom & ~S))


__all__ = [
    "DEFAULT_EVAL_CAP",
    "MsolCapError",
    "comp_by_definition",
    "depth_formula",
    "emit_msol",
    "eval_msol",
    "nice_depth_formula",
    "node_count",
    "render_msol",
    "tree_size",
]
