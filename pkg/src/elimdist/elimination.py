"""Elimination sets and their tree representations.

A representation of ``X`` is a rooted tree ``T`` with a bijection ``alpha``
from its nodes onto ``X`` such that, for incomparable nodes ``x`` and ``y``
with lowest common ancestor ``v``, the images of the root-to-``v`` path
separate ``alpha(x)`` from ``alpha(y)``. Trees are stored as parent arrays;
node ``i`` maps to vertex ``alpha[i]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

from .graph import (
    Graph,
    GraphError,
    GraphLike,
    bits,
    component_masks,
    from_mask,
    neighbors_mask,
    to_mask,
)

# mask -> does graph[mask] model the property
MaskCheck = Callable[[int], bool]


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class EliminationRepresentation:
    parent: tuple[int, ...]
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.parent) != len(self.alpha):
            raise RepresentationError("parent and alpha lengths differ")
        if len(set(self.alpha)) != len(self.alpha):
            raise RepresentationError("alpha is not injective")
        roots = [i for i, p in enumerate(self.parent) if p == -1]
        if self.parent and len(roots) != 1:
            raise RepresentationError("a representation needs exactly one root")
        for i in range(len(self.parent)):
            seen, j = set(), i
            while j != -1:
                if j in seen or not (-1 <= self.parent[j] < len(self.parent)):
                    raise RepresentationError("parent array is not a rooted tree")
                seen.add(j)
                j = self.parent[j]

    @property
    def size(self) -> int:
        return len(self.alpha)

    @property
    def root(self) -> int | None:
        return self.parent.index(-1) if self.parent else None

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.alpha)

    @cached_property
    def mask(self) -> int:
        return to_mask(self.alpha)

    @cached_property
    def node_depths(self) -> tuple[int, ...]:
        out = []
        for i in range(len(self.parent)):
            d, j = 0, self.parent[i]
            while j != -1:
                d += 1
                j = self.parent[j]
            out.append(d)
        return tuple(out)

    @property
    def depth(self) -> int:
        return max(self.node_depths, default=-1)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for i, p in enumerate(self.parent):
            if p != -1:
                ch[p].append(i)
        return tuple(tuple(c) for c in ch)

    def ancestors(self, node: int) -> list[int]:
        """Nodes on the path from ``node`` up to the root, ``node`` included."""
        out = []
        while node != -1:
            out.append(node)
            node = self.parent[node]
        return out

    def node_of(self, vertex: int) -> int:
        return self.alpha.index(vertex)

    def is_leaf(self, node: int) -> bool:
        return not self.children[node]

    def vertex_depths(self) -> dict[int, int]:
        return {self.alpha[i]: d for i, d in enumerate(self.node_depths)}

    def to_dict(self) -> dict:
        return {"tree": list(self.parent), "alpha": list(self.alpha)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "EliminationRepresentation":
        return cls(tuple(int(p) for p in data["tree"]), tuple(int(a) for a in data["alpha"]))

    @classmethod
    def from_json(cls, text: str) -> "EliminationRepresentation":
        return cls.from_dict(json.loads(text))


EMPTY = EliminationRepresentation((), ())


# ---------------------------------------------------------------------------
# small tree builders (nested (vertex, [children]) tuples -> parent arrays)

Nested = tuple  # (vertex, list of Nested)


def from_nested(tree: Nested | None) -> EliminationRepresentation:
    if tree is None:
        return EMPTY
    parent: list[int] = []
    alpha: list[int] = []

    def walk(node: Nested, par: int) -> None:
        me = len(alpha)
        parent.append(par)
        alpha.append(node[0])
        for child in node[1]:
            walk(child, me)

    walk(tree, -1)
    return EliminationRepresentation(tuple(parent), tuple(alpha))


def to_nested(rep: EliminationRepresentation, node: int | None = None) -> Nested | None:
    if node is None:
        node = rep.root
        if node is None:
            return None
    return (rep.alpha[node], [to_nested(rep, c) for c in rep.children[node]])


# ---------------------------------------------------------------------------
# validation and anchors

def _check_subset(g: GraphLike, X: int) -> None:
    if X & ~g.mask:
        raise GraphError("vertex set is not contained in the graph")


def _reach(graph: Graph, within: int, src: int) -> int:
    comp = frontier = 1 << src
    while frontier:
        nb = 0
        for v in bits(frontier):
            nb |= graph.adj[v]
        frontier = nb & within & ~comp
        comp |= frontier
    return comp


def validate_representation(g: GraphLike, rep: EliminationRepresentation) -> bool:
    graph, mask = g.graph, g.mask
    _check_subset(g, rep.mask)
    n = rep.size
    anc = [set(rep.ancestors(i)) for i in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            if x in anc[y] or y in anc[x]:
                continue
            common = anc[x] & anc[y]
            lca = max(common, key=lambda z: rep.node_depths[z])
            sep = to_mask(rep.alpha[z] for z in rep.ancestors(lca))
            if _reach(graph, mask & ~sep, rep.alpha[x]) >> rep.alpha[y] & 1:
                return False
    return True


def anchors(g: GraphLike, rep: EliminationRepresentation) -> dict[frozenset[int], int]:
    """Anchor node of every component of G - X.

    Components with no neighbour in X are anchored at the root.
    """
    if not validate_representation(g, rep):
        raise RepresentationError("invalid representation")
    graph, mask = g.graph, g.mask
    out: dict[frozenset[int], int] = {}
    depths = rep.node_depths
    for comp in component_masks(graph, mask & ~rep.mask):
        nb = neighbors_mask(graph, comp, rep.mask)
        if nb == 0:
            out[from_mask(comp)] = rep.root
            continue
        nodes = [rep.node_of(v) for v in bits(nb)]
        anchor = max(nodes, key=lambda z: (depths[z], -z))
        path = to_mask(rep.alpha[z] for z in rep.ancestors(anchor))
        if nb & ~path:
            raise RepresentationError("component neighbourhood leaves the anchor path")
        out[from_mask(comp)] = anchor
    return out


def anchored_masks(graph: Graph, mask: int, rep: EliminationRepresentation) -> dict[int, list[int]]:
    """Node -> component masks of graph[mask] - X anchored there (no validation)."""
    out: dict[int, list[int]] = {i: [] for i in range(rep.size)}
    depths = rep.node_depths
    for comp in component_masks(graph, mask & ~rep.mask):
        nb = neighbors_mask(graph, comp, rep.mask)
        if nb == 0:
            out[rep.root].append(comp)
            continue
        anchor = max((rep.node_of(v) for v in bits(nb)), key=lambda z: (depths[z], -z))
        out[anchor].append(comp)
    return out


# ---------------------------------------------------------------------------
# depth

class _DepthSearch:
    """Backtracking search for low-depth representations of a fixed X."""

    def __init__(self, graph: Graph, X: int):
        self.graph = graph
        self.X = X
        self.tree_memo: dict[tuple[int, int], Nested | None | bool] = {}

    def forest(self, mask: int, d: int) -> list[Nested] | None:
        """One tree per component of graph[mask] meeting X, each of depth <= d."""
        out = []
        for comp in component_masks(self.graph, mask):
            if comp & self.X:
                t = self.tree(comp, d)
                if t is None:
                    return None
                out.append(t)
        return out

    def tree(self, comp: int, d: int) -> Nested | None:
        """Nice tree for X within the connected set ``comp``, depth <= d."""
        key = (comp, d)
        if key in self.tree_memo:
            return self.tree_memo[key]
        res = None
        xs = comp & self.X
        if d >= 0:
            for x in bits(xs):
                rest = self.forest(comp & ~(1 << x), d - 1)
                if rest is not None:
                    res = (x, rest)
                    break
        self.tree_memo[key] = res
        return res

    def at_most(self, mask: int, d: int) -> Nested | None | bool:
        """A single tree of depth <= d for X inside graph[mask] (on a disconnected domain one component
        keeps the root and the others hang below it)."""
        if self.X & mask == 0:
            return True if d >= -1 else False
        if d < 0:
            return False
        comps = [c for c in component_masks(self.graph, mask) if c & self.X]
        if len(comps) == 1:
            t = self.tree(comps[0], d)
            return False if t is None else t
        # one component may use the full budget, the others hang below its root
        low = [self.tree(c, d - 1) for c in comps]
        for i, c in enumerate(comps):
            if any(low[j] is None for j in range(len(comps)) if j != i):
                continue
            top = low[i] if low[i] is not None else self.tree(c, d)
            if top is None:
                continue
            others = [low[j] for j in range(len(comps)) if j != i]
            return (top[0], list(top[1]) + others)
        return False


def depth_at_most(g: GraphLike, X: Iterable[int] | int, d: int) -> EliminationRepresentation | None:
    """A representation of X with depth <= d, or None."""
    X = to_mask(X)
    _check_subset(g, X)
    if d < -1:
        return None
    res = _DepthSearch(g.graph, X).at_most(g.mask, d)
    if res is False:
        return None
    if res is True:
        return EMPTY
    return from_nested(res)


def depth_with_rep(g: GraphLike, X: Iterable[int] | int) -> tuple[int, EliminationRepresentation]:
    X = to_mask(X)
    _check_subset(g, X)
    search = _DepthSearch(g.graph, X)
    d = -1
    while True:
        res = search.at_most(g.mask, d)
        if res is not False:
            return d, (EMPTY if res is True else from_nested(res))
        d += 1


def depth(g: GraphLike, X: Iterable[int] | int) -> int:
    return depth_with_rep(g, X)[0]


def make_nice(g: GraphLike, rep: EliminationRepresentation) -> EliminationRepresentation:
    """Rehang ``rep`` into a nice representation of the same set.

    Needs a connected ``g``. Every node keeps its image, no node gets deeper,
    and leaves stay leaves.
    """
    graph, mask = g.graph, g.mask
    if len(component_masks(graph, mask)) > 1:
        raise GraphError("make_nice needs a connected graph")
    if rep.size == 0:
        return rep
    anc = [set(rep.ancestors(i)) for i in range(rep.size)]
    depths = rep.node_depths
    new_parent = [-1] * rep.size

    def top_node(nodes: list[int]) -> int:
        tops = [u for u in nodes if not any(w in anc[u] for w in nodes if w != u)]
        if len(tops) != 1:
            raise RepresentationError("invalid representation")
        return tops[0]

    def build(region: int, nodes: list[int]) -> int:
        root = top_node(nodes)
        rest = region & ~(1 << rep.alpha[root])
        for comp in component_masks(graph, rest):
            sub = [u for u in nodes if comp >> rep.alpha[u] & 1]
            if sub:
                new_parent[build(comp, sub)] = root
        return root

    build(mask, sorted(range(rep.size), key=lambda u: depths[u]))
    return EliminationRepresentation(tuple(new_parent), rep.alpha)


def is_nice(g: GraphLike, rep: EliminationRepresentation) -> bool:
    graph, mask = g.graph, g.mask
    for v in range(rep.size):
        if rep.is_leaf(v):
            continue
        sep = to_mask(rep.alpha[z] for z in rep.ancestors(v))
        for child in rep.children[v]:
            below = _subtree_mask(rep, child)
            first = rep.alpha[child]
            if below & ~_reach(graph, mask & ~sep, first):
                return False
    return True


def _subtree_mask(rep: EliminationRepresentation, node: int) -> int:
    out = 1 << rep.alpha[node]
    for c in rep.children[node]:
        out |= _subtree_mask(rep, c)
    return out


# ---------------------------------------------------------------------------
# representations satisfying the ed_prop leaf/non-leaf conditions

def _prop_tree(graph: Graph, comp: int, X: int, x: int, k: int, check: MaskCheck) -> Nested | None:
    """Nice tree rooted at ``x`` for X within the connected set ``comp``."""
    xs = comp & X
    rest = comp & ~(1 << x)
    if xs == 1 << x:
        if check(rest):
            return (x, [])
        if k >= 2 and all(check(c) for c in component_masks(graph, rest)):
            return (x, [])
        return None
    if k == 1:
        return None
    subtrees = []
    for c in component_masks(graph, rest):
        xc = c & X
        if xc == 0:
            if not check(c):
                return None
            continue
        found = None
        for y in bits(xc):
            found = _prop_tree(graph, c, X, y, k - 1, check)
            if found is not None:
                break
        if found is None:
            return None
        subtrees.append(found)
    return (x, subtrees)


def prop_representation(
    g: GraphLike, X: Iterable[int] | int, k: int, check: MaskCheck
) -> EliminationRepresentation | None:
    """A nice representation of X of depth <= k-1 meeting the ed_prop conditions.

    Non-leaf nodes: every component anchored there models the property.
    Leaves at depth <= k-2: either their anchored union models it or every
    anchored component does. Leaves at depth k-1: the anchored union models it.
    ``check(mask)`` decides whether the induced subgraph on ``mask`` models it.
    """
    X = to_mask(X)
    _check_subset(g, X)
    graph, mask = g.graph, g.mask
    if len(component_masks(graph, mask)) != 1:
        raise GraphError("prop_representation needs a connected graph")
    if X == 0 or k < 1:
        raise ValueError("need a nonempty X and k >= 1")
    for x in bits(X):
        t = _prop_tree(graph, mask, X, x, k, check)
        if t is not None:
            return from_nested(t)
    return None


def satisfies_prop_conditions(
    g: GraphLike, rep: EliminationRepresentation, k: int, check: MaskCheck
) -> bool:
    """Check the ed_prop conditions for a given representation of depth <= k-1."""
    if rep.depth > k - 1:
        return False
    graph, mask = g.graph, g.mask
    anchored = anchored_masks(graph, mask, rep)
    for node in range(rep.size):
        comps = anchored[node]
        union = 0
        for c in comps:
            union |= c
        every = all(check(c) for c in comps)
        if not rep.is_leaf(node):
            if not every:
                return False
        elif rep.node_depths[node] <= k - 2:
            if not (check(union) or every):
                return False
        elif not check(union):
            return False
    return True
