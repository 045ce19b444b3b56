"""Undirected simple graphs over dense integer ids, with bitmask vertex sets.

A vertex set is a Python int whose bit ``v`` is set when ``v`` belongs to it.
``InducedSubgraph`` is a view (parent graph plus mask); vertex ids are always
those of the parent, so tuples of vertices stay meaningful across nested views.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Union

import numpy as np


class GraphError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bitmask helpers

def bits(mask: int) -> Iterator[int]:
    """Set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def low_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------------------
# graph types

class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels=None):
        if n < 0:
            raise GraphError("negative vertex count")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.adj: tuple[int, ...] = tuple(adj)
        self.labels = tuple(labels) if labels is not None else None
        self.full = (1 << n) - 1

    # a Graph is its own full view
    @property
    def graph(self) -> "Graph":
        return self

    @property
    def mask(self) -> int:
        return self.full

    @cached_property
    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for u in range(self.n):
            for v in bits(self.adj[u]):
                a[u, v] = 1
        return a

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def view(self, vertices: Iterable[int] | int) -> "InducedSubgraph":
        mask = to_mask(vertices)
        if mask & ~self.full:
            raise GraphError("vertex set not contained in the graph")
        return InducedSubgraph(self, mask)

    def vertices(self) -> list[int]:
        return list(range(self.n))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges())})"


@dataclass(frozen=True)
class InducedSubgraph:
    """The subgraph of ``parent`` induced by ``mask``; ids are the parent's."""

    parent: Graph
    mask: int

    @property
    def graph(self) -> Graph:
        return self.parent

    @property
    def n(self) -> int:
        return popcount(self.mask)

    def vertices(self) -> list[int]:
        return list(bits(self.mask))

    def edges(self) -> list[tuple[int, int]]:
        adj = self.parent.adj
        return [(u, v) for u in bits(self.mask) for v in bits(adj[u] & self.mask) if u < v]

    def view(self, vertices: Iterable[int] | int) -> "InducedSubgraph":
        mask = to_mask(vertices)
        if mask & ~self.mask:
            raise GraphError("vertex set not contained in the view")
        return InducedSubgraph(self.parent, mask)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"InducedSubgraph(parent={self.parent!r}, vertices={self.vertices()})"


GraphLike = Union[Graph, InducedSubgraph]


@dataclass(frozen=True)
class Separation:
    A: frozenset[int]
    B: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.A & self.B)


# ---------------------------------------------------------------------------
# constructors

def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges.extend((u + off, v + off) for u, v in g.edges())
        off += g.n
    return Graph(off, edges)


def from_adjacency_masks(adj: Iterable[int]) -> Graph:
    adj = list(adj)
    return Graph(len(adj), [(u, v) for u in range(len(adj)) for v in bits(adj[u]) if u < v])


# ---------------------------------------------------------------------------
# core operations

def neighbors_mask(graph: Graph, S: int, within: int) -> int:
    """Open neighbourhood of mask ``S`` inside ``within``."""
    adj = graph.adj
    out = 0
    for v in bits(S):
        out |= adj[v]
    return out & within & ~S


def component_masks(graph: Graph, within: int) -> list[int]:
    """Components of ``graph[within]`` as masks, ordered by minimum vertex."""
    adj = graph.adj
    comps = []
    rest = within
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nb = 0
            for v in bits(frontier):
                nb |= adj[v]
            frontier = nb & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def is_connected_mask(graph: Graph, within: int) -> bool:
    return within == 0 or len(component_masks(graph, within)) == 1


def component_of(graph: Graph, within: int, v: int) -> int:
    """Mask of the component of ``graph[within]`` containing ``v``."""
    adj = graph.adj
    comp = frontier = 1 << v
    while frontier:
        nb = 0
        for u in bits(frontier):
            nb |= adj[u]
        frontier = nb & within & ~comp
        comp |= frontier
    return comp


def components(g: GraphLike) -> list[frozenset[int]]:
    return [from_mask(c) for c in component_masks(g.graph, g.mask)]


def neighborhood(g: GraphLike, S: Iterable[int] | int, closed: bool = False) -> frozenset[int]:
    S = to_mask(S)
    if S & ~g.mask:
        raise GraphError("S is not a subset of V(g)")
    out = neighbors_mask(g.graph, S, g.mask)
    return from_mask(out | S if closed else out)


def _split_sizes(sizes: list[int], p: int) -> int | None:
    """Bitmask over ``sizes`` of a group whose total and complement both exceed p."""
    total = sum(sizes)
    if total < 2 * (p + 1):
        return None
    reach = {0: 0}  # sum -> index mask reaching it
    for i, s in enumerate(sizes):
        for acc, chosen in list(reach.items()):
            t = acc + s
            if t not in reach:
                reach[t] = chosen | (1 << i)
    for acc in sorted(reach):
        if p + 1 <= acc <= total - p - 1:
            return reach[acc]
    return None


def is_unbreakable(g: GraphLike, p: int, q: int) -> tuple[bool, Separation | None]:
    """Decide (p, q)-unbreakability; on failure also return a witness separation."""
    if p < 1 or q < 1:
        raise GraphError("p and q must be positive")
    graph, mask = g.graph, g.mask
    verts = list(bits(mask))
    for size in range(0, min(q, len(verts)) + 1):
        for sep in combinations(verts, size):
            smask = to_mask(sep)
            comps = component_masks(graph, mask & ~smask)
            chosen = _split_sizes([popcount(c) for c in comps], p)
            if chosen is None:
                continue
            left = 0
            for i in bits(chosen):
                left |= comps[i]
            right = mask & ~smask & ~left
            return False, Separation(from_mask(left | smask), from_mask(right | smask))
    return True, None


def torso(g: GraphLike, X: Iterable[int] | int) -> InducedSubgraph:
    """G[X] plus an edge between any two X-vertices seen by a common component of G - X."""
    graph, mask = g.graph, g.mask
    X = to_mask(X)
    if X & ~mask:
        raise GraphError("X is not a subset of V(g)")
    edges = set()
    for u in bits(X):
        for v in bits(graph.adj[u] & X):
            if u < v:
                edges.add((u, v))
    for comp in component_masks(graph, mask & ~X):
        attach = sorted(bits(neighbors_mask(graph, comp, X)))
        edges.update(combinations(attach, 2))
    return Graph(graph.n, sorted(edges)).view(X)


def tree_depth(g: GraphLike, forest: bool = False) -> int:
    """Exact tree-depth by the elimination recursion, memoised on vertex masks.

    By default the elimination tree must be a single rooted tree, matching
    the tree representations of elimination sets: on a disconnected graph one
    component keeps its height and the others hang below its root.
    ``forest=True`` gives the classical value, the maximum over components.
    The two agree on connected graphs.
    """
    graph = g.graph
    memo: dict[int, int] = {}

    def td(mask: int) -> int:
        if mask == 0:
            return 0
        if mask in memo:
            return memo[mask]
        comps = component_masks(graph, mask)
        if len(comps) > 1:
            val = max(td(c) for c in comps)
        elif mask & (mask - 1) == 0:
            val = 1
        else:
            val = 1 + min(td(mask & ~(1 << v)) for v in bits(mask))
        memo[mask] = val
        return val

    vals = [td(c) for c in component_masks(graph, g.mask)]
    if forest or len(vals) <= 1:
        return max(vals, default=0)
    return min(
        max(vals[i], max(vals[j] + 1 for j in range(len(vals)) if j != i))
        for i in range(len(vals))
    )


# ---------------------------------------------------------------------------
# file formats

def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_edgelist(text: str) -> Graph:
    lines = _content_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise GraphError("empty edge-list input") from None
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise GraphError(f"line {no}: expected 'n m'") from None
    edges = []
    for no, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {no}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not 0 <= u < v < n:
            raise GraphError(f"line {no}: need 0 <= u < v < n")
        edges.append((u, v))
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    if len(set(edges)) != len(edges):
        raise GraphError("duplicate edge")
    return Graph(n, edges)


def format_edgelist(g: GraphLike) -> str:
    """Edge list of ``g``; a view is relabelled to 0..|V|-1 in id order."""
    if isinstance(g, InducedSubgraph):
        index = {v: i for i, v in enumerate(g.vertices())}
        n, edges = len(index), [(index[u], index[v]) for u, v in g.edges()]
    else:
        n, edges = g.n, g.edges()
    lines = [f"{n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    n = None
    edges = set()
    for no, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {no}: edge before problem line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u != v:
                edges.add((min(u, v), max(u, v)))
    if n is None:
        raise GraphError("missing 'p edge n m' line")
    return Graph(n, sorted(edges))


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".col"):
        return parse_dimacs(text)
    return parse_edgelist(text)


def save_graph(g: GraphLike, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edgelist(g))
