import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elimdist import catalog
from elimdist.distance import (
    ExactSolver,
    SizeCapError,
    Variant,
    deletion_distance_at_most,
    ed_conn,
    ed_conn_via_sets,
    ed_depth,
    ed_prop,
    ed_prop_via_sets,
    validate_witness,
)
from elimdist.elimination import EMPTY, depth
from elimdist.graph import (
    Graph,
    complete,
    component_masks,
    cycle,
    disjoint_union,
    empty,
    path,
    star,
    tree_depth,
)
from elimdist.modelcheck import SentenceChecker, models

from conftest import all_graphs, graph_from_bits, random_graphs

NAMES = ("triangle_free", "diameter_le_2", "nonadjacent_pair", "all_equal")


# ---------------------------------------------------------------------------
# direct oracles, written from the recursive definitions without memo sharing

def conn_oracle(g, f):
    if g.n == 0:
        return 0
    comps = [sorted(c) for c in _components(g)]
    if len(comps) > 1:
        return max(conn_oracle(_induced(g, c), f) for c in comps)
    if models(g, f):
        return 0
    return 1 + min(conn_oracle(_induced(g, [u for u in range(g.n) if u != v]), f) for v in range(g.n))


def prop_oracle(g, f):
    if g.n == 0 or models(g, f):
        return 0
    comps = [sorted(c) for c in _components(g)]
    if len(comps) == 1:
        return 1 + min(prop_oracle(_induced(g, [u for u in range(g.n) if u != v]), f) for v in range(g.n))
    return max(1, max(prop_oracle(_induced(g, c), f) for c in comps))


def _components(g):
    seen, out = set(), []
    for s in range(g.n):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for w in range(g.n):
                if g.adj[u] >> w & 1 and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(comp)
    return out


def _induced(g, verts):
    idx = {v: i for i, v in enumerate(verts)}
    return Graph(len(verts), [(idx[u], idx[v]) for u, v in itertools.combinations(verts, 2) if g.adj[u] >> v & 1])


# ---------------------------------------------------------------------------
# point values

@pytest.mark.parametrize("n", [2, 3, 5])
def test_edgeless_all_equal(n):
    f = catalog.get("all_equal")
    assert ed_conn(empty(n), f) == 0
    assert ed_prop(empty(n), f) == 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_clique_nonadjacent_pair(n):
    f = catalog.get("nonadjacent_pair")
    assert ed_conn(complete(n), f) == n
    g = disjoint_union(complete(n), complete(1))
    assert ed_prop(g, f) == 0
    assert ed_conn(g, f) - ed_prop(g, f) == n


def test_model_gives_zero():
    f = catalog.get("diameter_le_2")
    for g in (path(3), star(4), cycle(5)):
        assert ed_conn(g, f) == ed_prop(g, f) == ed_depth(g, f) == 0


def test_empty_graph_is_zero():
    f = catalog.get("nonadjacent_pair")
    g = empty(0)
    assert ed_conn(g, f) == ed_prop(g, f) == ed_depth(g, f) == 0


def test_prop_single_deletion():
    # K4 minus an edge: two triangles sharing an edge, one deletion clears both
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    f = catalog.get("triangle_free")
    assert not models(g, f)
    assert ed_prop(g, f) == 1


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_depth_of_cliques_triangle_free(m):
    # deleting any m-2 vertices of K_m is necessary; a clique set of size s has depth s-1
    f = catalog.get("triangle_free")
    assert ed_depth(complete(m), f) == m - 2


def test_depth_k3():
    assert ed_depth(complete(3), catalog.get("triangle_free")) == 1


# ---------------------------------------------------------------------------
# agreement with plain recursive oracles

@pytest.mark.parametrize("name", NAMES)
def test_recursion_matches_oracle(name, rng):
    f = catalog.get(name)
    graphs = list(all_graphs(4)) + list(random_graphs(rng, 5, 25))
    for g in graphs:
        assert ed_conn(g, f) == conn_oracle(g, f)
        assert ed_prop(g, f) == prop_oracle(g, f)


def _depth_brute(g, f):
    full = (1 << g.n) - 1
    check = SentenceChecker(g, f)  # counts the empty graph as a model
    best = None
    for X in range(1 << g.n):
        if not check(full & ~X):
            continue
        val = depth(g, X) + 1
        best = val if best is None else min(best, val)
    return best


@pytest.mark.parametrize("name", NAMES)
def test_depth_matches_subset_brute_force(name, rng):
    f = catalog.get(name)
    for g in list(random_graphs(rng, 5, 20)) + [complete(4), cycle(5), disjoint_union(complete(3), complete(3))]:
        assert ed_depth(g, f) == _depth_brute(g, f)


# ---------------------------------------------------------------------------
# characterisations

@pytest.mark.parametrize("name", NAMES)
def test_conn_characterisation(name, rng):
    f = catalog.get(name)
    for g in random_graphs(rng, 5, 30, density=0.6):
        if len(component_masks(g, g.mask)) > 1:
            continue
        val = ed_conn(g, f)
        for k in range(4):
            res = ed_conn_via_sets(g, f, k)
            assert res.verdict == (val <= k)
            if res.verdict:
                assert validate_witness(g, f, "conn", k, res.witness, res.representation)


@pytest.mark.parametrize("name", NAMES)
def test_prop_characterisation(name, rng):
    f = catalog.get(name)
    for g in random_graphs(rng, 5, 30, density=0.6):
        if len(component_masks(g, g.mask)) > 1 or models(g, f):
            continue
        val = ed_prop(g, f)
        for k in range(1, 4):
            res = ed_prop_via_sets(g, f, k)
            assert res.verdict == (val <= k)
            if res.verdict:
                assert validate_witness(g, f, "prop", k, res.witness, res.representation)


def test_via_sets_k0_is_component_check():
    f = catalog.get("triangle_free")
    assert ed_conn_via_sets(path(4), f, 0).verdict
    assert not ed_conn_via_sets(complete(3), f, 0).verdict


@pytest.mark.parametrize("n", [3, 4])
def test_via_sets_cliques(n):
    f = catalog.get("nonadjacent_pair")
    assert not ed_conn_via_sets(complete(n), f, n - 1).verdict
    assert ed_conn_via_sets(complete(n), f, n).verdict


def test_via_sets_reject_disconnected():
    f = catalog.get("triangle_free")
    g = empty(2)
    with pytest.raises(ValueError):
        ed_conn_via_sets(g, f, 1)
    with pytest.raises(ValueError):
        ed_prop_via_sets(g, f, 1)
    with pytest.raises(ValueError):
        ed_prop_via_sets(path(3), f, 0)


# ---------------------------------------------------------------------------
# invariants

@given(st.integers(0, (1 << 10) - 1), st.sampled_from(NAMES))
def test_prop_at_most_conn_plus_one(sel, name):
    g = graph_from_bits(5, sel)
    f = catalog.get(name)
    assert ed_prop(g, f) <= ed_conn(g, f) + 1


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_prop_conn_bound_tight_on_edgeless(n):
    f = catalog.get("all_equal")
    assert ed_prop(empty(n), f) == ed_conn(empty(n), f) + 1


def clique_minus_matching(n, m):
    missing = {(2 * i, 2 * i + 1) for i in range(m)}
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if e not in missing])


@pytest.mark.parametrize("n,m", [(4, 1), (5, 1), (5, 2), (6, 2), (6, 3)])
@pytest.mark.parametrize("name", ["triangle_free", "nonadjacent_pair", "all_equal"])
def test_deletion_collapse_on_dense_graphs(n, m, name):
    # K_n minus a matching of size m is (n-2)-connected
    g = clique_minus_matching(n, m)
    f = catalog.get(name)
    solver = ExactSolver(g, f)
    for k in range(0, n - 2):
        want = deletion_distance_at_most(g, f, k)
        assert (solver.conn() <= k) == want
        assert (solver.prop() <= k) == want
        assert bool(solver.depth_at_most(k).verdict) == want


@given(st.integers(0, (1 << 15) - 1))
def test_tree_depth_is_depth_of_everything_plus_one(sel):
    g = graph_from_bits(6, sel)
    assert tree_depth(g) == depth(g, g.mask) + 1


def test_tree_depth_zero_on_empty():
    assert tree_depth(empty(0)) == depth(empty(0), 0) + 1 == 0


# ---------------------------------------------------------------------------
# certificates

@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("name", NAMES)
def test_solve_certificates_validate(variant, name, rng):
    f = catalog.get(name)
    graphs = list(random_graphs(rng, 5, 15)) + [empty(2), disjoint_union(complete(3), path(2))]
    for g in graphs:
        solver = ExactSolver(g, f)
        val = solver.value(variant)
        for k in (val, val + 1):
            res = solver.solve(variant, k)
            assert res.verdict
            parts = res.extra.get("parts")
            assert validate_witness(g, f, variant, k, res.witness, res.representation, parts)
        if val > 0:
            assert not solver.solve(variant, val - 1).verdict


def test_disconnected_certificates_use_parts():
    g = empty(2)
    f = catalog.get("nonadjacent_pair")
    res = ExactSolver(g, f).solve(Variant.CONN, 1)
    assert res.verdict
    assert len(res.extra["parts"]) == 2
    # a union set alone is not a single-tree certificate
    assert not validate_witness(g, f, "conn", 1, res.witness, None)
    assert validate_witness(g, f, "conn", 1, res.witness, None, res.extra["parts"])


def test_witness_rejects_tampering():
    g = complete(4)
    f = catalog.get("triangle_free")
    res = ExactSolver(g, f).solve(Variant.DEPTH, 2)
    assert validate_witness(g, f, "depth", 2, res.witness, res.representation)
    assert not validate_witness(g, f, "depth", 1, res.witness, res.representation)
    assert not validate_witness(g, f, "depth", 2, frozenset(), EMPTY)
    assert not validate_witness(g, f, "depth", 2, {0}, res.representation)


def test_size_cap(monkeypatch):
    f = catalog.get("triangle_free")
    with pytest.raises(SizeCapError):
        ExactSolver(empty(21), f)
    monkeypatch.setenv("ELIMDIST_SIZE_CAP", "3")
    with pytest.raises(SizeCapError):
        ed_conn(path(4), f)
    assert ExactSolver(path(4), f, cap=4).conn() == 0
