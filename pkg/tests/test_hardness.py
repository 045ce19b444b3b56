import itertools

import numpy as np
import pytest

from elimdist import catalog
from elimdist.distance import ExactSolver, Variant
from elimdist.formula import Side, parse_formula, prefix_class
from elimdist.graph import component_masks, cycle, path, star
from elimdist.hardness import (
    HARD_NAME,
    InstanceError,
    SetCoverInstance,
    element_vertex,
    expected_counts,
    hard_formula,
    reduction_equivalence_check,
    reduction_verdicts,
    set_vertices,
    setcover_to_graph,
)
from elimdist.modelcheck import check_mask, models, specialized_evaluator

from conftest import random_graphs


def dist2_degree1_oracle(g):
    """Every vertex has a vertex of degree <= 1 within distance two."""
    deg = [bin(g.adj[v]).count("1") for v in range(g.n)]
    for x in range(g.n):
        near = {x} | {y for y in range(g.n) if g.adj[x] >> y & 1}
        near |= {z for y in list(near) for z in range(g.n) if g.adj[y] >> z & 1}
        if not any(deg[y] <= 1 for y in near):
            return False
    return True


def test_formula_class():
    cls = prefix_class(hard_formula())
    assert (cls.side, cls.level) == (Side.PI, 3)


def test_formula_examples():
    f = hard_formula()
    assert models(path(3), f)
    assert not models(cycle(5), f)
    assert models(star(4), f)


def test_shared_block_variant_is_wrong():
    # sharing the z-block across the three disjuncts lets C5 through
    shared = parse_formula(catalog.SHARED_Z_HARDNESS)
    assert models(cycle(5), shared)
    assert not models(cycle(5), hard_formula())


def test_formula_matches_oracle(rng):
    f = hard_formula()
    ev = specialized_evaluator(HARD_NAME)
    for n in range(1, 8):
        for g in random_graphs(rng, n, 25, density=float(rng.choice([0.2, 0.4, 0.6]))):
            want = dist2_degree1_oracle(g)
            assert models(g, f) == want
            assert ev(g) == want


def test_component_closure(rng):
    f = hard_formula()
    for n in range(1, 8):
        for g in random_graphs(rng, n, 20, density=0.3):
            whole = check_mask(g, g.mask, f)
            parts = all(check_mask(g, c, f) for c in component_masks(g, g.mask))
            assert whole == parts


def test_layout_and_counts():
    inst = SetCoverInstance(2, ({0}, {1}), 1)
    g = setcover_to_graph(inst)
    assert g.n == 12
    clique = [element_vertex(inst, i, p) for i in range(2) for p in range(3)]
    assert clique == list(range(6))
    assert all(g.adj[u] >> v & 1 for u, v in itertools.combinations(clique, 2))
    for j in range(inst.m):
        s, v, w = set_vertices(inst, j)
        assert g.adj[w] == 1 << v
        assert g.adj[v] == (1 << s) | (1 << w)
    assert (g.n, len(g.edges())) == expected_counts(inst)


def test_counts_closed_form(rng):
    for _ in range(30):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 5))
        k = int(rng.integers(0, m + 1))
        sets = [frozenset(int(i) for i in np.flatnonzero(rng.random(n) < 0.5)) for _ in range(m)]
        inst = SetCoverInstance(n, sets, k)
        g = setcover_to_graph(inst)
        assert (g.n, len(g.edges())) == expected_counts(inst)
        for j, S in enumerate(inst.sets):
            s = set_vertices(inst, j)[0]
            elems = {v for v in range(n * (k + 2)) if g.adj[s] >> v & 1}
            assert elems == {element_vertex(inst, i, p) for i in S for p in range(k + 2)}


def test_spec_instances():
    no = SetCoverInstance(2, ({0}, {1}), 1)
    assert not no.has_cover()
    assert reduction_verdicts(no) == {"conn": False, "prop": False, "depth": False}
    assert reduction_equivalence_check(no)
    yes = SetCoverInstance(2, ({0, 1},), 1)
    assert yes.has_cover()
    assert reduction_verdicts(yes) == {"conn": True, "prop": True, "depth": True}
    assert reduction_equivalence_check(yes)


def test_exhaustive_two_sets():
    subsets = [frozenset(s) for r in range(3) for s in itertools.combinations(range(2), r)]
    for m in (1, 2):
        for fam in itertools.product(subsets, repeat=m):
            inst = SetCoverInstance(2, fam, 1)
            verdicts = reduction_verdicts(inst)
            assert len(set(verdicts.values())) == 1
            assert verdicts["conn"] == inst.has_cover()


def test_variants_coincide_on_reduction_graphs():
    inst = SetCoverInstance(2, ({0}, {0, 1}, {1}), 1)
    g = setcover_to_graph(inst)
    solver = ExactSolver(g, hard_formula(), specialized_evaluator(HARD_NAME))
    assert solver.conn() == solver.prop() == solver.value(Variant.DEPTH) == 1


def test_file_round_trip():
    inst = SetCoverInstance(3, ({0, 2}, set(), {1}), 2)
    text = inst.format()
    assert text.splitlines()[0] == "3 3 2"
    assert SetCoverInstance.parse(text) == inst


@pytest.mark.parametrize(
    "text",
    ["", "2 1\n0\n", "2 2 1\n0\n", "2 1 1\nx\n", "1 1 1\n0\n", "2 1 2\n0\n", "2 1 1\n5\n"],
)
def test_instance_errors(text):
    with pytest.raises(InstanceError):
        SetCoverInstance.parse(text)
