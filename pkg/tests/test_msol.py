import pytest
from hypothesis import given
from hypothesis import strategies as st

from elimdist import catalog
from elimdist import msol as M
from elimdist.distance import ExactSolver, Variant
from elimdist.elimination import depth
from elimdist.formula import render_formula
from elimdist.graph import complete, component_masks, cycle, disjoint_union, empty, path
from elimdist.msol import (
    X,
    Comp,
    MOr,
    MsolCapError,
    Phi,
    SetVar,
    Within,
    Minus,
    comp_by_definition,
    depth_formula,
    emit_msol,
    eval_msol,
    nice_depth_formula,
    node_count,
    render_msol,
    tree_size,
)

from conftest import all_graphs, graph_from_bits, random_graphs

NAMES = ("triangle_free", "diameter_le_2", "nonadjacent_pair", "all_equal")


def test_base_cases_render():
    f = catalog.get("triangle_free")
    assert render_msol(emit_msol(f, 0, "conn")) == "AX (comp(X) -> phi(X))"
    assert render_msol(emit_msol(f, 0, "prop")) == render_formula(f)
    assert render_msol(depth_formula(-1)) == "(X = {})"
    assert render_msol(nice_depth_formula(-1)) == "(X = {})"


def test_point_examples():
    tf = catalog.get("triangle_free")
    assert eval_msol(complete(3), emit_msol(tf, 1, "depth"))
    assert not eval_msol(complete(3), emit_msol(tf, 0, "depth"))
    eq = catalog.get("all_equal")
    assert eval_msol(empty(3), emit_msol(eq, 1, "prop"))
    assert not eval_msol(empty(3), emit_msol(eq, 0, "prop"))
    assert eval_msol(empty(3), emit_msol(eq, 0, "conn"))


def test_rejects_bad_input():
    f = catalog.get("triangle_free")
    with pytest.raises(ValueError):
        emit_msol(f, -1, "conn")
    with pytest.raises(ValueError):
        emit_msol(f, 1, "treewidth")
    with pytest.raises(MsolCapError):
        eval_msol(path(7), emit_msol(f, 1, "conn"))
    assert eval_msol(path(7), emit_msol(f, 0, "conn"), cap=7)


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("name", NAMES)
def test_expressibility_small(variant, name, rng):
    f = catalog.get(name)
    graphs = [g for n in range(4) for g in all_graphs(n)] + list(random_graphs(rng, 4, 12))
    for g in graphs:
        val = ExactSolver(g, f).value(variant)
        for k in range(3):
            assert eval_msol(g, emit_msol(f, k, variant)) == (val <= k)


@given(st.integers(0, (1 << 10) - 1), st.sampled_from(NAMES), st.sampled_from(list(Variant)))
def test_expressibility_random_five(sel, name, variant):
    g = graph_from_bits(5, sel)
    f = catalog.get(name)
    val = ExactSolver(g, f).value(variant)
    for k in range(3):
        assert eval_msol(g, emit_msol(f, k, variant)) == (val <= k)


@given(st.integers(0, (1 << 10) - 1))
def test_depth_formula_matches_depth(sel):
    g = graph_from_bits(5, sel)
    for S in range(0, 1 << 5, 3):
        d = depth(g, S)
        for bound in range(-1, 3):
            assert eval_msol(g, depth_formula(bound), free_sets={"X": S}) == (d <= bound)


def test_linear_growth():
    # each level reuses the previous formula once, so counts grow by a constant
    f = catalog.get("triangle_free")
    for variant, step in (("conn", 11), ("prop", 11), ("depth", 26)):
        counts = [node_count(emit_msol(f, k, variant)) for k in range(6)]
        diffs = [b - a for a, b in zip(counts[2:], counts[3:])]
        assert diffs == [step] * len(diffs), (variant, counts)
    assert [node_count(emit_msol(f, k, "conn")) for k in range(5)] == [5, 16, 27, 38, 49]
    assert [node_count(emit_msol(f, k, "prop")) for k in range(5)] == [2, 14, 25, 36, 47]
    assert [node_count(emit_msol(f, k, "depth")) for k in range(5)] == [6, 8, 36, 62, 88]
    # written out as a tree the text doubles per level
    assert tree_size(emit_msol(f, 4, "conn")) > 2 * tree_size(emit_msol(f, 3, "conn"))


def test_comp_macro_soundness():
    for n in range(6):
        for g in all_graphs(n):
            comps = set(component_masks(g, g.mask))
            for S in range(1 << n):
                via_eval = eval_msol(g, Comp(X), free_sets={"X": S})
                assert via_eval == (S in comps)
                if n <= 4:
                    assert comp_by_definition(g, S) == via_eval


def _literal_conn(f, k):
    """The recursion without the per-component fallback to psi_{k-1}."""
    if k == 0:
        return M._forall_comp(Phi(f, X))
    prev = _literal_conn(f, k - 1)
    return MOr((prev, M._forall_comp(M._exists_member("x", X, Within(Minus(X, "x"), prev)))))


def test_literal_conn_recursion_counterexample():
    # C5 already has diameter 2, P4 needs one deletion: the literal form forces a deletion in C5 too
    f = catalog.get("diameter_le_2")
    g = disjoint_union(cycle(5), path(4))
    assert ExactSolver(g, f).conn() == 1
    assert not eval_msol(g, _literal_conn(f, 1), cap=9)
    assert eval_msol(g, emit_msol(f, 1, "conn"), cap=9)


@given(st.integers(0, (1 << 10) - 1), st.sampled_from(NAMES), st.sampled_from(list(Variant)))
def test_monotone_in_k(sel, name, variant):
    g = graph_from_bits(5, sel)
    f = catalog.get(name)
    vals = [eval_msol(g, emit_msol(f, k, variant)) for k in range(3)]
    assert vals == sorted(vals)


def test_sharing_is_by_identity():
    f = catalog.get("nonadjacent_pair")
    assert emit_msol(f, 2, "conn") is emit_msol(f, 2, "conn")
    psi = emit_msol(f, 2, "conn")
    assert psi.args[0] is emit_msol(f, 1, "conn")


def test_universe_variable():
    f = catalog.get("all_equal")
    assert eval_msol(complete(1), Phi(f, SetVar("V")))
    assert not eval_msol(empty(2), Phi(f, SetVar("V")))
    assert eval_msol(empty(0), Phi(f, SetVar("V")))
