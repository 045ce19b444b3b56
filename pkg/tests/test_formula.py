import pytest
from hypothesis import given
from hypothesis import strategies as st

from elimdist import catalog
from elimdist.formula import (
    Adj,
    And,
    Eq,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    PrefixClass,
    QKind,
    Quantifier,
    Side,
    add_dummy,
    pad_to_sigma3,
    parse_formula,
    prefix_class,
    render_formula,
    sigma3_form,
    strip_quantifiers,
)

VARS = ("x", "y", "z", "w")


def matrices(vars_=VARS):
    atom = st.builds(Eq, st.sampled_from(vars_), st.sampled_from(vars_)) | st.builds(
        Adj, st.sampled_from(vars_), st.sampled_from(vars_)
    )

    def extend(children):
        pair = st.tuples(children, children)
        return (
            st.builds(Not, children)
            | st.builds(And, st.lists(children, min_size=2, max_size=3).map(tuple))
            | st.builds(Or, st.lists(children, min_size=2, max_size=3).map(tuple))
            | pair.map(lambda p: Implies(*p))
            | pair.map(lambda p: Iff(*p))
        )

    return st.recursive(atom, extend, max_leaves=8)


@st.composite
def sentences(draw):
    order = draw(st.permutations(VARS))
    kinds = draw(st.lists(st.sampled_from(list(QKind)), min_size=4, max_size=4))
    prefix = tuple(Quantifier(k, v) for k, v in zip(kinds, order))
    return Formula(prefix, draw(matrices()))


def test_parse_all_equal():
    f = parse_formula("A x A y (x = y)")
    assert f.prefix == (Quantifier(QKind.FORALL, "x"), Quantifier(QKind.FORALL, "y"))
    assert f.matrix == Eq("x", "y")
    assert f.is_sentence


def test_parse_diameter_formula():
    f = parse_formula("A u A v E w ((u=v) | (u~v) | ((u~w) & (v~w)))")
    assert len(f.prefix) == 3
    assert f == catalog.get("diameter_le_2")


def test_parse_nonadjacent_pair():
    f = parse_formula("E u E v (!(u=v) & !(u~v))")
    assert f.matrix == And((Not(Eq("u", "v")), Not(Adj("u", "v"))))


def test_comments_and_whitespace():
    f = parse_formula("# all vertices equal\nA x\n  A y   # two of them\n (x = y)\n")
    assert f == catalog.get("all_equal")


def test_implication_is_right_associative():
    f = parse_formula("(x = y) -> (y = z) -> (x = z)", free_vars=("x", "y", "z"))
    assert isinstance(f.matrix, Implies) and isinstance(f.matrix.right, Implies)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaError) as err:
        parse_formula("A x\nA y (x = = y)")
    assert err.value.line == 2 and err.value.col is not None


def test_non_prenex_rejected():
    with pytest.raises(FormulaError, match="prenex"):
        parse_formula("A x ((x = x) & E y (x ~ y))")


def test_duplicate_bound_variable_rejected():
    with pytest.raises(FormulaError, match="duplicate"):
        parse_formula("A x A x (x = x)")


def test_undeclared_variable_rejected():
    with pytest.raises(FormulaError, match="undeclared"):
        parse_formula("A x (x = y)")


def test_prefix_classes():
    assert prefix_class(parse_formula("E x E y A z E w (x = w)")) == PrefixClass(Side.SIGMA, 3)
    assert prefix_class(catalog.get("all_equal")) == PrefixClass(Side.PI, 1)
    assert prefix_class(catalog.get("hardness_dist2_degree1")) == PrefixClass(Side.PI, 3)


def test_sentences_always_have_quantifiers():
    # the vocabulary has no constants, so a sentence needs a quantifier and
    # level 0 cannot occur
    with pytest.raises(FormulaError, match="undeclared"):
        Formula((), Eq("a", "a"))


def test_strip_leading_block():
    f = pad_to_sigma3(catalog.get("nonadjacent_pair")).formula
    phi_x = strip_quantifiers(f, ["u", "v"])
    assert phi_x.free_vars == ("u", "v")
    assert phi_x.prefix == f.prefix[2:]
    assert strip_quantifiers(f, []) == f
    ys = [q.var for q in f.prefix[2:3]]
    phi_xy = strip_quantifiers(f, ["u", "v"] + ys)
    assert phi_xy.free_vars == ("u", "v", *ys)


def test_strip_rejects_non_leading_block():
    with pytest.raises(FormulaError):
        strip_quantifiers(catalog.get("diameter_le_2"), ["v"])


def test_render_examples():
    assert render_formula(catalog.get("all_equal")) == "A x A y (x = y)"
    assert render_formula(Formula((), Adj("x", "y"), ("x", "y"))) == "(x ~ y)"


@pytest.mark.parametrize("name", catalog.NAMES)
def test_catalog_round_trip(name):
    f = catalog.get(name)
    text = render_formula(f)
    assert parse_formula(text) == f
    assert render_formula(parse_formula(text)) == text


@given(sentences())
def test_random_round_trip(f):
    assert parse_formula(render_formula(f)) == f


@given(sentences(), st.integers(0, 4))
def test_dummy_of_neighbour_kind_keeps_class(f, pos):
    if not f.prefix:
        return
    pos = min(pos, len(f.prefix))
    neighbour = f.prefix[pos - 1] if pos > 0 else f.prefix[0]
    assert prefix_class(add_dummy(f, pos, neighbour.kind)) == prefix_class(f)


@given(sentences())
def test_padding_reaches_higher_levels(f):
    # a (side, l) formula fits both Sigma_l' and Pi_l' shapes for l' > l
    c = prefix_class(f)
    for first in (QKind.EXISTS, QKind.FORALL):
        g = add_dummy(f, 0, first) if f.prefix and f.prefix[0].kind is not first else f
        target = c.level + 1
        kinds = [q.kind for q in g.prefix]
        while prefix_class(g).level < target:
            last = kinds[-1]
            other = QKind.EXISTS if last is QKind.FORALL else QKind.FORALL
            g = add_dummy(g, len(g.prefix), other)
            kinds.append(other)
        pc = prefix_class(g)
        assert pc.level == target
        assert pc.side is (Side.SIGMA if first is QKind.EXISTS else Side.PI)


def test_pad_to_sigma3_shapes():
    form = pad_to_sigma3(catalog.get("triangle_free"))
    assert (form.r, form.s, form.t) == (1, 3, 1)
    assert all(q.var.startswith("_d") for q in (form.formula.prefix[0], form.formula.prefix[-1]))
    assert prefix_class(form.formula) == PrefixClass(Side.SIGMA, 3)
    assert form.phi_x.free_vars == (form.formula.prefix[0].var,)


def test_pad_rejects_pi3():
    with pytest.raises(FormulaError, match="Sigma_3"):
        pad_to_sigma3(catalog.get("hardness_dist2_degree1"))


def test_sigma3_form_requires_exact_shape():
    with pytest.raises(FormulaError):
        sigma3_form(catalog.get("diameter_le_2"))
    form = sigma3_form(pad_to_sigma3(catalog.get("diameter_le_2")).formula)
    assert (form.r, form.s, form.t) == (1, 2, 1)
