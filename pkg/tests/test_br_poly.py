from itertools import combinations, product

import numpy as np
import pytest

from polyring import LaurentPoly, parse_poly, render
from ribbon_core import (
    ChordDiagram,
    Edge,
    RibbonGraph,
    Vertex,
    contract,
    from_chord_diagram,
    from_edge_rotations,
    one_point_join,
)
from br_poly import (
    R_VARS,
    TUTTE_VARS,
    CanonicalForm,
    ChordDiagramError,
    NonInvertibleAlpha,
    RecipeSpec,
    RelationViolated,
    apply_move,
    bouquet_eval,
    c_polynomial,
    c_recipe,
    canonical_contract,
    canonical_diagram,
    canonical_eval,
    canonical_form,
    check_relations,
    classical_tutte,
    delete_chord,
    identity_recipe,
    inverse_split,
    mu_identity,
    multiplicativity,
    r_delcon,
    r_state_sum,
    r_state_sum_basis,
    recipe_evaluate,
    rotate_move,
    rotate_to,
    sample_diagrams,
    twist_move,
)
import utils
from utils import load_json


def r(text):
    return parse_poly(text, R_VARS)


def test_digon_polynomial(digon):
    assert render(r_state_sum(digon)) == "y*z*w + x + 1"
    assert r_delcon(digon) == r_state_sum(digon)
    assert render(r_state_sum_basis(digon)) == "y*z*w + X + 2"


@pytest.mark.parametrize(
    "name, expected",
    [
        ("plane_loop", "1 + y"),
        ("twisted_loop", "1 + y*z*w"),
        ("torus_bouquet", "y^2*z^2 + 2*y + 1"),
        ("bridge", "x"),
        ("triangle", "x^2 + x + y + 1"),
    ],
)
def test_small_graphs(name, expected, request):
    g = request.getfixturevalue(name)
    assert r_state_sum(g) == r(expected)
    assert r_delcon(g) == r(expected)


def test_delcon_reuses_memo(triangle):
    memo = {}
    first = r_delcon(triangle, memo)
    assert memo
    assert r_delcon(triangle, memo) == first


TEN_CHORDS = ["a", "b", "a", "b", "c", "d", "c", "d", "e", "e", "f", "g", "f", "g", "h", "h", "i", "j", "i", "j"]


def recording_pool(monkeypatch):
    sizes = []

    class RecordingPool(utils.ThreadPoolExecutor):
        def __init__(self, max_workers=None):
            sizes.append(max_workers)
            super().__init__(max_workers=max_workers)

    monkeypatch.setattr(utils, "ThreadPoolExecutor", RecordingPool)
    return sizes


def test_state_sum_does_not_depend_on_thread_count(monkeypatch):
    g = from_chord_diagram(ChordDiagram.of(TEN_CHORDS, {"c": -1, "h": -1}))
    sizes = recording_pool(monkeypatch)
    monkeypatch.setenv("RIBBONFORGE_THREADS", "1")
    single = r_state_sum(g)
    assert sizes == []
    monkeypatch.setenv("RIBBONFORGE_THREADS", "4")
    threaded = r_state_sum(g)
    assert sizes == [4]
    assert threaded == single
    assert render(threaded) == render(single)


def test_small_state_sums_stay_on_one_thread(triangle, monkeypatch):
    sizes = recording_pool(monkeypatch)
    monkeypatch.setenv("RIBBONFORGE_THREADS", "4")
    assert r_state_sum(triangle) == r("x^2 + x + y + 1")
    assert sizes == []


def test_classical_tutte(triangle, digon, bridge):
    x, y = LaurentPoly.var(TUTTE_VARS, "x"), LaurentPoly.var(TUTTE_VARS, "y")
    assert classical_tutte(triangle) == x ** 2 + x + y
    assert classical_tutte(digon) == x + y
    assert classical_tutte(bridge) == x


def test_multiplicative_under_join(plane_loop, twisted_loop, torus_bouquet):
    joined = one_point_join(plane_loop, torus_bouquet, "v", "v")
    assert multiplicativity(plane_loop, torus_bouquet, joined)
    joined = one_point_join(twisted_loop, plane_loop, "v", "v")
    assert multiplicativity(twisted_loop, plane_loop, joined)


@pytest.mark.parametrize("i, j, k", [(0, 0, 0), (1, 0, 0), (1, 0, 1), (2, 1, 0), (3, 1, 1), (4, 1, 2), (4, 2, 0)])
def test_canonical_diagram_product_formula(i, j, k):
    d = canonical_diagram(i, j, k)
    assert len(d) == i
    assert canonical_form(d) == CanonicalForm(i, j, k)
    assert bouquet_eval(d) == canonical_eval(CanonicalForm(i, j, k))


def test_canonical_form_of_bouquets():
    assert str(canonical_form(ChordDiagram.of(["a", "b", "a", "b"]))) == "D_2,1,0"
    assert canonical_form(ChordDiagram.of(["a", "a"], {"a": -1})) == CanonicalForm(1, 0, 1)
    assert canonical_form(ChordDiagram.of(["a", "b", "a", "b"], {"a": -1, "b": -1})) == CanonicalForm(2, 0, 1)
    assert canonical_form(ChordDiagram.of(["a", "a", "b", "b"], {"a": -1, "b": -1})) == CanonicalForm(2, 0, 2)


@pytest.mark.parametrize("i, j, k", [(1, 1, 0), (2, 0, 3), (1, 0, 2), (-1, 0, 0)])
def test_invalid_canonical_form(i, j, k):
    with pytest.raises(ChordDiagramError):
        CanonicalForm(i, j, k)


def test_canonical_contract_on_random_diagrams():
    for d in sample_diagrams(np.random.default_rng(7), 25, 5):
        ok, diagnostics = canonical_contract(d)
        assert ok, (str(d), diagnostics)


def test_rotation_with_default_split_is_an_involution():
    d = ChordDiagram.of(["e", "a", "b", "e", "c", "a", "d", "b", "c", "d"])
    once = rotate_move(d, "e")
    assert once.word[0] == "e"
    assert rotate_move(once, "e") == rotate_to(d, "e")


def test_rotation_segments():
    d = ChordDiagram.of(["e", "a", "d", "e", "c", "b", "a", "b", "c", "d"])
    # a = (a), d = (d), c = (c, b), b = (a, b, c, d)
    moved = rotate_move(d, "e", (1, 2))
    assert moved.word == ("e", "a", "b", "c", "d", "c", "b", "e", "d", "a")


def test_twist_reverses_and_toggles_signs():
    d = ChordDiagram.of(["e", "a", "b", "e", "a", "c", "c", "b"], {"e": -1})
    moved = twist_move(d, "e", (0, 2))
    assert moved.word == ("e", "c", "b", "b", "a", "e", "c", "a")
    assert moved.sign("e") == -1
    assert moved.sign("a") == 1
    assert moved.sign("b") == -1
    assert moved.sign("c") == -1


def test_move_needs_matching_sign():
    d = ChordDiagram.of(["e", "a", "e", "a"], {"e": -1})
    with pytest.raises(ChordDiagramError):
        rotate_move(d, "e")
    with pytest.raises(ChordDiagramError):
        twist_move(d, "a")
    with pytest.raises(ChordDiagramError):
        twist_move(d, "e", (3, 0))


@pytest.mark.parametrize(
    "word, signs, chord, split",
    [
        (["e", "a", "e", "a"], {}, "e", None),
        (["e", "a", "b", "e", "a", "b"], {"b": -1}, "e", (1, 1)),
        (["e", "a", "a", "e", "b", "b"], {}, "e", (1, 1)),
        (["e", "a", "b", "e", "b", "a"], {"e": -1}, "e", None),
        (["e", "a", "e", "a"], {"e": -1}, "e", (0, 1)),
    ],
)
def test_mu_identity_and_inverse(word, signs, chord, split):
    d = ChordDiagram.of(word, signs)
    assert mu_identity(d, chord, split)
    moved = apply_move(d, chord, split)
    if split is not None:
        assert apply_move(moved, chord, inverse_split(d, chord, split)) == rotate_to(d, chord)
    assert canonical_form(moved) == canonical_form(d)


def test_delete_chord():
    d = ChordDiagram.of(["e", "a", "e", "a"], {"a": -1})
    assert delete_chord(d, "e") == ChordDiagram.of(["a", "a"], {"a": -1})


def test_identity_recipe_reproduces_r(digon, triangle, torus_bouquet):
    spec = identity_recipe()
    assert check_relations(spec) == (True, [])
    for g in (digon, triangle, torus_bouquet):
        assert recipe_evaluate(g, spec) == r_state_sum(g)


def test_c_recipe_on_orientable_graphs(triangle, torus_bouquet, bridge):
    spec = c_recipe()
    for g in (triangle, torus_bouquet, bridge):
        assert recipe_evaluate(g, spec) == c_polynomial(g)
    assert recipe_evaluate(torus_bouquet, spec) == r("y^2*z + 2*y + 1")


def test_recipe_document_parses(examples_dir):
    spec = RecipeSpec.parse(load_json(str(examples_dir / "recipe_c.json")))
    assert spec == c_recipe()


def test_scaled_recipe_multiplies_by_alpha_per_component(bridge):
    # alpha = 2 scales every basic value; connected graphs pick up one factor of 2
    two = LaurentPoly.constant(R_VARS, 2)
    base = identity_recipe()
    spec = RecipeSpec(alpha=two, x=base.x, q=two * base.q, r=two * base.r, s=two * base.s, u=base.u, v=base.v)
    assert check_relations(spec)[0]
    assert recipe_evaluate(bridge, spec) == 2 * LaurentPoly.var(R_VARS, "x")
    loop = from_edge_rotations({"v": ["a", "a"]})
    assert recipe_evaluate(loop, spec) == 2 * r("1 + y")


def test_recipe_relation_violation():
    base = identity_recipe()
    broken = RecipeSpec(base.alpha, base.x, base.q, base.r + 1, base.s, base.u, base.v)
    with pytest.raises(RelationViolated):
        recipe_evaluate(from_chord_diagram(ChordDiagram.of(["a", "a"])), broken)


def test_recipe_needs_invertible_alpha():
    zero = LaurentPoly.zero(R_VARS)
    spec = RecipeSpec(zero, LaurentPoly.var(R_VARS, "x"), zero, zero, zero, zero, LaurentPoly.one(R_VARS))
    with pytest.raises(NonInvertibleAlpha):
        recipe_evaluate(from_chord_diagram(ChordDiagram.of(["a", "a"])), spec)


def test_tutte_ignores_signs_and_embedding(corpus3):
    for g in corpus3:
        expected = classical_tutte(g)
        for signs in product((1, -1), repeat=len(g.edges)):
            resigned = RibbonGraph(g.vertices, tuple(Edge(e.id, e.halves, s) for e, s in zip(g.edges, signs)))
            assert classical_tutte(resigned) == expected, (g, signs)
        first, *rest = g.vertices
        reembedded = RibbonGraph((Vertex(first.id, first.rotation[::-1]), *rest), g.edges)
        assert classical_tutte(reembedded) == expected, g


def test_contraction_order_does_not_change_r(corpus3):
    for g in corpus3:
        for e, f in combinations(g.edge_ids, 2):
            if g.is_loop(e) or g.is_loop(f):
                continue
            ef, fe = contract(g, e), contract(g, f)
            if ef.is_loop(f) or fe.is_loop(e):
                continue
            assert r_state_sum(contract(ef, f)) == r_state_sum(contract(fe, e)), (g, e, f)
