import numpy as np
import pytest

from corpus import random_graph
from ribbon_core import (
    ChordDiagram,
    Edge,
    LoopContractionError,
    NonOrientableError,
    NotABouquetError,
    RibbonGraph,
    RibbonGraphError,
    UnknownIdError,
    Vertex,
    canonical_code,
    components,
    contract,
    delete,
    disjoint_union,
    dual,
    faces,
    from_chord_diagram,
    from_edge_rotations,
    is_bridge,
    medial,
    medial_contract,
    normalize_orientation,
    one_point_join,
    stats,
    to_chord_diagram,
    trace_state,
    validate,
    vertex_flip,
)


def test_from_edge_rotations_names_halves_in_order():
    g = from_edge_rotations({"u": ["a", "b"], "v": ["a", "b"]}, {"b": -1})
    assert g.rotation("u") == ("a.0", "b.0")
    assert g.rotation("v") == ("a.1", "b.1")
    assert g.sign("b") == -1
    assert g.other("a.0") == "a.1"
    assert g.succ("a.0") == "b.0"
    assert g.pred("a.0") == "b.0"


def test_from_edge_rotations_rejects_unpaired_label():
    with pytest.raises(RibbonGraphError):
        from_edge_rotations({"u": ["a", "b"], "v": ["a"]})


def test_validate_reports_bookkeeping_errors():
    g = RibbonGraph(
        (Vertex("u", ("a.0", "a.1", "x")),),
        (Edge("a", ("a.0", "a.1"), 1), Edge("b", ("b.0", "b.1"), 2)),
    )
    ok, diagnostics = validate(g)
    assert not ok
    assert "edge 'b' has sign 2, expected 1 or -1" in diagnostics
    assert "orphan half-edge 'b.0' of edge 'b'" in diagnostics
    assert "half-edge 'x' belongs to no edge" in diagnostics


def test_unknown_ids():
    g = from_edge_rotations({"v": ["a", "a"]})
    with pytest.raises(UnknownIdError):
        g.edge("zz")
    with pytest.raises(UnknownIdError):
        stats(g, ["zz"])


def test_plane_and_twisted_loops(plane_loop, twisted_loop):
    assert len(faces(plane_loop)) == 2
    assert stats(plane_loop) == stats(plane_loop, ["a"])
    st = stats(plane_loop)
    assert (st.k, st.r, st.n, st.bc, st.t, st.eg) == (1, 0, 1, 2, 0, 0)
    st = stats(twisted_loop)
    assert (st.k, st.r, st.n, st.bc, st.t, st.eg) == (1, 0, 1, 1, 1, 1)


def test_digon_is_a_moebius_band(digon):
    st = stats(digon)
    assert (st.k, st.r, st.n, st.bc, st.t, st.eg) == (1, 1, 1, 1, 1, 1)
    st = stats(digon, [])
    assert (st.k, st.bc, st.eg) == (2, 2, 0)


def test_torus_bouquet(torus_bouquet):
    st = stats(torus_bouquet)
    assert (st.bc, st.t, st.eg) == (1, 0, 2)


def test_isolated_vertex_is_its_own_boundary():
    g = RibbonGraph((Vertex("v"),))
    (walk,) = faces(g)
    assert walk.vertex == "v"
    assert walk.states == ()
    assert stats(g).bc == 1


def test_faces_partition_corners(triangle):
    walks = faces(triangle)
    assert len(walks) == 2
    corners = [c for w in walks for c in w.corners]
    assert sorted(corners) == sorted(triangle.half_edges)


def test_delete_and_contract(digon):
    assert delete(digon, "b").rotation("u") == ("a.0",)
    g = contract(digon, "a")
    assert g.vertex_ids == ["u"]
    assert g.rotation("u") == ("b.0", "b.1")
    assert stats(g).t == 1
    with pytest.raises(LoopContractionError):
        contract(g, "b")


def test_contract_negative_edge_flips_far_endpoint(digon):
    g = contract(digon, "b")
    assert g.sign("a") == -1
    assert stats(g).t == 1


def test_vertex_flip_toggles_non_loop_edges(digon):
    flipped = vertex_flip(digon, "v")
    assert flipped.rotation("v") == ("b.1", "a.1")
    assert (flipped.sign("a"), flipped.sign("b")) == (-1, 1)
    assert vertex_flip(flipped, "v") == digon
    assert stats(flipped) == stats(digon)


def test_bridges_and_components(bridge, digon):
    assert is_bridge(bridge, "e")
    assert not is_bridge(digon, "a")
    union = disjoint_union(bridge, bridge)
    assert len(components(union)) == 2
    assert sorted(union.vertex_ids) == ["u", "u'", "v", "v'"]
    assert validate(union)[0]


def test_one_point_join_concatenates_rotations(plane_loop, twisted_loop):
    joined = one_point_join(plane_loop, twisted_loop, "v", "v")
    assert len(joined.vertices) == 1
    assert to_chord_diagram(joined).word == ("a", "a", "a'", "a'")
    assert stats(joined).bc == 2


def test_dual_of_plane_loop_is_positive_bridge(plane_loop):
    d = dual(plane_loop)
    assert len(d.vertices) == 2
    assert d.sign("a") == 1
    assert is_bridge(d, "a")


def test_dual_swaps_vertices_and_faces(digon, triangle, torus_bouquet):
    for g in (digon, triangle, torus_bouquet):
        d = dual(g)
        sg, sd = stats(g), stats(d)
        assert len(d.vertices) == sg.bc
        assert sd.bc == len(g.vertices)
        assert (sd.eg, sd.t) == (sg.eg, sg.t)


def test_medial_is_four_regular(digon):
    m = medial(digon)
    assert len(m.graph.vertices) == 2
    assert len(m.graph.edges) == 4
    assert all(len(v.rotation) == 4 for v in m.graph.vertices)
    assert m.source_edge == {"a": "a", "b": "b"}
    assert set(m.pairings["a"]) == {"uncut", "cut", "crossing"}


@pytest.mark.parametrize("name", ["plane_loop", "twisted_loop", "digon", "triangle", "torus_bouquet", "bridge"])
def test_medial_shares_surface_data(name, request):
    ok, diagnostics = medial_contract(request.getfixturevalue(name))
    assert ok, diagnostics


def test_isolated_vertex_becomes_free_loop():
    m = medial(RibbonGraph((Vertex("v"),)))
    assert m.free_loops == 1
    assert not m.graph.vertices


def test_trace_state_counts_curves(plane_loop):
    m = medial(plane_loop)
    pairings = m.pairings["a"]
    assert trace_state(m.graph, {"a": pairings["uncut"]}) == 2
    assert trace_state(m.graph, {"a": pairings["cut"]}) == 1
    with pytest.raises(RibbonGraphError):
        trace_state(m.graph, {})


def test_chord_diagram_conversion(torus_bouquet, digon):
    d = to_chord_diagram(torus_bouquet)
    assert d.word == ("a", "b", "a", "b")
    assert str(ChordDiagram.of(["a", "b", "a", "b"], {"b": -1})) == "a b- a b-"
    assert to_chord_diagram(from_chord_diagram(d)) == d
    with pytest.raises(NotABouquetError):
        to_chord_diagram(digon)
    with pytest.raises(RibbonGraphError):
        ChordDiagram.of(["a", "b", "a"])


def test_normalize_orientation():
    g = from_edge_rotations({"u": ["e", "f"], "v": ["e"], "w": ["f"]}, {"e": -1})
    flat = normalize_orientation(g)
    assert all(e.sign == 1 for e in flat.edges)
    assert stats(flat) == stats(g)


def test_normalize_orientation_rejects_moebius_band(digon):
    with pytest.raises(NonOrientableError):
        normalize_orientation(digon)


def test_canonical_code_ignores_labels(digon):
    relabelled = from_edge_rotations({"p": ["x", "y"], "q": ["x", "y"]}, {"y": -1})
    assert canonical_code(relabelled) == canonical_code(digon)
    positive = from_edge_rotations({"p": ["x", "y"], "q": ["x", "y"]})
    assert canonical_code(positive) != canonical_code(digon)


def edge_subsets(g):
    ids = g.edge_ids
    return [[eid for i, eid in enumerate(ids) if mask >> i & 1] for mask in range(1 << len(ids))]


def test_vertex_flip_keeps_every_subgraph(corpus3):
    for g in corpus3:
        for vid in g.vertex_ids:
            flipped = vertex_flip(g, vid)
            for a in edge_subsets(g):
                assert stats(flipped, a) == stats(g, a), (g, vid, a)


def test_delete_commutes_with_contract(corpus3):
    for g in corpus3:
        for e in g.edge_ids:
            if g.is_loop(e):
                continue
            for f in g.edge_ids:
                if f != e:
                    assert delete(contract(g, e), f) == contract(delete(g, f), e)


def test_dual_of_dual_keeps_stats(corpus3):
    for g in corpus3:
        assert stats(dual(dual(g))) == stats(g), g


def test_medial_contract_on_five_edge_sample():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        g = random_graph(rng, 5)
        ok, diagnostics = medial_contract(g)
        assert ok, (g, diagnostics)
