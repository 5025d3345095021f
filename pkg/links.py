"""Link universes on surfaces, the Kauffman bracket and the Chmutov–Pak identity.

A universe is a 4-regular orientable ribbon graph (plus vertexless free
loops) with an A- and a B-splitting named at every crossing. The third
pairing, the one joining opposite half-edges, is never chosen by a state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import networkx as nx

from polyring import IdentityCheck, LaurentPoly, VarTable, check_identity, substitute
from ribbon_core import (
    BoundaryWalk,
    Edge,
    MedialGraph,
    NonOrientableError,
    Pairing,
    RibbonGraph,
    Vertex,
    canonical_code,
    faces,
    medial,
    normalize_orientation,
    stats,
    trace_state,
)
from transition import CUT, UNCUT, q_transition, signed_weights, weights_from_pairings
from utils import InterchangeError, graph_from_json, graph_to_json

logger = logging.getLogger(__name__)

BRACKET_VARS = VarTable(("A", "B", "d"))
SIGNED_VARS = VarTable(("X", "y", "z"))
SIGNED_Q_VARS = VarTable(("A", "B", "t"))

GREEN, WHITE = "green", "white"


class LinkUniverseError(ValueError):
    pass


class NotCheckerboardColorable(LinkUniverseError):
    pass


class InvalidColoring(LinkUniverseError):
    pass


def _key(pairing) -> frozenset:
    return frozenset(frozenset(pair) for pair in pairing)


def transversal(rotation: Tuple[str, ...]) -> Pairing:
    """The pairing of opposite half-edges at a 4-valent vertex."""
    return (rotation[0], rotation[2]), (rotation[1], rotation[3])


def _hugging(rotation: Tuple[str, ...], i: int) -> Pairing:
    """The pairing whose arcs run around corners i and i + 2."""
    r = rotation
    return (r[i % 4], r[(i + 1) % 4]), (r[(i + 2) % 4], r[(i + 3) % 4])


@dataclass(frozen=True)
class LinkUniverse:
    graph: RibbonGraph
    splittings: Dict[str, Dict[str, Pairing]] = field(hash=False)
    free_loops: int = 0

    def __post_init__(self):
        ok, diagnostics = validate_universe(self)
        if not ok:
            raise LinkUniverseError(diagnostics[0])

    @property
    def medial(self) -> MedialGraph:
        return MedialGraph(self.graph, self.free_loops)

    def splitting(self, vid: str, label: str) -> Pairing:
        return self.splittings[vid][label]


def validate_universe(u: LinkUniverse) -> Tuple[bool, List[str]]:
    diagnostics = []
    g = u.graph
    if u.free_loops < 0:
        diagnostics.append(f"free_loops must be nonnegative, got {u.free_loops}")
    for v in g.vertices:
        if len(v.rotation) != 4:
            diagnostics.append(f"crossing {v.id!r} has degree {len(v.rotation)}, expected 4")
            continue
        labels = u.splittings.get(v.id, {})
        if set(labels) != {"A", "B"}:
            diagnostics.append(f"crossing {v.id!r} needs exactly an A and a B splitting")
            continue
        halves = set(v.rotation)
        for label, pairing in labels.items():
            used = [h for pair in pairing for h in pair]
            if len(pairing) != 2 or sorted(used) != sorted(halves):
                diagnostics.append(f"{label}-splitting at {v.id!r} is not a pairing of its half-edges")
        if diagnostics:
            continue
        a, b = _key(labels["A"]), _key(labels["B"])
        if a == b:
            diagnostics.append(f"A and B splittings coincide at {v.id!r}")
        if _key(transversal(v.rotation)) in (a, b):
            diagnostics.append(f"a splitting at {v.id!r} is the crossing pairing")
    extra = set(u.splittings) - set(g.vertex_ids)
    if extra:
        diagnostics.append(f"splittings given for unknown crossings {sorted(extra)}")
    if not diagnostics and g.vertices and stats(g).t != 0:
        diagnostics.append("universe surface is not orientable")
    return not diagnostics, diagnostics


@dataclass(frozen=True)
class SignedRibbonGraph:
    """Orientable ribbon graph, all edges positive, with a crossing sign per edge."""

    graph: RibbonGraph
    crossing_signs: Dict[str, int] = field(hash=False)

    def __post_init__(self):
        for e in self.graph.edges:
            if e.sign != 1:
                raise LinkUniverseError(f"edge {e.id!r} is twisted; normalize the orientation first")
            if self.crossing_signs.get(e.id) not in (1, -1):
                raise LinkUniverseError(f"edge {e.id!r} needs a crossing sign of 1 or -1")

    @classmethod
    def of(cls, g: RibbonGraph, crossing_signs: Mapping[str, int]) -> "SignedRibbonGraph":
        return cls(normalize_orientation(g), dict(crossing_signs))

    def negative_edges(self) -> List[str]:
        return [eid for eid in self.graph.edge_ids if self.crossing_signs[eid] < 0]


@dataclass(frozen=True)
class CheckerboardColoring:
    """Green/white colouring of the faces of an orientation-normalized universe."""

    graph: RibbonGraph
    walks: Tuple[BoundaryWalk, ...]
    green: frozenset

    def color(self, i: int) -> str:
        return GREEN if i in self.green else WHITE

    def complement(self) -> "CheckerboardColoring":
        return CheckerboardColoring(self.graph, self.walks, frozenset(range(len(self.walks))) - self.green)

    def face_of_corner(self) -> Dict[str, int]:
        return {c: i for i, walk in enumerate(self.walks) for c in walk.corners}

    def as_dict(self) -> Dict[str, str]:
        return {",".join(sorted(walk.corners)): self.color(i) for i, walk in enumerate(self.walks)}


# ---------------------------------------------------------------------------
# bracket
# ---------------------------------------------------------------------------


def _bracket_table(avar: str, bvar: str, dvar: str) -> VarTable:
    return BRACKET_VARS if (avar, bvar, dvar) == BRACKET_VARS.names else VarTable((avar, bvar, dvar))


def bracket_weights(u: LinkUniverse, table: VarTable):
    """W_L: A on A-splittings, B on B-splittings, 0 on the crossing pairing."""
    a_var, b_var = table.names[0], table.names[1]
    a, b = LaurentPoly.var(table, a_var), LaurentPoly.var(table, b_var)
    zero = LaurentPoly.zero(table)
    pairings, values = {}, {}
    for v in u.graph.vertices:
        pairings[v.id] = {"A": u.splitting(v.id, "A"), "B": u.splitting(v.id, "B"), "crossing": transversal(v.rotation)}
        values[v.id] = {"A": a, "B": b, "crossing": zero}
    return weights_from_pairings(table, pairings, values)


def kauffman_bracket(u: LinkUniverse, avar: str = "A", bvar: str = "B", dvar: str = "d") -> LaurentPoly:
    """[L](A, B, d) = Q(universe; W_L, d) / d."""
    table = _bracket_table(avar, bvar, dvar)
    q = q_transition(u.medial, bracket_weights(u, table), dvar)
    return q * LaurentPoly.var(table, dvar, -1)


def bracket_state_sum(u: LinkUniverse, avar: str = "A", bvar: str = "B", dvar: str = "d") -> LaurentPoly:
    """Direct sum over A/B states of A^a B^b d^(c - 1)."""
    table = _bracket_table(avar, bvar, dvar)
    vids = u.graph.vertex_ids
    total = LaurentPoly.zero(table)
    for labels in product("AB", repeat=len(vids)):
        choice = {vid: u.splitting(vid, label) for vid, label in zip(vids, labels)}
        curves = trace_state(u.graph, choice) + u.free_loops
        total = total + LaurentPoly.monomial(
            table, 1, {avar: labels.count("A"), bvar: labels.count("B"), dvar: curves - 1}
        )
    return total


def mirror(u: LinkUniverse) -> LinkUniverse:
    """Exchange the A and B splittings at every crossing."""
    swapped = {vid: {"A": s["B"], "B": s["A"]} for vid, s in u.splittings.items()}
    return LinkUniverse(u.graph, swapped, u.free_loops)


# ---------------------------------------------------------------------------
# checkerboard colouring and the green-face graph
# ---------------------------------------------------------------------------


def _face_adjacency(g: RibbonGraph, walks: List[BoundaryWalk]) -> nx.MultiGraph:
    face_of = {c: i for i, walk in enumerate(walks) for c in walk.corners}
    fg = nx.MultiGraph()
    fg.add_nodes_from(range(len(walks)))
    for h in g.half_edges:
        # corners (pred h, h) and (h, succ h) lie on the two sides of h's edge
        fg.add_edge(face_of[g.pred(h)], face_of[h])
    return fg


def checkerboard_color(u: LinkUniverse) -> CheckerboardColoring:
    """Proper 2-colouring of the universe's faces.

    Per component of the face-adjacency graph, the face holding the
    lowest-id corner is green.
    """
    try:
        g = normalize_orientation(u.graph)
    except NonOrientableError as e:
        raise NotCheckerboardColorable(str(e))
    walks = faces(g)
    fg = _face_adjacency(g, walks)
    if not nx.is_bipartite(fg):
        raise NotCheckerboardColorable("faces on the two sides of some edge cannot receive different colours")
    green = set()
    for comp in nx.connected_components(fg):
        colors = nx.bipartite.color(fg.subgraph(comp))
        anchor = min(comp, key=lambda i: min(walks[i].corners))
        green |= {i for i in comp if colors[i] == colors[anchor]}
    logger.debug("coloured %d faces, %d green", len(walks), len(green))
    return CheckerboardColoring(g, tuple(walks), frozenset(green))


def _check_coloring(u: LinkUniverse, coloring: CheckerboardColoring):
    g = normalize_orientation(u.graph)
    if coloring.graph != g:
        raise InvalidColoring("colouring belongs to a different universe")
    face_of = coloring.face_of_corner()
    for h in g.half_edges:
        if (face_of[g.pred(h)] in coloring.green) == (face_of[h] in coloring.green):
            raise InvalidColoring(f"both sides of half-edge {h!r} have the same colour")


def green_face_graph(u: LinkUniverse, coloring: CheckerboardColoring) -> SignedRibbonGraph:
    """One vertex per green face, one edge per crossing.

    The rotation at a green vertex follows the crossings along its boundary
    walk. The crossing sign is +1 iff the A-splitting merges the two green
    corners at that crossing. Free loops become isolated vertices.
    """
    _check_coloring(u, coloring)
    g = coloring.graph
    face_of = coloring.face_of_corner()
    ends: Dict[str, List[str]] = {vid: [] for vid in g.vertex_ids}
    vertices = []
    for i, walk in enumerate(coloring.walks):
        if i not in coloring.green:
            continue
        rotation = []
        for h, _ in walk.states:
            corner = g.pred(h)
            rotation.append(f"{corner}^")
            ends[g.vertex_of(h)].append(f"{corner}^")
        vertices.append(Vertex(f"g{i}", tuple(rotation)))
    vertices.extend(Vertex(f"loop{i}") for i in range(u.free_loops))

    edges, signs = [], {}
    for v in g.vertices:
        rot = v.rotation
        first_green = next(i for i in range(4) if face_of[rot[i]] in coloring.green)
        merging = _hugging(rot, first_green + 1)
        signs[v.id] = 1 if _key(u.splitting(v.id, "A")) == _key(merging) else -1
        edges.append(Edge(v.id, tuple(ends[v.id]), 1))
    return SignedRibbonGraph(RibbonGraph(tuple(vertices), tuple(edges)), signs)


def green_face_contract(u: LinkUniverse, sg: SignedRibbonGraph) -> Tuple[bool, List[str]]:
    """medial(green-face graph) matches the universe in v, e, bc, eg, t and free loops."""
    m = medial(sg.graph)
    sm, su = stats(m.graph), stats(u.graph)
    diagnostics = []
    pairs = [
        ("v", len(m.graph.vertices), len(u.graph.vertices)),
        ("e", len(m.graph.edges), len(u.graph.edges)),
        ("bc", sm.bc, su.bc),
        ("eg", sm.eg, su.eg),
        ("t", sm.t, su.t),
        ("free loops", m.free_loops, u.free_loops),
    ]
    for label, got, want in pairs:
        if got != want:
            diagnostics.append(f"{label}: medial has {got}, universe has {want}")
    return not diagnostics, diagnostics


# ---------------------------------------------------------------------------
# signed polynomial and the Chmutov–Pak identity
# ---------------------------------------------------------------------------


def signed_r(sg: SignedRibbonGraph) -> LaurentPoly:
    """Sum over F of X^(r(G) - r(F) + s(F)) y^(n(F) - s(F)) z^(k(F) - bc(F) + n(F)).

    X stands for x - 1; s(F) is half the number of negative edges in F
    minus those outside F, so exponents can be half-integers.
    """
    g = sg.graph
    rank = stats(g).r
    negative = set(sg.negative_edges())
    edge_ids = g.edge_ids
    total = LaurentPoly.zero(SIGNED_VARS)
    for mask in range(1 << len(edge_ids)):
        f = [eid for i, eid in enumerate(edge_ids) if mask >> i & 1]
        inside = len(negative.intersection(f))
        s = Fraction(inside - (len(negative) - inside), 2)
        st = stats(g, f)
        total = total + LaurentPoly.monomial(
            SIGNED_VARS, 1, {"X": rank - st.r + s, "y": st.n - s, "z": st.eg}
        )
    return total


def _signed_side(sg: SignedRibbonGraph, table: VarTable, tvar: str, shift: int) -> LaurentPoly:
    a, b, t = (LaurentPoly.var(table, n) for n in (table.names[0], table.names[1], tvar))
    st = stats(sg.graph)
    bound = substitute(
        signed_r(sg), {"X": b * t * a.inverse(), "y": a * t * b.inverse(), "z": t.inverse()}, table
    )
    return a ** st.r * b ** st.n * t ** (st.k + shift) * bound


def chmutov_pak_rhs(sg: SignedRibbonGraph) -> LaurentPoly:
    """A^r B^n d^(k-1) R(G; Bd/A + 1, Ad/B, 1/d) in (A, B, d)."""
    return _signed_side(sg, BRACKET_VARS, "d", -1)


def verify_signed_transition(sg: SignedRibbonGraph) -> IdentityCheck:
    """Q(G_m; W-, t) = A^r B^n t^k R(G; Bt/A + 1, At/B, 1/t)."""
    a, b = LaurentPoly.var(SIGNED_Q_VARS, "A"), LaurentPoly.var(SIGNED_Q_VARS, "B")
    m = medial(sg.graph)
    lhs = q_transition(m, signed_weights(m, a, b, sg.crossing_signs))
    return check_identity("signed-transition", lhs, _signed_side(sg, SIGNED_Q_VARS, "t", 0))


def verify_chmutov_pak(u: LinkUniverse, both_colorings: bool = False) -> IdentityCheck:
    """[L](A, B, d) = A^r B^n d^(k-1) R(G; Bd/A + 1, Ad/B, 1/d) for the green-face graph G.

    The signed transition identity is checked too; the first failing
    identity is returned.
    """
    first = checkerboard_color(u)
    colorings = [first, first.complement()] if both_colorings else [first]
    bracket = kauffman_bracket(u)
    result: Optional[IdentityCheck] = None
    for coloring in colorings:
        sg = green_face_graph(u, coloring)
        check = check_identity("chmutov-pak", bracket, chmutov_pak_rhs(sg), f"green faces {sorted(coloring.green)}")
        if not check:
            return check
        signed = verify_signed_transition(sg)
        if not signed:
            return signed
        result = result or check
    return result


def verify_bracket_transition(u: LinkUniverse) -> IdentityCheck:
    """The direct state sum agrees with Q(universe; W_L, d) / d."""
    return check_identity("bracket-transition", bracket_state_sum(u), kauffman_bracket(u))


# ---------------------------------------------------------------------------
# construction and interchange
# ---------------------------------------------------------------------------


def universe_from_medial(m: MedialGraph, a_labels: Mapping[str, str]) -> LinkUniverse:
    """Universe on a medial graph; ``a_labels[v]`` names the A-splitting (uncut or cut)."""
    splittings = {}
    for vid in m.graph.vertex_ids:
        label = a_labels.get(vid)
        if label not in (UNCUT, CUT):
            raise LinkUniverseError(f"A-splitting at {vid!r} must be {UNCUT!r} or {CUT!r}, got {label!r}")
        other = CUT if label == UNCUT else UNCUT
        splittings[vid] = {"A": m.pairings[vid][label], "B": m.pairings[vid][other]}
    return LinkUniverse(m.graph, splittings, m.free_loops)


def colorable_universes(max_crossings: int) -> Iterator[LinkUniverse]:
    """Universes from medials of all-positive corpus graphs, under every A/B labelling.

    Two labellings are the same universe when the source graph with
    crossing signs in place of edge signs has the same canonical code.
    """
    from corpus import generate_corpus

    seen = set()
    for g in generate_corpus(max_crossings, "exhaustive"):
        if any(e.sign < 0 for e in g.edges):
            continue
        m = medial(g)
        for labels in product((UNCUT, CUT), repeat=len(g.edges)):
            signed = RibbonGraph(
                g.vertices, tuple(Edge(e.id, e.halves, 1 if lab == UNCUT else -1) for e, lab in zip(g.edges, labels))
            )
            code = canonical_code(signed)
            if code in seen:
                continue
            seen.add(code)
            yield universe_from_medial(m, {e.id: lab for e, lab in zip(g.edges, labels)})


def universe_to_json(u: LinkUniverse) -> dict:
    doc = graph_to_json(u.graph, u.free_loops)
    doc["crossings"] = [
        {"vertex": vid, "A": [list(p) for p in u.splitting(vid, "A")], "B": [list(p) for p in u.splitting(vid, "B")]}
        for vid in sorted(u.graph.vertex_ids)
    ]
    return doc


def universe_from_json(doc: Mapping) -> LinkUniverse:
    g, free_loops = graph_from_json(doc)
    splittings = {}
    try:
        for crossing in doc.get("crossings", ()):
            splittings[str(crossing["vertex"])] = {
                label: tuple(tuple(str(h) for h in pair) for pair in crossing[label]) for label in ("A", "B")
            }
    except (KeyError, TypeError) as e:
        raise InterchangeError(f"malformed crossing entry: {e!r}")
    try:
        return LinkUniverse(g, splittings, free_loops)
    except LinkUniverseError as e:
        raise InterchangeError(str(e))


def signed_to_json(sg: SignedRibbonGraph) -> dict:
    doc = graph_to_json(sg.graph)
    doc["crossing_signs"] = dict(sorted(sg.crossing_signs.items()))
    return doc
