"""Ribbon graphs as signed rotation systems.

A ribbon graph is stored as vertices carrying a cyclic rotation of
half-edge ids and edges pairing two half-edges with a sign (-1 marks a
half-twisted ribbon). Everything topological (components, boundary
components, orientability, Euler genus, faces, dual, medial) is derived
from one face-walk kernel, ``faces``.

Walk states are ``(h, s)``: leave the current vertex along half-edge ``h``
with local orientation flag ``s``. Crossing a negative edge toggles the
flag; at the far end the walk turns to the rotation successor (``s = +1``)
or predecessor (``s = -1``). Each boundary component shows up as two
orbits, one per direction; they are identified by the corners they visit.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Pairing = Tuple[Tuple[str, str], Tuple[str, str]]


class RibbonGraphError(ValueError):
    """Invalid ribbon graph input or an operation outside its domain."""


class UnknownIdError(RibbonGraphError, KeyError):
    pass


class LoopContractionError(RibbonGraphError):
    pass


class NotABouquetError(RibbonGraphError):
    pass


class NonOrientableError(RibbonGraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    rotation: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rotation", tuple(self.rotation))


@dataclass(frozen=True)
class Edge:
    id: str
    halves: Tuple[str, str]
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "halves", tuple(self.halves))


@dataclass(frozen=True)
class _Index:
    vertex_of: Dict[str, str]
    position: Dict[str, int]
    edge_of: Dict[str, str]
    other: Dict[str, str]
    vertices: Dict[str, Vertex]
    edges: Dict[str, Edge]


@dataclass(frozen=True)
class RibbonGraph:
    """Immutable signed rotation system; ids are opaque strings."""

    vertices: Tuple[Vertex, ...] = ()
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def _idx(self) -> _Index:
        vertex_of, position, edge_of, other = {}, {}, {}, {}
        for v in self.vertices:
            for i, h in enumerate(v.rotation):
                vertex_of[h] = v.id
                position[h] = i
        for e in self.edges:
            h1, h2 = e.halves
            edge_of[h1] = edge_of[h2] = e.id
            other[h1], other[h2] = h2, h1
        return _Index(
            vertex_of, position, edge_of, other,
            {v.id: v for v in self.vertices}, {e.id: e for e in self.edges},
        )

    # ---- lookups ------------------------------------------------------

    @property
    def vertex_ids(self) -> List[str]:
        return [v.id for v in self.vertices]

    @property
    def edge_ids(self) -> List[str]:
        return [e.id for e in self.edges]

    @property
    def half_edges(self) -> List[str]:
        return [h for v in self.vertices for h in v.rotation]

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._idx.vertices[vid]
        except KeyError:
            raise UnknownIdError(f"unknown vertex {vid!r}")

    def edge(self, eid: str) -> Edge:
        try:
            return self._idx.edges[eid]
        except KeyError:
            raise UnknownIdError(f"unknown edge {eid!r}")

    def rotation(self, vid: str) -> Tuple[str, ...]:
        return self.vertex(vid).rotation

    def vertex_of(self, h: str) -> str:
        try:
            return self._idx.vertex_of[h]
        except KeyError:
            raise UnknownIdError(f"unknown half-edge {h!r}")

    def edge_of(self, h: str) -> str:
        try:
            return self._idx.edge_of[h]
        except KeyError:
            raise UnknownIdError(f"unknown half-edge {h!r}")

    def other(self, h: str) -> str:
        return self._idx.other[h]

    def sign(self, eid: str) -> int:
        return self.edge(eid).sign

    def succ(self, h: str) -> str:
        rot = self.rotation(self.vertex_of(h))
        return rot[(self._idx.position[h] + 1) % len(rot)]

    def pred(self, h: str) -> str:
        rot = self.rotation(self.vertex_of(h))
        return rot[(self._idx.position[h] - 1) % len(rot)]

    def is_loop(self, eid: str) -> bool:
        h1, h2 = self.edge(eid).halves
        return self.vertex_of(h1) == self.vertex_of(h2)

    def endpoints(self, eid: str) -> Tuple[str, str]:
        h1, h2 = self.edge(eid).halves
        return self.vertex_of(h1), self.vertex_of(h2)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SubgraphStats:
    k: int
    r: int
    n: int
    bc: int
    t: int
    eg: int


@dataclass(frozen=True)
class BoundaryWalk:
    """One boundary component: a representative directed walk and its corners.

    ``corners`` holds, for each corner visited, the half-edge whose rotation
    successor closes that corner. A vertex without half-edges in the
    subgraph is a boundary component on its own, with no states.
    """

    states: Tuple[Tuple[str, int], ...]
    corners: FrozenSet[str]
    vertex: Optional[str] = None


@dataclass(frozen=True)
class ChordDiagram:
    """Cyclic word of chord labels (each twice) with a sign per chord."""

    word: Tuple[str, ...]
    signs: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        word = tuple(self.word)
        signs = dict(self.signs)
        labels = []
        for label in word:
            if label not in labels:
                labels.append(label)
        for label in labels:
            if word.count(label) != 2:
                raise RibbonGraphError(f"chord {label!r} must occur exactly twice in {word}")
            signs.setdefault(label, 1)
        unknown = set(signs) - set(labels)
        if unknown:
            raise RibbonGraphError(f"signs given for absent chords {sorted(unknown)}")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "signs", tuple(sorted(signs.items())))

    @classmethod
    def of(cls, word: Sequence[str], signs: Mapping[str, int] = None) -> "ChordDiagram":
        return cls(tuple(word), tuple((signs or {}).items()))

    @property
    def chords(self) -> List[str]:
        seen = []
        for label in self.word:
            if label not in seen:
                seen.append(label)
        return seen

    def sign(self, label: str) -> int:
        return dict(self.signs)[label]

    def __len__(self) -> int:
        return len(self.word) // 2

    def __str__(self) -> str:
        return " ".join(f"{c}{'-' if self.sign(c) < 0 else ''}" for c in self.word)


@dataclass(frozen=True)
class MedialGraph:
    """A 4-regular ribbon graph plus vertexless free loops.

    ``source_edge`` maps each medial vertex to the edge of the graph it sits
    on; ``pairings`` records, per medial vertex, the three ways to pair its
    four half-edges, labelled ``uncut``, ``cut`` and ``crossing``.
    """

    graph: RibbonGraph
    free_loops: int = 0
    source_edge: Dict[str, str] = field(default_factory=dict, hash=False)
    pairings: Dict[str, Dict[str, Pairing]] = field(default_factory=dict, hash=False)

    @property
    def has_back_reference(self) -> bool:
        return bool(self.source_edge) or not self.graph.vertices


class _DisjointSets:
    """Union-find with path halving."""

    def __init__(self, items: Iterable[str] = ()):
        self.parent = {x: x for x in items}

    def add(self, x: str):
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: str, y: str) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True

    def count(self) -> int:
        return sum(1 for x in self.parent if self.find(x) == x)


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


def from_edge_rotations(rotations: Mapping[str, Sequence[str]], signs: Mapping[str, int] = None) -> RibbonGraph:
    """Build a graph from per-vertex lists of edge labels.

    Each label must appear twice overall; its first appearance becomes
    half-edge ``label.0`` and its second ``label.1``.

      from_edge_rotations({"u": ["a", "b"], "v": ["a", "b"]}, {"b": -1})
    """
    signs = dict(signs or {})
    seen: Dict[str, int] = {}
    vertices = []
    for vid, labels in rotations.items():
        rot = []
        for label in labels:
            count = seen.get(label, 0)
            if count >= 2:
                raise RibbonGraphError(f"edge label {label!r} used more than twice")
            rot.append(f"{label}.{count}")
            seen[label] = count + 1
        vertices.append(Vertex(vid, tuple(rot)))
    unpaired = [label for label, count in seen.items() if count != 2]
    if unpaired:
        raise RibbonGraphError(f"edge labels used once: {unpaired}")
    edges = [Edge(label, (f"{label}.0", f"{label}.1"), signs.get(label, 1)) for label in seen]
    return RibbonGraph(tuple(vertices), tuple(edges))


def validate(g: RibbonGraph) -> Tuple[bool, List[str]]:
    """Check the rotation/edge bookkeeping; diagnostics come in check order."""
    diagnostics: List[str] = []
    vids = [v.id for v in g.vertices]
    for vid in sorted({v for v in vids if vids.count(v) > 1}):
        diagnostics.append(f"duplicated vertex id {vid!r}")
    eids = [e.id for e in g.edges]
    for eid in sorted({e for e in eids if eids.count(e) > 1}):
        diagnostics.append(f"duplicated edge id {eid!r}")

    in_rotation: Dict[str, int] = {}
    for v in g.vertices:
        for h in v.rotation:
            in_rotation[h] = in_rotation.get(h, 0) + 1
    for h, count in in_rotation.items():
        if count > 1:
            diagnostics.append(f"duplicated half-edge {h!r} in rotations")

    in_edges: Dict[str, int] = {}
    for e in g.edges:
        if len(e.halves) != 2:
            diagnostics.append(f"edge {e.id!r} must have exactly two half-edges")
            continue
        if e.halves[0] == e.halves[1]:
            diagnostics.append(f"edge {e.id!r} uses half-edge {e.halves[0]!r} twice")
        if e.sign not in (1, -1):
            diagnostics.append(f"edge {e.id!r} has sign {e.sign!r}, expected 1 or -1")
        for h in e.halves:
            in_edges[h] = in_edges.get(h, 0) + 1
            if h not in in_rotation:
                diagnostics.append(f"orphan half-edge {h!r} of edge {e.id!r}")
    for h, count in in_edges.items():
        if count > 1:
            diagnostics.append(f"duplicated half-edge {h!r} in edges")
    for h in in_rotation:
        if h not in in_edges:
            diagnostics.append(f"half-edge {h!r} belongs to no edge")
    return not diagnostics, diagnostics


# ---------------------------------------------------------------------------
# subgraph invariants
# ---------------------------------------------------------------------------


def _edge_subset(g: RibbonGraph, a: Optional[Iterable[str]]) -> FrozenSet[str]:
    if a is None:
        return frozenset(g.edge_ids)
    a = frozenset(a)
    known = set(g.edge_ids)
    for eid in a:
        if eid not in known:
            raise UnknownIdError(f"unknown edge {eid!r}")
    return a


def _component_sets(g: RibbonGraph, a: FrozenSet[str]) -> _DisjointSets:
    sets = _DisjointSets(g.vertex_ids)
    for eid in a:
        u, v = g.endpoints(eid)
        sets.union(u, v)
    return sets


def faces(g: RibbonGraph, a: Optional[Iterable[str]] = None) -> List[BoundaryWalk]:
    """Boundary components of the spanning ribbon subgraph on ``a``."""
    a = _edge_subset(g, a)
    rotations = {v.id: tuple(h for h in v.rotation if g.edge_of(h) in a) for v in g.vertices}
    position = {h: i for rot in rotations.values() for i, h in enumerate(rot)}

    def turn(h: str, s: int) -> str:
        rot = rotations[g.vertex_of(h)]
        return rot[(position[h] + s) % len(rot)]

    def corner(h: str, s: int) -> str:
        return turn(h, -1) if s > 0 else h

    # a face keeps the orbit with more +1 states; ties go to the first found
    found: Dict[FrozenSet[str], List[Tuple[Tuple[str, int], ...]]] = {}
    slots: List[object] = []
    seen_states = set()
    for v in g.vertices:
        rot = rotations[v.id]
        if not rot:
            slots.append(BoundaryWalk((), frozenset(), v.id))
            continue
        for h in rot:
            for s in (1, -1):
                if (h, s) in seen_states:
                    continue
                orbit = []
                state = (h, s)
                while state not in seen_states:
                    seen_states.add(state)
                    orbit.append(state)
                    cur, flag = state
                    far = g.other(cur)
                    flag = flag * g.sign(g.edge_of(cur))
                    state = (turn(far, flag), flag)
                corners = frozenset(corner(x, f) for x, f in orbit)
                if corners not in found:
                    found[corners] = []
                    slots.append(corners)
                found[corners].append(tuple(orbit))

    walks: List[BoundaryWalk] = []
    for slot in slots:
        if isinstance(slot, BoundaryWalk):
            walks.append(slot)
            continue
        best = max(found[slot], key=lambda o: sum(1 for _, f in o if f > 0))
        walks.append(BoundaryWalk(best, slot))
    return walks


def _orientation_signs(g: RibbonGraph, a: FrozenSet[str]) -> Optional[Dict[str, int]]:
    """Vertex switching that makes every edge of ``a`` positive, if any."""
    adjacency: Dict[str, List[Tuple[str, int]]] = {vid: [] for vid in g.vertex_ids}
    for eid in a:
        u, v = g.endpoints(eid)
        s = g.sign(eid)
        adjacency[u].append((v, s))
        if u != v:
            adjacency[v].append((u, s))
    sigma: Dict[str, int] = {}
    for root in g.vertex_ids:
        if root in sigma:
            continue
        sigma[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, s in adjacency[u]:
                want = sigma[u] * s
                if v not in sigma:
                    sigma[v] = want
                    queue.append(v)
                elif sigma[v] != want:
                    return None
    return sigma


def stats(g: RibbonGraph, a: Optional[Iterable[str]] = None) -> SubgraphStats:
    """k, r, n, bc, t and Euler genus of the spanning subgraph on ``a`` (default: all edges)."""
    a = _edge_subset(g, a)
    k = _component_sets(g, a).count()
    r = len(g.vertices) - k
    n = len(a) - r
    bc = len(faces(g, a))
    t = 0 if _orientation_signs(g, a) is not None else 1
    return SubgraphStats(k=k, r=r, n=n, bc=bc, t=t, eg=k - bc + n)


def component_count(g: RibbonGraph) -> int:
    return _component_sets(g, frozenset(g.edge_ids)).count()


def is_bridge(g: RibbonGraph, eid: str) -> bool:
    if g.is_loop(eid):
        return False
    rest = frozenset(e for e in g.edge_ids if e != eid)
    return _component_sets(g, rest).count() > component_count(g)


def components(g: RibbonGraph) -> List[RibbonGraph]:
    """Connected components, in order of their first vertex."""
    sets = _component_sets(g, frozenset(g.edge_ids))
    groups: Dict[str, Tuple[List[Vertex], List[Edge]]] = {}
    for v in g.vertices:
        groups.setdefault(sets.find(v.id), ([], []))[0].append(v)
    for e in g.edges:
        groups[sets.find(g.vertex_of(e.halves[0]))][1].append(e)
    return [RibbonGraph(tuple(vs), tuple(es)) for vs, es in groups.values()]


# ---------------------------------------------------------------------------
# minors and surgery
# ---------------------------------------------------------------------------


def delete(g: RibbonGraph, eid: str) -> RibbonGraph:
    e = g.edge(eid)
    drop = set(e.halves)
    vertices = tuple(Vertex(v.id, tuple(h for h in v.rotation if h not in drop)) for v in g.vertices)
    return RibbonGraph(vertices, tuple(x for x in g.edges if x.id != eid))


def vertex_flip(g: RibbonGraph, vid: str) -> RibbonGraph:
    """Reverse the rotation at ``vid`` and toggle the signs of its non-loop edges."""
    g.vertex(vid)
    vertices = tuple(Vertex(v.id, v.rotation[::-1]) if v.id == vid else v for v in g.vertices)
    edges = []
    for e in g.edges:
        ends = [g.vertex_of(h) == vid for h in e.halves]
        edges.append(Edge(e.id, e.halves, -e.sign) if sum(ends) == 1 else e)
    return RibbonGraph(vertices, tuple(edges))


def contract(g: RibbonGraph, eid: str) -> RibbonGraph:
    """Contract a non-loop edge, flipping its second endpoint first if it is negative."""
    e = g.edge(eid)
    h1, h2 = e.halves
    u, v = g.vertex_of(h1), g.vertex_of(h2)
    if u == v:
        raise LoopContractionError(f"cannot contract loop {eid!r}")
    if e.sign < 0:
        g = vertex_flip(g, v)
    ru, rv = g.rotation(u), g.rotation(v)
    i, j = ru.index(h1), rv.index(h2)
    merged = ru[i + 1:] + ru[:i] + rv[j + 1:] + rv[:j]
    vertices = tuple(Vertex(u, merged) if x.id == u else x for x in g.vertices if x.id != v)
    return RibbonGraph(vertices, tuple(x for x in g.edges if x.id != eid))


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name = name + "'"
    taken.add(name)
    return name


def disjoint_union(g: RibbonGraph, h: RibbonGraph) -> RibbonGraph:
    """Union of two graphs; ids of ``h`` that collide with ``g`` are primed."""
    taken_v, taken_e, taken_h = set(g.vertex_ids), set(g.edge_ids), set(g.half_edges)
    vmap = {vid: _fresh(vid, taken_v) for vid in h.vertex_ids}
    hmap = {x: _fresh(x, taken_h) for x in h.half_edges}
    for e in h.edges:
        for x in e.halves:
            if x not in hmap:
                hmap[x] = _fresh(x, taken_h)
    emap = {eid: _fresh(eid, taken_e) for eid in h.edge_ids}
    vertices = g.vertices + tuple(Vertex(vmap[v.id], tuple(hmap[x] for x in v.rotation)) for v in h.vertices)
    edges = g.edges + tuple(Edge(emap[e.id], tuple(hmap[x] for x in e.halves), e.sign) for e in h.edges)
    return RibbonGraph(vertices, edges)


def one_point_join(g: RibbonGraph, h: RibbonGraph, v_g: str, v_h: str) -> RibbonGraph:
    """Merge ``v_g`` and ``v_h``; the new rotation is rotation(v_g) followed by rotation(v_h)."""
    g.vertex(v_g)
    h.vertex(v_h)
    union = disjoint_union(g, h)
    joined = union.vertices[len(g.vertices) + h.vertex_ids.index(v_h)]
    rotation = g.rotation(v_g) + joined.rotation
    vertices = tuple(
        Vertex(v_g, rotation) if v.id == v_g else v for v in union.vertices if v.id != joined.id
    )
    return RibbonGraph(vertices, union.edges)


# ---------------------------------------------------------------------------
# dual, medial, chord diagrams
# ---------------------------------------------------------------------------


def dual(g: RibbonGraph) -> RibbonGraph:
    """Dual ribbon graph: one vertex per boundary walk, one edge e* per edge e.

    The rotation at a face vertex lists the edge sides in walk order. e* is
    negative when both walks of e leave from the same half-edge of e, i.e.
    they run along the ribbon in the same direction.
    """
    walks = faces(g)
    vertices = []
    traversals: Dict[str, List[Tuple[str, str]]] = {eid: [] for eid in g.edge_ids}
    for i, walk in enumerate(walks):
        rotation = []
        for h, s in walk.states:
            dual_half = f"{h}{'+' if s > 0 else '-'}"
            rotation.append(dual_half)
            traversals[g.edge_of(h)].append((dual_half, h))
        vertices.append(Vertex(f"f{i}", tuple(rotation)))
    edges = []
    for e in g.edges:
        (d1, from1), (d2, from2) = traversals[e.id]
        edges.append(Edge(e.id, (d1, d2), -1 if from1 == from2 else 1))
    return RibbonGraph(tuple(vertices), tuple(edges))


def _slot(h: str, side: str) -> str:
    return f"{h}:{side}"


def _crossing(rotation: Tuple[str, ...], uncut: Pairing, cut: Pairing) -> Pairing:
    pairs = {frozenset(p) for p in uncut + cut}
    a = rotation[0]
    for b in rotation[1:]:
        if frozenset((a, b)) not in pairs:
            rest = tuple(x for x in rotation if x not in (a, b))
            return (a, b), rest
    raise RibbonGraphError(f"no crossing pairing at rotation {rotation}")


def medial(g: RibbonGraph) -> MedialGraph:
    """Topological medial graph.

    Vertex m_e sits on edge e = {h, h'}; slot ``h:R`` leads into the corner
    (h, succ h) and ``h:L`` into (pred h, h). Around m_e the slots read
    (h:R, h:L, h':R, h':L) for a positive edge and (h:R, h:L, h':L, h':R)
    for a negative one, whose h'-slots carry a half-twist. A medial edge is
    negative iff exactly one of its two slots is twisted. Isolated vertices
    become free loops.
    """
    free_loops = 0
    twisted = set()
    vertices, pairings, source = [], {}, {}
    for e in g.edges:
        h, h2 = e.halves
        if e.sign > 0:
            rotation = (_slot(h, "R"), _slot(h, "L"), _slot(h2, "R"), _slot(h2, "L"))
            uncut = ((_slot(h, "R"), _slot(h2, "L")), (_slot(h, "L"), _slot(h2, "R")))
        else:
            rotation = (_slot(h, "R"), _slot(h, "L"), _slot(h2, "L"), _slot(h2, "R"))
            uncut = ((_slot(h, "R"), _slot(h2, "R")), (_slot(h, "L"), _slot(h2, "L")))
            twisted.update((_slot(h2, "R"), _slot(h2, "L")))
        cut = ((_slot(h, "R"), _slot(h, "L")), (_slot(h2, "R"), _slot(h2, "L")))
        vertices.append(Vertex(e.id, rotation))
        pairings[e.id] = {"uncut": uncut, "cut": cut, "crossing": _crossing(rotation, uncut, cut)}
        source[e.id] = e.id
    edges = []
    for v in g.vertices:
        if not v.rotation:
            free_loops += 1
            continue
        for i, h in enumerate(v.rotation):
            nxt = v.rotation[(i + 1) % len(v.rotation)]
            a, b = _slot(h, "R"), _slot(nxt, "L")
            marks = (a in twisted) + (b in twisted)
            edges.append(Edge(f"c:{h}", (a, b), -1 if marks % 2 else 1))
    return MedialGraph(RibbonGraph(tuple(vertices), tuple(edges)), free_loops, source, pairings)


def medial_contract(g: RibbonGraph, m: Optional[MedialGraph] = None) -> Tuple[bool, List[str]]:
    """Check the invariants a medial graph must share with its source."""
    m = m or medial(g)
    diagnostics = []
    sg, sm = stats(g), stats(m.graph)
    checks = [
        ("v(G_m) = e(G)", len(m.graph.vertices), len(g.edges)),
        ("e(G_m) = 2 e(G)", len(m.graph.edges), 2 * len(g.edges)),
        ("bc(G_m) + 2 free loops = bc(G) + v(G)", sm.bc + 2 * m.free_loops, sg.bc + len(g.vertices)),
        ("k(G_m) + free loops = k(G)", sm.k + m.free_loops, sg.k),
        ("eg(G_m) = eg(G)", sm.eg, sg.eg),
        ("t(G_m) = t(G)", sm.t, sg.t),
    ]
    for label, got, want in checks:
        if got != want:
            diagnostics.append(f"{label} fails: {got} != {want}")
    for v in m.graph.vertices:
        if len(v.rotation) != 4:
            diagnostics.append(f"medial vertex {v.id!r} has degree {len(v.rotation)}")
    return not diagnostics, diagnostics


def trace_state(g: RibbonGraph, choice: Mapping[str, Pairing]) -> int:
    """Number of closed curves after splitting every vertex by its chosen pairing."""
    partner: Dict[str, str] = {}
    for vid, pairing in choice.items():
        for a, b in pairing:
            partner[a], partner[b] = b, a
    missing = [h for h in g.half_edges if h not in partner]
    if missing:
        raise RibbonGraphError(f"state leaves half-edges unpaired: {missing[:4]}")
    seen = set()
    curves = 0
    for start in g.half_edges:
        if start in seen:
            continue
        curves += 1
        h = start
        while h not in seen:
            seen.add(h)
            far = g.other(h)
            seen.add(far)
            h = partner[far]
    return curves


def to_chord_diagram(g: RibbonGraph) -> ChordDiagram:
    if len(g.vertices) != 1:
        raise NotABouquetError(f"a bouquet has one vertex, got {len(g.vertices)}")
    rotation = g.vertices[0].rotation
    word = tuple(g.edge_of(h) for h in rotation)
    return ChordDiagram(word, tuple((e.id, e.sign) for e in g.edges))


def from_chord_diagram(d: ChordDiagram, vid: str = "v") -> RibbonGraph:
    return from_edge_rotations({vid: list(d.word)}, dict(d.signs))


def normalize_orientation(g: RibbonGraph) -> RibbonGraph:
    """Vertex-flipped copy of an orientable graph with every edge positive."""
    sigma = _orientation_signs(g, frozenset(g.edge_ids))
    if sigma is None:
        raise NonOrientableError("graph is not orientable; signs cannot all be made positive")
    for vid in g.vertex_ids:
        if sigma[vid] < 0:
            g = vertex_flip(g, vid)
    return g


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------


def _rooted_code(g: RibbonGraph, root: str) -> tuple:
    vlabel = {g.vertex_of(root): 0}
    entry = {g.vertex_of(root): root}
    hlabel: Dict[str, int] = {}
    order = [g.vertex_of(root)]
    i = 0
    while i < len(order):
        vid = order[i]
        rot = g.rotation(vid)
        start = rot.index(entry[vid])
        for h in rot[start:] + rot[:start]:
            hlabel.setdefault(h, len(hlabel))
            far = g.other(h)
            w = g.vertex_of(far)
            if w not in vlabel:
                vlabel[w] = len(order)
                entry[w] = far
                order.append(w)
        i += 1
    code = []
    for vid in order:
        rot = g.rotation(vid)
        start = rot.index(entry[vid])
        code.append(tuple(
            (vlabel[g.vertex_of(g.other(h))], hlabel.setdefault(g.other(h), len(hlabel)), g.sign(g.edge_of(h)))
            for h in rot[start:] + rot[:start]
        ))
    return tuple(code)


def canonical_code(g: RibbonGraph) -> tuple:
    """Serialization invariant under relabelling of vertices, edges and half-edges."""
    codes = []
    for comp in components(g):
        halves = comp.half_edges
        if not halves:
            codes.append(())
            continue
        codes.append(min(_rooted_code(comp, h) for h in halves))
    return tuple(sorted(codes))
