"""Test corpora of connected ribbon graphs.

Exhaustive mode grows every graph by one edge at a time (a loop, an edge
between two existing vertices, or a pendant edge to a new vertex) over
every corner position and both signs, keeping one graph per canonical
code. Each connected graph arises this way, since removing a non-bridge
edge or a pendant edge leaves a smaller connected graph. Random mode
applies the same growth steps with choices drawn from a seeded numpy
generator.
"""

import logging
from typing import Iterator, List

import numpy as np

from ribbon_core import Edge, RibbonGraph, Vertex, canonical_code

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_EDGES = 7


class CorpusBoundError(ValueError):
    pass


def _insert(rotation, position: int, half: str):
    return rotation[:position] + (half,) + rotation[position:]


def _with_vertex(g: RibbonGraph, vid: str, rotation) -> tuple:
    return tuple(Vertex(v.id, rotation) if v.id == vid else v for v in g.vertices)


def _loop_extensions(g: RibbonGraph, eid: str, sign: int) -> Iterator[RibbonGraph]:
    h0, h1 = f"{eid}.0", f"{eid}.1"
    edge = Edge(eid, (h0, h1), sign)
    for v in g.vertices:
        for i in range(max(len(v.rotation), 1)):
            once = _insert(v.rotation, i, h0)
            for j in range(len(once)):
                yield RibbonGraph(_with_vertex(g, v.id, _insert(once, j + 1, h1)), g.edges + (edge,))


def _chord_extensions(g: RibbonGraph, eid: str, sign: int) -> Iterator[RibbonGraph]:
    h0, h1 = f"{eid}.0", f"{eid}.1"
    edge = Edge(eid, (h0, h1), sign)
    for a, u in enumerate(g.vertices):
        for v in g.vertices[a + 1:]:
            for i in range(max(len(u.rotation), 1)):
                for j in range(max(len(v.rotation), 1)):
                    vertices = _with_vertex(g, u.id, _insert(u.rotation, i, h0))
                    vertices = tuple(Vertex(x.id, _insert(v.rotation, j, h1)) if x.id == v.id else x for x in vertices)
                    yield RibbonGraph(vertices, g.edges + (edge,))


def _pendant_extensions(g: RibbonGraph, eid: str, sign: int) -> Iterator[RibbonGraph]:
    h0, h1 = f"{eid}.0", f"{eid}.1"
    edge = Edge(eid, (h0, h1), sign)
    leaf = Vertex(f"v{len(g.vertices)}", (h1,))
    for v in g.vertices:
        for i in range(max(len(v.rotation), 1)):
            yield RibbonGraph(_with_vertex(g, v.id, _insert(v.rotation, i, h0)) + (leaf,), g.edges + (edge,))


def _extensions(g: RibbonGraph) -> Iterator[RibbonGraph]:
    eid = f"e{len(g.edges)}"
    for sign in (1, -1):
        yield from _loop_extensions(g, eid, sign)
        yield from _chord_extensions(g, eid, sign)
        yield from _pendant_extensions(g, eid, sign)


def exhaustive_corpus(max_edges: int) -> List[RibbonGraph]:
    if max_edges < 0 or max_edges > MAX_EXHAUSTIVE_EDGES:
        raise CorpusBoundError(f"exhaustive corpus supports 0..{MAX_EXHAUSTIVE_EDGES} edges, got {max_edges}")
    level = [RibbonGraph((Vertex("v0"),))]
    corpus = list(level)
    for size in range(1, max_edges + 1):
        seen = set()
        following = []
        for g in level:
            for h in _extensions(g):
                code = canonical_code(h)
                if code not in seen:
                    seen.add(code)
                    following.append(h)
        logger.debug("%d graphs with %d edges", len(following), size)
        corpus.extend(following)
        level = following
    return corpus


def random_graph(rng: np.random.Generator, edges: int) -> RibbonGraph:
    g = RibbonGraph((Vertex("v0"),))
    for _ in range(edges):
        eid = f"e{len(g.edges)}"
        sign = int(rng.choice([1, -1]))
        kinds = ["loop", "pendant"] + (["chord"] if len(g.vertices) > 1 else [])
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "loop":
            options = list(_loop_extensions(g, eid, sign))
        elif kind == "chord":
            options = list(_chord_extensions(g, eid, sign))
        else:
            options = list(_pendant_extensions(g, eid, sign))
        g = options[int(rng.integers(len(options)))]
    return g


def random_corpus(max_edges: int, seed: int, count: int) -> List[RibbonGraph]:
    if max_edges < 0 or count < 0:
        raise CorpusBoundError("random corpus needs nonnegative max_edges and count")
    rng = np.random.default_rng(seed)
    return [random_graph(rng, int(rng.integers(0, max_edges + 1))) for _ in range(count)]


def generate_corpus(max_edges: int, mode: str = "exhaustive", seed: int = 0, count: int = 0) -> List[RibbonGraph]:
    """Connected ribbon graphs with at most ``max_edges`` edges."""
    if mode == "exhaustive":
        return exhaustive_corpus(max_edges)
    if mode == "random":
        return random_corpus(max_edges, seed, count)
    raise CorpusBoundError(f"unknown corpus mode {mode!r}")
