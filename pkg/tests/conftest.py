from pathlib import Path

import pytest

from ribbon_core import ChordDiagram, from_chord_diagram, from_edge_rotations
from links import universe_from_json
from utils import load_graph, load_json

EXAMPLES = Path(__file__).resolve().parent.parent / "data" / "examples"


@pytest.fixture
def examples_dir():
    return EXAMPLES


@pytest.fixture
def digon():
    """Two vertices joined by a positive and a negative edge: a Möbius band."""
    g, _ = load_graph(str(EXAMPLES / "fig1_digon.json"))
    return g


@pytest.fixture
def triangle():
    g, _ = load_graph(str(EXAMPLES / "plane_triangle.json"))
    return g


@pytest.fixture
def plane_loop():
    return from_edge_rotations({"v": ["a", "a"]})


@pytest.fixture
def twisted_loop():
    return from_edge_rotations({"v": ["a", "a"]}, {"a": -1})


@pytest.fixture
def torus_bouquet():
    return from_chord_diagram(ChordDiagram.of(["a", "b", "a", "b"]))


@pytest.fixture
def bridge():
    return from_edge_rotations({"u": ["e"], "v": ["e"]})


@pytest.fixture
def one_crossing():
    return universe_from_json(load_json(str(EXAMPLES / "one_crossing_universe.json")))


@pytest.fixture(scope="session")
def corpus3():
    """Every connected ribbon graph with at most three edges."""
    from corpus import exhaustive_corpus

    return exhaustive_corpus(3)
