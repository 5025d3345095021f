import os
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from collections.abc import Mapping

from dotenv import load_dotenv

from ribbon_core import Edge, RibbonGraph, RibbonGraphError, Vertex, validate

logger = logging.getLogger(__name__)

DEFAULT_LOG_LEVEL = "WARNING"
THREADS_ENV = "RIBBONFORGE_THREADS"
LOG_LEVEL_ENV = "RIBBONFORGE_LOG_LEVEL"


class InterchangeError(RibbonGraphError):
    """Malformed or invalid interchange document."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics) or [message]


def setup_logging(level=None):
    """Configure a single stderr handler for the whole package"""
    load_dotenv()
    level = (level or os.getenv(LOG_LEVEL_ENV) or DEFAULT_LOG_LEVEL).upper()
    numeric = getattr(logging, level, None)
    if not isinstance(numeric, int):
        numeric = logging.WARNING
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(numeric)


def get_thread_count():
    """Worker cap from RIBBONFORGE_THREADS (default 1)"""
    load_dotenv()
    raw = os.getenv(THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV, raw)
        return 1
    if count < 1:
        logger.warning("Ignoring %s=%r: must be at least 1", THREADS_ENV, raw)
        return 1
    return count


def chunk_range(total, parts):
    """Split range(total) into at most ``parts`` contiguous (start, stop) blocks"""
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    blocks, start = [], 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        blocks.append((start, stop))
        start = stop
    return blocks


def parallel_sum(fn, items, zero, workers=None):
    """Sum ``fn(item)`` over items, fanned out over worker threads.

    Partial results are combined in item order, so the result does not
    depend on the worker count.
    """
    items = list(items)
    workers = workers or get_thread_count()
    if workers <= 1 or len(items) <= 1:
        partials = [fn(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(fn, items))
    total = zero
    for part in partials:
        total = total + part
    return total


def load_json(path):
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InterchangeError(f"malformed JSON in {path}: {e}")
    except OSError as e:
        raise InterchangeError(f"cannot read {path}: {e}")


def save_json(path, doc):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)


def dump_json(doc):
    """Deterministic JSON text for stdout"""
    return json.dumps(doc, indent=2, sort_keys=True)


def graph_to_json(g, free_loops=0):
    """Interchange document; vertices and edges sorted by id"""
    doc = {
        "vertices": [{"id": v.id, "rotation": list(v.rotation)} for v in sorted(g.vertices, key=lambda v: v.id)],
        "edges": [
            {"id": e.id, "halves": list(e.halves), "sign": e.sign} for e in sorted(g.edges, key=lambda e: e.id)
        ],
    }
    if free_loops:
        doc["free_loops"] = free_loops
    return doc


def medial_to_json(m):
    doc = graph_to_json(m.graph, m.free_loops)
    if m.source_edge:
        doc["source_edge"] = dict(sorted(m.source_edge.items()))
    return doc


def graph_from_json(doc):
    """Parse and validate an interchange document into (graph, free_loops)"""
    if not isinstance(doc, Mapping):
        raise InterchangeError("ribbon graph document must be a JSON object")
    try:
        vertices = tuple(Vertex(str(v["id"]), tuple(str(h) for h in v.get("rotation", ()))) for v in doc.get("vertices", ()))
        edges = []
        for e in doc.get("edges", ()):
            halves = tuple(str(h) for h in e["halves"])
            edges.append(Edge(str(e["id"]), halves, int(e.get("sign", 1))))
        free_loops = int(doc.get("free_loops", 0))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InterchangeError(f"malformed ribbon graph document: {e!r}")
    if free_loops < 0:
        raise InterchangeError(f"free_loops must be nonnegative, got {free_loops}")
    g = RibbonGraph(vertices, tuple(edges))
    ok, diagnostics = validate(g)
    if not ok:
        raise InterchangeError(diagnostics[0], diagnostics)
    return g, free_loops


def load_graph(path):
    return graph_from_json(load_json(path))
