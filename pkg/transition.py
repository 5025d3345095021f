"""Weight systems on 4-regular ribbon graphs and the transition polynomial.

A state picks one of the three pairings of the four half-edges at every
vertex; Q sums the state weight times t to the number of closed curves.
Weights are assigned per pair of half-edges and a pairing weighs the
product of its two pair weights, so sqrt(alpha) rides on half exponents.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Tuple

from polyring import IdentityCheck, LaurentPoly, PolyError, VarTable, check_identity, substitute
from ribbon_core import MedialGraph, Pairing, RibbonGraph, dual, medial, stats, trace_state
from br_poly import classical_tutte, r_state_sum_basis
from utils import parallel_sum

logger = logging.getLogger(__name__)

Q_VARS = VarTable(("alpha", "beta", "t"))
DUAL_VARS = VarTable(("x", "y"))

UNCUT, CUT, CROSSING = "uncut", "cut", "crossing"


class WeightSystemError(ValueError):
    pass


class MissingBackReference(WeightSystemError):
    pass


class NonPlanarInput(ValueError):
    pass


def _pair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class VertexWeights:
    """The three pairings at one vertex and a weight for each of its six pairs."""

    pairings: Dict[str, Pairing] = field(hash=False)
    pair_weights: Dict[frozenset, LaurentPoly] = field(hash=False)

    def __post_init__(self):
        if len(self.pairings) != 3:
            raise WeightSystemError(f"expected three pairings, got {sorted(self.pairings)}")
        for label, pairing in self.pairings.items():
            for a, b in pairing:
                if _pair(a, b) not in self.pair_weights:
                    raise WeightSystemError(f"no pair weight for {(a, b)} of pairing {label!r}")

    def weight(self, label: str) -> LaurentPoly:
        (a, b), (c, d) = self.pairings[label]
        return self.pair_weights[_pair(a, b)] * self.pair_weights[_pair(c, d)]

    def weights(self) -> Dict[str, LaurentPoly]:
        return {label: self.weight(label) for label in self.pairings}


@dataclass(frozen=True)
class WeightSystem:
    table: VarTable
    vertices: Dict[str, VertexWeights] = field(hash=False)

    def __getitem__(self, vid: str) -> VertexWeights:
        return self.vertices[vid]

    def weights(self) -> Dict[str, Dict[str, LaurentPoly]]:
        return {vid: vw.weights() for vid, vw in sorted(self.vertices.items())}


def weights_from_pairings(
    table: VarTable, pairings: Mapping[str, Dict[str, Pairing]], values: Mapping[str, Mapping[str, LaurentPoly]]
) -> WeightSystem:
    """Give both pairs of each labelled pairing the square root of its weight."""
    vertices = {}
    for vid, labelled in pairings.items():
        pair_weights = {}
        for label, pairing in labelled.items():
            root = values[vid][label] ** "1/2"
            for a, b in pairing:
                pair_weights[_pair(a, b)] = root
        vertices[vid] = VertexWeights(dict(labelled), pair_weights)
    return WeightSystem(table, vertices)


def _require_back_reference(m: MedialGraph):
    missing = [v.id for v in m.graph.vertices if v.id not in m.pairings or v.id not in m.source_edge]
    if missing:
        raise MissingBackReference(f"medial vertices {missing[:4]} carry no source-edge geometry")


def medial_weights(m: MedialGraph, alpha: LaurentPoly, beta: LaurentPoly) -> WeightSystem:
    """alpha on the uncut pairing, beta on the cut one, 0 on the crossing.

    Each pair carries the square root of its pairing weight, so alpha and
    beta must be monomials with a square root in their ring.
    """
    _require_back_reference(m)
    for name, value in (("alpha", alpha), ("beta", beta)):
        try:
            value ** "1/2"
        except PolyError as e:
            raise WeightSystemError(f"{name} = {value} has no square root for the pair weights: {e}") from e
    zero = LaurentPoly.zero(alpha.table)
    values = {vid: {UNCUT: alpha, CUT: beta, CROSSING: zero} for vid in m.pairings}
    return weights_from_pairings(alpha.table, m.pairings, values)


def _swapped(vw: VertexWeights) -> VertexWeights:
    if UNCUT not in vw.pairings or CUT not in vw.pairings:
        raise WeightSystemError("weight swap needs uncut and cut pairings")
    pair_weights = dict(vw.pair_weights)
    for p, q in zip(vw.pairings[UNCUT], vw.pairings[CUT]):
        pair_weights[_pair(*p)], pair_weights[_pair(*q)] = vw.pair_weights[_pair(*q)], vw.pair_weights[_pair(*p)]
    return VertexWeights(vw.pairings, pair_weights)


def dual_weights(w: WeightSystem) -> WeightSystem:
    """Exchange the uncut and cut weights at every vertex."""
    return WeightSystem(w.table, {vid: _swapped(vw) for vid, vw in w.vertices.items()})


def signed_weights(
    m: MedialGraph, alpha: LaurentPoly, beta: LaurentPoly, signs: Mapping[str, int]
) -> WeightSystem:
    """Medial weights, exchanged at vertices whose source edge has sign -1."""
    w = medial_weights(m, alpha, beta)
    vertices = {}
    for vid, vw in w.vertices.items():
        edge = m.source_edge[vid]
        if edge not in signs:
            raise WeightSystemError(f"no crossing sign for edge {edge!r}")
        vertices[vid] = _swapped(vw) if signs[edge] < 0 else vw
    return WeightSystem(w.table, vertices)


def q_transition(m: MedialGraph, w: WeightSystem, tvar: str = "t") -> LaurentPoly:
    """Sum over states of the state weight times t^(closed curves + free loops)."""
    g = m.graph
    missing = [vid for vid in g.vertex_ids if vid not in w.vertices]
    if missing:
        raise WeightSystemError(f"weight system misses vertices {missing[:4]}")
    table = w.table
    options: List[List[Tuple[str, Pairing, LaurentPoly]]] = []
    for vid in g.vertex_ids:
        vw = w[vid]
        choices = [(vid, pairing, vw.weight(label)) for label, pairing in sorted(vw.pairings.items())]
        options.append([c for c in choices if not c[2].is_zero()])

    def block(first) -> LaurentPoly:
        total = LaurentPoly.zero(table)
        for rest in product(*options[1:]):
            state = (first,) + rest
            weight = LaurentPoly.one(table)
            for _, _, value in state:
                weight = weight * value
            curves = trace_state(g, {vid: pairing for vid, pairing, _ in state}) + m.free_loops
            total = total + weight * LaurentPoly.var(table, tvar, curves)
        return total

    if not options:
        return LaurentPoly.var(table, tvar, m.free_loops)
    return parallel_sum(block, options[0], LaurentPoly.zero(table))


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def _q_symbols():
    return tuple(LaurentPoly.var(Q_VARS, n) for n in Q_VARS.names)


def transpoly_rhs(g: RibbonGraph) -> LaurentPoly:
    """alpha^r beta^n t^k R(G; beta t/alpha + 1, alpha t/beta, 1/t, 1)."""
    alpha, beta, t = _q_symbols()
    st = stats(g)
    bound = substitute(
        r_state_sum_basis(g),
        {"X": beta * t * alpha.inverse(), "y": alpha * t * beta.inverse(), "z": t.inverse(), "w": 1},
        Q_VARS,
    )
    return alpha ** st.r * beta ** st.n * t ** st.k * bound


def q_medial(g: RibbonGraph) -> LaurentPoly:
    """Q of the medial graph under the medial weight system, in (alpha, beta, t)."""
    alpha, beta, _ = _q_symbols()
    m = medial(g)
    return q_transition(m, medial_weights(m, alpha, beta))


def verify_transpoly(g: RibbonGraph) -> IdentityCheck:
    return check_identity("transpoly", q_medial(g), transpoly_rhs(g))


def medial_subset_sum(g: RibbonGraph) -> LaurentPoly:
    """Sum over H of beta^(|E|-|H|) alpha^|H| t^bc(H)."""
    total = LaurentPoly.zero(Q_VARS)
    edge_ids = g.edge_ids
    for mask in range(1 << len(edge_ids)):
        h = [eid for i, eid in enumerate(edge_ids) if mask >> i & 1]
        total = total + LaurentPoly.monomial(
            Q_VARS, 1, {"alpha": len(h), "beta": len(edge_ids) - len(h), "t": stats(g, h).bc}
        )
    return total


def verify_transition_dual(g: RibbonGraph) -> IdentityCheck:
    """Q(G*_m; W, t) = Q(G_m; W*, t)."""
    alpha, beta, _ = _q_symbols()
    m = medial(g)
    m_star = medial(dual(g))
    lhs = q_transition(m_star, medial_weights(m_star, alpha, beta))
    rhs = q_transition(m, dual_weights(medial_weights(m, alpha, beta)))
    return check_identity("transition-dual", lhs, rhs)


def _duality_side(g: RibbonGraph, a: LaurentPoly, b: LaurentPoly, t: LaurentPoly, gamma: int) -> LaurentPoly:
    bound = substitute(
        r_state_sum_basis(g),
        {"X": b * t * a.inverse(), "y": a * t * b.inverse(), "z": t.inverse(), "w": 1},
        Q_VARS,
    )
    return b ** gamma * bound


def verify_duality(g: RibbonGraph) -> IdentityCheck:
    """beta^g R(G*; bt/a + 1, at/b, 1/t, 1) = alpha^g R(G; at/b + 1, bt/a, 1/t, 1), g = eg(G).

    The transition form Q(G*_m; W) = Q(G_m; W*) is checked as well; the
    first failing identity is returned.
    """
    alpha, beta, t = _q_symbols()
    gamma = stats(g).eg
    lhs = _duality_side(dual(g), alpha, beta, t, gamma)
    rhs = _duality_side(g, beta, alpha, t, gamma)
    check = check_identity("duality", lhs, rhs, f"eg = {gamma}")
    if not check:
        return check
    transition_check = verify_transition_dual(g)
    return transition_check if not transition_check else check


def verify_dual_variables(g: RibbonGraph) -> IdentityCheck:
    """x^(g/2) R(G; 1+x, y, 1/sqrt(xy), 1) = y^(g/2) R(G*; 1+y, x, 1/sqrt(xy), 1)."""
    x, y = LaurentPoly.var(DUAL_VARS, "x"), LaurentPoly.var(DUAL_VARS, "y")
    root = LaurentPoly.monomial(DUAL_VARS, 1, {"x": "-1/2", "y": "-1/2"})
    gamma = stats(g).eg
    half = f"{gamma}/2"
    lhs = x ** half * substitute(r_state_sum_basis(g), {"X": x, "y": y, "z": root, "w": 1}, DUAL_VARS)
    rhs = y ** half * substitute(r_state_sum_basis(dual(g)), {"X": y, "y": x, "z": root, "w": 1}, DUAL_VARS)
    return check_identity("duality-xy", lhs, rhs, f"eg = {gamma}")


# ---------------------------------------------------------------------------
# circuit partitions
# ---------------------------------------------------------------------------


def circuit_partition(g: RibbonGraph, xvar: str = "x") -> LaurentPoly:
    """j(G_m; x) = Q(G_m; alpha = beta = 1, x) for a plane graph."""
    if stats(g).eg != 0:
        raise NonPlanarInput("circuit partition needs a plane graph (Euler genus 0)")
    table = VarTable((xvar,))
    m = medial(g)
    one = LaurentPoly.one(table)
    return q_transition(m, medial_weights(m, one, one), xvar)


def martutte_rhs(g: RibbonGraph, xvar: str = "x") -> LaurentPoly:
    """x^k(G) T(G; x + 1, x + 1)."""
    table = VarTable((xvar,))
    x = LaurentPoly.var(table, xvar)
    tutte = substitute(classical_tutte(g), {"x": x + 1, "y": x + 1}, table)
    return x ** stats(g).k * tutte


def verify_martutte(g: RibbonGraph) -> IdentityCheck:
    return check_identity("martutte", circuit_partition(g), martutte_rhs(g))


def check_q_degrees(m: MedialGraph, q: LaurentPoly, tvar: str = "t") -> Tuple[bool, List[str]]:
    """deg_t Q <= v + free loops + 1 and alpha/beta degree v on every term."""
    diagnostics = []
    v = len(m.graph.vertices)
    if not q.is_zero() and q.degree(tvar) > v + m.free_loops + 1:
        diagnostics.append(f"deg_{tvar} Q = {q.degree(tvar)} exceeds {v + m.free_loops + 1}")
    if {"alpha", "beta"} <= set(q.table.names):
        degrees = q.total_degrees(("alpha", "beta"))
        if degrees and degrees != {v}:
            diagnostics.append(f"alpha/beta degrees {sorted(degrees)} differ from v = {v}")
    return not diagnostics, diagnostics


def describe(w: WeightSystem) -> Dict[str, Dict[str, str]]:
    return {vid: {label: str(p) for label, p in ws.items()} for vid, ws in w.weights().items()}
