"""Identity-verification suites run by ``app.py verify``.

Every suite walks a corpus, checks one family of identities exactly and
collects counterexamples (serialized graph plus both sides) instead of
stopping at the first failure.
"""

import time
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from polyring import IdentityCheck
from ribbon_core import (
    RibbonGraph,
    dual,
    medial,
    medial_contract,
    stats,
    to_chord_diagram,
)
from br_poly import (
    apply_move,
    bouquet_eval,
    c_polynomial,
    c_recipe,
    canonical_contract,
    canonical_diagram,
    canonical_eval,
    canonical_form,
    identity_recipe,
    inverse_split,
    mu_identity,
    r_delcon,
    r_state_sum,
    recipe_evaluate,
    rotate_to,
    sample_diagrams,
)
from transition import (
    check_q_degrees,
    q_medial,
    verify_dual_variables,
    verify_duality,
    verify_martutte,
    verify_transition_dual,
    verify_transpoly,
)
from links import (
    LinkUniverse,
    colorable_universes,
    universe_from_medial,
    universe_to_json,
    verify_bracket_transition,
    verify_chmutov_pak,
)
from corpus import generate_corpus
from utils import graph_to_json

logger = logging.getLogger(__name__)


@dataclass
class SuiteOptions:
    max_edges: int = 3
    exhaustive: bool = True
    seed: int = 0
    count: int = 50

    def corpus(self) -> List[RibbonGraph]:
        if self.exhaustive:
            return generate_corpus(self.max_edges, "exhaustive")
        return generate_corpus(self.max_edges, "random", seed=self.seed, count=self.count)


@dataclass
class SuiteReport:
    suite: str
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, check, subject: dict):
        """Count one case; keep a dump when ``check`` is falsy."""
        self.cases += 1
        if check:
            return
        dump = {"subject": subject}
        if isinstance(check, IdentityCheck):
            dump.update(check.as_dict())
        elif isinstance(check, tuple):
            dump["diagnostics"] = check[1]
        self.failures.append(dump)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": len(self.failures),
            "seconds": round(self.seconds, 3),
        }


class _Contract(tuple):
    """``(ok, diagnostics)`` that is truthy iff ok."""

    def __bool__(self):
        return bool(self[0])


def _contract(result) -> _Contract:
    return _Contract(result)


def _dump(g: RibbonGraph) -> dict:
    return graph_to_json(g)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_statesum_vs_delcon(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("statesum-vs-delcon")
    for g in options.corpus():
        lhs, rhs = r_state_sum(g), r_delcon(g)
        report.record(IdentityCheck("statesum = delcon", lhs == rhs, lhs, rhs), _dump(g))
    return report


def suite_canonical_product(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("canonical-product")
    for i in range(6):
        for k in range(min(i, 2) + 1):
            for j in range((i - k) // 2 + 1):
                d = canonical_diagram(i, j, k)
                lhs, rhs = bouquet_eval(d), canonical_eval(canonical_form(d))
                report.record(IdentityCheck("R(D_ijk) = product", lhs == rhs, lhs, rhs), {"diagram": str(d)})
    for g in options.corpus():
        if len(g.vertices) == 1:
            d = to_chord_diagram(g)
            report.record(_contract(canonical_contract(d)), {"diagram": str(d)})
    return report


def suite_move_invariance(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("move-invariance")
    rng = np.random.default_rng(options.seed)
    samples = 200 if options.exhaustive else options.count
    for d in sample_diagrams(rng, samples, 6):
        for chord in d.chords:
            inner = d.word.index(chord, d.word.index(chord) + 1) - d.word.index(chord) - 1
            outer = len(d.word) - inner - 2
            split = (int(rng.integers(0, inner + 1)), int(rng.integers(0, outer + 1)))
            report.record(mu_identity(d, chord, split), {"diagram": str(d), "chord": chord, "split": split})
            moved = apply_move(d, chord, split)
            back = apply_move(moved, chord, inverse_split(d, chord, split))
            diagnostics = []
            if back != rotate_to(d, chord):
                diagnostics.append(f"move is not undone: {moved} -> {back}")
            before, after = canonical_form(d), canonical_form(moved)
            if before != after:
                diagnostics.append(f"surface changed: {before} -> {after}")
            report.record(_contract((not diagnostics, diagnostics)), {"diagram": str(d), "chord": chord})
    return report


def suite_recipe_identity(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("recipe-identity")
    spec = identity_recipe()
    for g in options.corpus():
        lhs, rhs = recipe_evaluate(g, spec), r_state_sum(g)
        report.record(IdentityCheck("identity recipe", lhs == rhs, lhs, rhs), _dump(g))
    return report


def suite_recipe_c(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("recipe-C")
    spec = c_recipe()
    for g in options.corpus():
        if stats(g).t:
            continue
        lhs, rhs = recipe_evaluate(g, spec), c_polynomial(g)
        integral = all(e % 2 == 0 for exps, _ in lhs.items() for e in exps)
        report.record(
            IdentityCheck("C recipe", lhs == rhs and integral, lhs, rhs, "" if integral else "half power of z"),
            _dump(g),
        )
    return report


def suite_transpoly(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("transpoly")
    for g in options.corpus():
        report.record(verify_transpoly(g), _dump(g))
        m = medial(g)
        report.record(_contract(check_q_degrees(m, q_medial(g))), _dump(g))
    return report


def suite_duality(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("duality")
    for g in options.corpus():
        report.record(verify_duality(g), _dump(g))
        report.record(verify_dual_variables(g), _dump(g))
    return report


def suite_transition_dual(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("transitiondual")
    for g in options.corpus():
        report.record(verify_transition_dual(g), _dump(g))
    return report


def suite_martutte(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("martutte")
    for g in options.corpus():
        if stats(g).eg == 0:
            report.record(verify_martutte(g), _dump(g))
    return report


def _universes(options: SuiteOptions) -> Iterable[LinkUniverse]:
    if options.exhaustive:
        yield from colorable_universes(options.max_edges)
        return
    rng = np.random.default_rng(options.seed)
    for g in options.corpus():
        if any(e.sign < 0 for e in g.edges):
            continue
        m = medial(g)
        labels = {vid: ("uncut", "cut")[int(rng.integers(2))] for vid in m.graph.vertex_ids}
        yield universe_from_medial(m, labels)


def suite_chmutov_pak(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("chmutov-pak")
    for u in _universes(options):
        report.record(verify_chmutov_pak(u), universe_to_json(u))
        report.record(verify_bracket_transition(u), universe_to_json(u))
    return report


def _structure_checks(g: RibbonGraph):
    diagnostics = []
    edge_ids = g.edge_ids
    for mask in range(1 << len(edge_ids)):
        a = [eid for i, eid in enumerate(edge_ids) if mask >> i & 1]
        st = stats(g, a)
        if st.r + st.n != len(a):
            diagnostics.append(f"r + n != |A| on {a}")
        if st.eg < 0:
            diagnostics.append(f"negative Euler genus on {a}")
        if st.t == 0 and st.eg % 2:
            diagnostics.append(f"odd Euler genus on orientable {a}")
    ok, medial_diagnostics = medial_contract(g)
    diagnostics.extend(medial_diagnostics)
    sg, sd = stats(g), stats(dual(g))
    if (len(dual(g).vertices), sd.bc, sd.eg, sd.t) != (sg.bc, len(g.vertices), sg.eg, sg.t):
        diagnostics.append("dual does not swap vertices and faces with equal genus")
    return not diagnostics, diagnostics


def suite_structure(options: SuiteOptions) -> SuiteReport:
    report = SuiteReport("structure")
    for g in options.corpus():
        report.record(_contract(_structure_checks(g)), _dump(g))
    return report


SUITES: Dict[str, Callable[[SuiteOptions], SuiteReport]] = {
    "statesum-vs-delcon": suite_statesum_vs_delcon,
    "canonical-product": suite_canonical_product,
    "move-invariance": suite_move_invariance,
    "recipe-identity": suite_recipe_identity,
    "recipe-C": suite_recipe_c,
    "transpoly": suite_transpoly,
    "duality": suite_duality,
    "transitiondual": suite_transition_dual,
    "martutte": suite_martutte,
    "chmutov-pak": suite_chmutov_pak,
    "structure": suite_structure,
}


def run_suites(names: Iterable[str], options: Optional[SuiteOptions] = None) -> List[SuiteReport]:
    options = options or SuiteOptions()
    reports = []
    for name in names:
        start = time.perf_counter()
        report = SUITES[name](options)
        report.seconds = time.perf_counter() - start
        logger.info("suite %s: %d cases, %d failures in %.2fs", name, report.cases, len(report.failures), report.seconds)
        reports.append(report)
    return reports


def summary_table(reports: List[SuiteReport]) -> pd.DataFrame:
    return pd.DataFrame([r.as_dict() for r in reports], columns=["suite", "cases", "failures", "seconds"])
