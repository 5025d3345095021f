"""The Bollobás–Riordan polynomial R(G; x, y, z, w) of a ribbon graph.

Two independent evaluations are provided: the spanning-subgraph state sum
and deletion–contraction down to bouquets. The state sum is kept in the
basis (X, y, z, w) with X = x - 1 so that every later substitution is a
monomial one; ``expand`` moves it to (x, y, z, w).

Also here: chord-diagram evaluation, the canonical diagrams D_ijk and
their product formula, the single-step rotation and twist moves, the
recipe evaluator for minor-closed multiplicative invariants and the
classical Tutte specialization.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from polyring import (
    IdentityCheck,
    LaurentPoly,
    PolyError,
    VarTable,
    check_identity,
    parse_poly,
    substitute,
)
from ribbon_core import (
    ChordDiagram,
    RibbonGraph,
    UnknownIdError,
    canonical_code,
    components,
    contract,
    delete,
    from_chord_diagram,
    is_bridge,
    stats,
    to_chord_diagram,
)
from utils import chunk_range, get_thread_count, parallel_sum

logger = logging.getLogger(__name__)

R_VARS = VarTable(("x", "y", "z", "w"), frozenset({"w"}))
BASIS_VARS = VarTable(("X", "y", "z", "w"), frozenset({"w"}))
TUTTE_VARS = VarTable(("x", "y"))

# below this many subsets the state sum stays on the calling thread
_PARALLEL_THRESHOLD = 1 << 6


class RecipeError(PolyError):
    pass


class RelationViolated(RecipeError):
    pass


class NonInvertibleAlpha(RecipeError):
    pass


class ChordDiagramError(ValueError):
    pass


@dataclass(frozen=True)
class CanonicalForm:
    i: int
    j: int
    k: int

    def __post_init__(self):
        if min(self.i, self.j, self.k) < 0 or self.k > 2 or self.i - 2 * self.j - self.k < 0:
            raise ChordDiagramError(f"no canonical diagram D_{self.i}{self.j}{self.k}")

    def __str__(self) -> str:
        return f"D_{self.i},{self.j},{self.k}"


@dataclass(frozen=True)
class RecipeSpec:
    """Values of a multiplicative minor-closed invariant on the basic diagrams.

    ``q``, ``r`` and ``s`` are the values on a positive loop, a negative loop
    and two interlaced positive loops; ``x`` the bridge factor; ``u`` and
    ``v`` the genus and orientability weights. All share one table.
    """

    alpha: LaurentPoly
    x: LaurentPoly
    q: LaurentPoly
    r: LaurentPoly
    s: LaurentPoly
    u: LaurentPoly
    v: LaurentPoly

    @property
    def table(self) -> VarTable:
        return self.alpha.table

    @classmethod
    def parse(cls, doc: dict) -> "RecipeSpec":
        """Build from {"vars": [...], "idempotent": [...], "alpha": "1", "x": "x", ...}."""
        try:
            table = VarTable(tuple(doc["vars"]), frozenset(doc.get("idempotent", ())))
            values = {name: parse_poly(str(doc[name]), table) for name in ("alpha", "x", "q", "r", "s", "u", "v")}
        except KeyError as e:
            raise RecipeError(f"recipe document lacks {e}")
        return cls(**values)


# ---------------------------------------------------------------------------
# state sum
# ---------------------------------------------------------------------------


def _subset_block(g: RibbonGraph, rank: int, block: Tuple[int, int]) -> LaurentPoly:
    edge_ids = g.edge_ids
    total = LaurentPoly.zero(BASIS_VARS)
    for mask in range(*block):
        a = [eid for i, eid in enumerate(edge_ids) if mask >> i & 1]
        st = stats(g, a)
        total = total + LaurentPoly.monomial(
            BASIS_VARS, 1, {"X": rank - st.r, "y": st.n, "z": st.eg, "w": st.t}
        )
    return total


def r_state_sum_basis(g: RibbonGraph) -> LaurentPoly:
    """R as a sum over spanning subgraphs, in the (X = x-1, y, z, w) basis."""
    rank = stats(g).r
    subsets = 1 << len(g.edges)
    workers = get_thread_count() if subsets >= _PARALLEL_THRESHOLD else 1
    logger.debug("state sum over %d subsets on %d worker(s)", subsets, workers)
    return parallel_sum(
        lambda block: _subset_block(g, rank, block),
        chunk_range(subsets, workers * 4 if workers > 1 else 1),
        LaurentPoly.zero(BASIS_VARS),
        workers,
    )


def expand(basis_poly: LaurentPoly) -> LaurentPoly:
    """Rewrite a polynomial in (X, y, z, w) into (x, y, z, w) with X = x - 1."""
    x = LaurentPoly.var(R_VARS, "x")
    return substitute(basis_poly, {"X": x - 1}, R_VARS)


def r_state_sum(g: RibbonGraph) -> LaurentPoly:
    return expand(r_state_sum_basis(g))


# ---------------------------------------------------------------------------
# deletion–contraction
# ---------------------------------------------------------------------------


def bouquet_eval(d: ChordDiagram) -> LaurentPoly:
    """Sum over subdiagrams of y^n z^(1 - bc + n) w^t."""
    return r_state_sum(from_chord_diagram(d))


def _terminal(g: RibbonGraph) -> LaurentPoly:
    result = LaurentPoly.one(R_VARS)
    for comp in components(g):
        result = result * bouquet_eval(to_chord_diagram(comp))
    return result


def r_delcon(g: RibbonGraph, memo: Optional[Dict[tuple, LaurentPoly]] = None) -> LaurentPoly:
    """R by deletion–contraction on the lowest-id non-loop edge.

    Bridges contribute x * R(G/e); ordinary edges R(G/e) + R(G-e). Graphs
    with only loops left are products of bouquets.
    """
    memo = {} if memo is None else memo
    key = canonical_code(g)
    if key in memo:
        return memo[key]
    pivot = next((eid for eid in sorted(g.edge_ids) if not g.is_loop(eid)), None)
    if pivot is None:
        result = _terminal(g)
    elif is_bridge(g, pivot):
        result = LaurentPoly.var(R_VARS, "x") * r_delcon(contract(g, pivot), memo)
    else:
        result = r_delcon(contract(g, pivot), memo) + r_delcon(delete(g, pivot), memo)
    memo[key] = result
    return result


# ---------------------------------------------------------------------------
# canonical diagrams
# ---------------------------------------------------------------------------


def canonical_form(d: ChordDiagram) -> CanonicalForm:
    st = stats(from_chord_diagram(d))
    gamma = st.eg
    if st.t == 0:
        return CanonicalForm(st.n, gamma // 2, 0)
    k = 1 if gamma % 2 else 2
    return CanonicalForm(st.n, (gamma - k) // 2, k)


def canonical_diagram(i: int, j: int, k: int) -> ChordDiagram:
    """D_ijk: isolated positive chords, then interlaced pairs, then negative chords."""
    CanonicalForm(i, j, k)
    word: List[str] = []
    signs: Dict[str, int] = {}
    labels = iter(f"c{n}" for n in range(i))
    for _ in range(i - 2 * j - k):
        c = next(labels)
        word += [c, c]
    for _ in range(j):
        a, b = next(labels), next(labels)
        word += [a, b, a, b]
    for _ in range(k):
        c = next(labels)
        word += [c, c]
        signs[c] = -1
    return ChordDiagram.of(word, signs)


def canonical_eval(cf: CanonicalForm) -> LaurentPoly:
    """(1+y)^(i-2j-k) (y^2 z^2 + 2y + 1)^j (1+yzw)^k."""
    y, z, w = (LaurentPoly.var(R_VARS, n) for n in ("y", "z", "w"))
    loop = 1 + y
    interlaced = y ** 2 * z ** 2 + 2 * y + 1
    twisted = 1 + y * z * w
    return loop ** (cf.i - 2 * cf.j - cf.k) * interlaced ** cf.j * twisted ** cf.k


def canonical_contract(d: ChordDiagram) -> Tuple[bool, List[str]]:
    """D_ijk of ``d`` shares its surface data and evaluates by the product formula."""
    cf = canonical_form(d)
    canon = canonical_diagram(cf.i, cf.j, cf.k)
    diagnostics = []
    sd, sc = stats(from_chord_diagram(d)), stats(from_chord_diagram(canon))
    for field in ("n", "bc", "t"):
        if getattr(sd, field) != getattr(sc, field):
            diagnostics.append(f"{field}: {getattr(sd, field)} != {getattr(sc, field)} for {cf}")
    if bouquet_eval(canon) != canonical_eval(cf):
        diagnostics.append(f"R({cf}) differs from the product formula")
    return not diagnostics, diagnostics


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------


def _open_at(d: ChordDiagram, chord: str) -> Tuple[List[str], List[str]]:
    if chord not in d.chords:
        raise UnknownIdError(f"unknown chord {chord!r}")
    word = list(d.word)
    first = word.index(chord)
    word = word[first:] + word[:first]
    second = word.index(chord, 1)
    return word[1:second], word[second + 1:]


def _split(d: ChordDiagram, chord: str, split: Optional[Tuple[int, int]], default) -> Tuple[list, list, list, list]:
    inner, outer = _open_at(d, chord)
    p, q = split if split is not None else default(len(inner), len(outer))
    if not (0 <= p <= len(inner) and 0 <= q <= len(outer)):
        raise ChordDiagramError(f"split {(p, q)} out of range for segments of length {len(inner)}, {len(outer)}")
    a, dd = inner[:p], inner[p:]
    c, b = outer[:q], outer[q:]
    return a, dd, c, b


def rotate_move(d: ChordDiagram, chord: str, split: Optional[Tuple[int, int]] = None) -> ChordDiagram:
    """e a d e c b  ->  e b c e d a, about a positive chord e.

    ``split`` gives the lengths of a and c. The default halves both
    segments so that applying the move twice with defaults is the identity.
    """
    if chord in d.chords and d.sign(chord) < 0:
        raise ChordDiagramError(f"rotation needs a positive chord, {chord!r} is negative")
    a, dd, c, b = _split(d, chord, split, lambda n, m: (n // 2, m - m // 2))
    return ChordDiagram([chord] + b + c + [chord] + dd + a, d.signs)


def twist_move(d: ChordDiagram, chord: str, split: Optional[Tuple[int, int]] = None) -> ChordDiagram:
    """e a d e c b  ->  e b d' e c' a, about a negative chord e.

    Primes reverse a segment. Chords with exactly one end in c or d change
    sign. The default split reverses both whole segments.
    """
    if chord in d.chords and d.sign(chord) > 0:
        raise ChordDiagramError(f"twist needs a negative chord, {chord!r} is positive")
    a, dd, c, b = _split(d, chord, split, lambda n, m: (0, m))
    middle = dd + c
    signs = dict(d.signs)
    for label in set(middle):
        if middle.count(label) == 1:
            signs[label] = -signs[label]
    return ChordDiagram([chord] + b + dd[::-1] + [chord] + c[::-1] + a, tuple(signs.items()))


def rotate_to(d: ChordDiagram, chord: str) -> ChordDiagram:
    """The same diagram read from the first end of ``chord``."""
    inner, outer = _open_at(d, chord)
    return ChordDiagram([chord] + inner + [chord] + outer, d.signs)


def delete_chord(d: ChordDiagram, chord: str) -> ChordDiagram:
    if chord not in d.chords:
        raise UnknownIdError(f"unknown chord {chord!r}")
    return ChordDiagram([c for c in d.word if c != chord], tuple((c, s) for c, s in d.signs if c != chord))


def mu_identity(d: ChordDiagram, chord: str, split: Optional[Tuple[int, int]] = None) -> IdentityCheck:
    """R(D1) - mu R(D1 - e) = R(D2) - mu R(D2 - e) for the move about ``chord``.

    mu = 1 if some chord joins a or b to c or d, else mu = x.
    """
    negative = d.sign(chord) < 0
    move = twist_move if negative else rotate_move
    default = (lambda n, m: (0, m)) if negative else (lambda n, m: (n // 2, m - m // 2))
    a, dd, c, b = _split(d, chord, split, default)
    left, right = set(a + b), set(c + dd)
    mu = LaurentPoly.one(R_VARS) if left & right else LaurentPoly.var(R_VARS, "x")
    moved = move(d, chord, split)
    lhs = bouquet_eval(d) - mu * bouquet_eval(delete_chord(d, chord))
    rhs = bouquet_eval(moved) - mu * bouquet_eval(delete_chord(moved, chord))
    name = "twist" if negative else "rotation"
    return check_identity(f"{name}-mu", lhs, rhs, f"{d} -> {moved}, mu = {mu}")


def apply_move(d: ChordDiagram, chord: str, split: Optional[Tuple[int, int]] = None) -> ChordDiagram:
    """The move matching the chord's sign."""
    return twist_move(d, chord, split) if d.sign(chord) < 0 else rotate_move(d, chord, split)


def inverse_split(d: ChordDiagram, chord: str, split: Tuple[int, int]) -> Tuple[int, int]:
    """Split that undoes ``apply_move(d, chord, split)``."""
    inner, outer = _open_at(d, chord)
    p, q = split
    if d.sign(chord) < 0:
        return len(outer) - q, q
    return len(outer) - q, len(inner) - p


# ---------------------------------------------------------------------------
# recipe theorem
# ---------------------------------------------------------------------------


def check_relations(spec: RecipeSpec) -> Tuple[bool, List[str]]:
    alpha, q, r, s, u, v = spec.alpha, spec.q, spec.r, spec.s, spec.u, spec.v
    failures = []
    if (q - alpha) ** 2 * u ** 2 != alpha * (s - 2 * q + alpha):
        failures.append("(q - alpha)^2 u^2 = alpha (s - 2q + alpha)")
    if (q - alpha) * u * v != r - alpha:
        failures.append("(q - alpha) u v = r - alpha")
    if v * v != v:
        failures.append("v = v^2")
    return not failures, failures


def recipe_evaluate(g: RibbonGraph, spec: RecipeSpec) -> LaurentPoly:
    """alpha^k(G) R(G; x, q/alpha - 1, u, v)."""
    tables = {p.table for p in (spec.alpha, spec.x, spec.q, spec.r, spec.s, spec.u, spec.v)}
    if len(tables) != 1:
        raise RecipeError("recipe values must share one variable table")
    ok, failures = check_relations(spec)
    if not ok:
        raise RelationViolated(f"relation fails: {failures[0]}")
    if spec.alpha.is_zero() or not spec.alpha.is_monomial():
        raise NonInvertibleAlpha(f"alpha = {spec.alpha} is not an invertible monomial")
    basis = r_state_sum_basis(g)
    bound = substitute(
        basis,
        {"X": spec.x - 1, "y": spec.alpha.inverse() * spec.q - 1, "z": spec.u, "w": spec.v},
        spec.table,
    )
    return spec.alpha ** stats(g).k * bound


def identity_recipe() -> RecipeSpec:
    """The recipe that reproduces R itself."""
    x, y, z, w = (LaurentPoly.var(R_VARS, n) for n in R_VARS.names)
    return RecipeSpec(
        alpha=LaurentPoly.one(R_VARS), x=x, q=1 + y, r=1 + y * z * w,
        s=y ** 2 * z ** 2 + 2 * y + 1, u=z, v=w,
    )


def c_recipe() -> RecipeSpec:
    """C(G; x, y, z) = R(G; x, y, z^(1/2), w)."""
    x, y, z, w = (LaurentPoly.var(R_VARS, n) for n in R_VARS.names)
    root = LaurentPoly.var(R_VARS, "z", "1/2")
    return RecipeSpec(
        alpha=LaurentPoly.one(R_VARS), x=x, q=1 + y, r=1 + y * root * w,
        s=1 + 2 * y + y ** 2 * z, u=root, v=w,
    )


def c_polynomial(g: RibbonGraph) -> LaurentPoly:
    """R(G; x, y, z^(1/2), w) by direct substitution, the oracle for ``c_recipe``."""
    return substitute(r_delcon(g), {"z": LaurentPoly.var(R_VARS, "z", "1/2")})


# ---------------------------------------------------------------------------
# classical Tutte
# ---------------------------------------------------------------------------


def classical_tutte(g: RibbonGraph) -> LaurentPoly:
    """T(G; x, y) = R(G; x, y - 1, 1, 1)."""
    x, y = LaurentPoly.var(TUTTE_VARS, "x"), LaurentPoly.var(TUTTE_VARS, "y")
    return substitute(r_state_sum_basis(g), {"X": x - 1, "y": y - 1, "z": 1, "w": 1}, TUTTE_VARS)


def multiplicativity(g: RibbonGraph, h: RibbonGraph, joined: RibbonGraph) -> IdentityCheck:
    """R(joined) = R(g) R(h) for a disjoint union or one-point join of bouquets."""
    return check_identity("multiplicative", r_state_sum(joined), r_state_sum(g) * r_state_sum(h))


def sample_diagrams(rng, count: int, max_chords: int) -> List[ChordDiagram]:
    """Random signed chord diagrams drawn from a numpy Generator."""
    diagrams = []
    for _ in range(count):
        m = int(rng.integers(1, max_chords + 1))
        labels = [f"c{i}" for i in range(m)]
        word = [labels[i] for i in rng.permutation([i for i in range(m) for _ in range(2)])]
        signs = {label: int(rng.choice([1, -1])) for label in labels}
        diagrams.append(ChordDiagram.of(word, signs))
    return diagrams