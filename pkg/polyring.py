"""Exact sparse multivariate Laurent polynomials over the rationals.

Every polynomial in the project (R, Q, the circuit partition polynomial,
the bracket, the signed ribbon graph polynomial) is a ``LaurentPoly``.

A polynomial maps exponent vectors to nonzero ``Fraction`` coefficients.
Exponents are stored doubled, so the stored integer ``k`` means the power
``k/2``; this carries the half-integer powers of the signed polynomial and
of ``z^(1/2)`` without any radical arithmetic.

Variables flagged idempotent in the ``VarTable`` obey ``w^2 = w``: any
whole positive power collapses to the first power during normalization.

  (1 + y)^2        ->  y^2 + 2*y + 1
  w * w            ->  w              (w idempotent)
  x^(1/2) * x^(1/2) -> x
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

logger = logging.getLogger(__name__)

# Doubled exponent vector, one entry per variable of the table.
Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class PolyError(ValueError):
    """Base class for polynomial arithmetic errors."""


class IncompatibleVarTables(PolyError):
    pass


class NonMonomialDenominator(PolyError):
    pass


class UnclearedDenominator(PolyError):
    pass


class PoleError(PolyError):
    pass


class IrrationalValueError(PolyError):
    pass


class PolyParseError(PolyError):
    pass


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names plus the set of idempotent variables."""

    names: Tuple[str, ...]
    idempotent: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "idempotent", frozenset(self.idempotent))
        if len(set(self.names)) != len(self.names):
            raise PolyError(f"duplicate variable names in {self.names}")
        unknown = self.idempotent - set(self.names)
        if unknown:
            raise PolyError(f"idempotent flag on unknown variables {sorted(unknown)}")

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r} (table has {', '.join(self.names)})")

    def is_idempotent(self, name: str) -> bool:
        return name in self.idempotent

    def extend(self, *names: str) -> "VarTable":
        """Return a table with ``names`` appended (existing names are kept once)."""
        extra = tuple(n for n in names if n not in self.names)
        return VarTable(self.names + extra, self.idempotent)


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise PolyError(f"not an exact rational: {value!r}")


def _doubled(power) -> int:
    """Convert an integer or half-integer power to its doubled integer form."""
    p = _fraction(power) * 2
    if p.denominator != 1:
        raise PolyError(f"exponent {power} is not a multiple of 1/2")
    return int(p)


def _rational_sqrt(value: Fraction) -> Fraction:
    if value < 0:
        raise IrrationalValueError(f"square root of negative value {value}")
    num, den = isqrt(value.numerator), isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise IrrationalValueError(f"{value} is not the square of a rational")
    return Fraction(num, den)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[Exponent, Scalar] = None):
        self.table = table
        self._terms = self._normalize(table, terms or {})
        self._hash = None

    @staticmethod
    def _normalize(table: VarTable, terms) -> Dict[Exponent, Fraction]:
        idem = [i for i, name in enumerate(table.names) if name in table.idempotent]
        out: Dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            coeff = _fraction(coeff)
            if coeff == 0:
                continue
            exps = tuple(exps)
            if len(exps) != len(table):
                raise PolyError(f"exponent vector {exps} does not match table {table.names}")
            if idem:
                exps = list(exps)
                for i in idem:
                    e = exps[i]
                    if e < 0 or e % 2:
                        raise PolyError(
                            f"idempotent variable {table.names[i]} needs a whole nonnegative power, got {e / 2}"
                        )
                    if e > 2:
                        exps[i] = 2
                exps = tuple(exps)
            total = out.get(exps, Fraction(0)) + coeff
            if total == 0:
                out.pop(exps, None)
            else:
                out[exps] = total
        return out

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "LaurentPoly":
        return cls(table)

    @classmethod
    def constant(cls, table: VarTable, value: Scalar) -> "LaurentPoly":
        return cls(table, {(0,) * len(table): value})

    @classmethod
    def one(cls, table: VarTable) -> "LaurentPoly":
        return cls.constant(table, 1)

    @classmethod
    def var(cls, table: VarTable, name: str, power: Scalar = 1) -> "LaurentPoly":
        exps = [0] * len(table)
        exps[table.index(name)] = _doubled(power)
        return cls(table, {tuple(exps): 1})

    @classmethod
    def monomial(cls, table: VarTable, coeff: Scalar = 1, powers: Mapping[str, Scalar] = None) -> "LaurentPoly":
        exps = [0] * len(table)
        for name, power in (powers or {}).items():
            exps[table.index(name)] += _doubled(power)
        return cls(table, {tuple(exps): coeff})

    # ---- inspection ---------------------------------------------------

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        """Terms in canonical order: graded lexicographic, descending."""
        for exps in sorted(self._terms, key=lambda e: (sum(e), e), reverse=True):
            yield exps, self._terms[exps]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.table), Fraction(0))

    def powers(self, exps: Exponent) -> Dict[str, Fraction]:
        """Translate a stored exponent vector into ``{name: power}``."""
        return {name: Fraction(e, 2) for name, e in zip(self.table.names, exps) if e}

    def degree(self, name: str) -> Fraction:
        """Largest power of ``name`` over all terms (0 for the zero polynomial)."""
        i = self.table.index(name)
        return Fraction(max((e[i] for e in self._terms), default=0), 2)

    def min_degree(self, name: str) -> Fraction:
        i = self.table.index(name)
        return Fraction(min((e[i] for e in self._terms), default=0), 2)

    def total_degrees(self, names: Iterable[str]) -> set:
        """Set of summed powers of ``names`` across the terms."""
        idx = [self.table.index(n) for n in names]
        return {Fraction(sum(e[i] for i in idx), 2) for e in self._terms}

    # ---- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.table != self.table:
                raise IncompatibleVarTables(f"{self.table.names} vs {other.table.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return LaurentPoly(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.table, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return LaurentPoly.zero(self.table)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.table, terms)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial; other polynomials are not units here."""
        if not self.is_monomial():
            raise NonMonomialDenominator(f"cannot invert non-monomial {self}")
        (exps, coeff), = self._terms.items()
        return LaurentPoly(self.table, {tuple(-e for e in exps): 1 / coeff})

    def sqrt(self) -> "LaurentPoly":
        """Square root of a monomial with a square rational coefficient."""
        if self.is_zero():
            return self
        if not self.is_monomial():
            raise UnclearedDenominator(f"square root of non-monomial {self}")
        (exps, coeff), = self._terms.items()
        if any(e % 2 for e in exps):
            raise IrrationalValueError(f"square root of {self} needs quarter exponents")
        return LaurentPoly(self.table, {tuple(e // 2 for e in exps): _rational_sqrt(coeff)})

    def __pow__(self, n):
        n = _fraction(n)
        if n.denominator == 2:
            return self.sqrt() ** (n * 2)
        if n.denominator != 1:
            raise PolyError(f"unsupported power {n}")
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        if self.is_monomial():
            (exps, coeff), = self._terms.items()
            return LaurentPoly(self.table, {tuple(e * n for e in exps): coeff ** n})
        result = LaurentPoly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    # ---- rendering ----------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)!r})"


def arith(p: LaurentPoly, q: LaurentPoly, op: str) -> LaurentPoly:
    """Apply ``op`` in {"add", "sub", "mul"}; tables must match."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise PolyError(f"unknown operation {op!r}")


def equal(p: LaurentPoly, q: LaurentPoly) -> bool:
    return p == q


def _render_power(e: int) -> str:
    if e == 2:
        return ""
    if e % 2 == 0:
        return f"^{e // 2}"
    return f"^({e}/2)"


def render(p: LaurentPoly) -> str:
    """Canonical text form, e.g. ``y^2*z^2 + 2*y + 1``."""
    pieces = []
    for exps, coeff in p.items():
        mono = "*".join(f"{name}{_render_power(e)}" for name, e in zip(p.table.names, exps) if e)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(pieces) if pieces else "0"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)"
    r"|(?P<var>[A-Za-z_][A-Za-z_0-9]*)(?:\^(?P<exp>-?\d+|\(-?\d+(?:/\d+)?\)))?"
    r"|(?P<op>[+\-*]))"
)


def parse_poly(text: str, table: VarTable) -> LaurentPoly:
    """Parse the canonical text form (and any reordering of it)."""
    text = text.strip()
    if not text:
        raise PolyParseError("empty polynomial text")
    result = LaurentPoly.zero(table)
    coeff, powers, sign, started, expect_factor = Fraction(1), {}, 1, False, True
    pos = 0

    def flush():
        nonlocal result
        result = result + LaurentPoly.monomial(table, sign * coeff, powers)

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected input at {text[pos:]!r}")
        pos = m.end()
        if m.group("op"):
            op = m.group("op")
            if op == "*":
                if expect_factor:
                    raise PolyParseError(f"dangling '*' in {text!r}")
                expect_factor = True
                continue
            if started and expect_factor:
                raise PolyParseError(f"missing factor before {op!r} in {text!r}")
            if started:
                flush()
            coeff, powers, started, expect_factor = Fraction(1), {}, False, True
            sign = 1 if op == "+" else -1
            continue
        if not expect_factor:
            raise PolyParseError(f"missing '*' in {text!r}")
        started, expect_factor = True, False
        if m.group("num"):
            coeff *= Fraction(m.group("num"))
            continue
        name = m.group("var")
        if name not in table:
            raise PolyParseError(f"unknown variable {name!r}")
        exp = m.group("exp")
        power = Fraction(exp.strip("()")) if exp else Fraction(1)
        powers[name] = powers.get(name, 0) + power
    if not started or expect_factor:
        raise PolyParseError(f"incomplete polynomial {text!r}")
    flush()
    return result


def to_json(p: LaurentPoly) -> dict:
    return {
        "vars": list(p.table.names),
        "idempotent": sorted(p.table.idempotent),
        "terms": [
            {"coeff": str(coeff), "exp": {name: str(power) for name, power in p.powers(exps).items()}}
            for exps, coeff in p.items()
        ],
    }


def from_json(doc: Mapping) -> LaurentPoly:
    try:
        table = VarTable(tuple(doc["vars"]), frozenset(doc.get("idempotent", ())))
        result = LaurentPoly.zero(table)
        for term in doc["terms"]:
            result = result + LaurentPoly.monomial(table, Fraction(term["coeff"]), term.get("exp", {}))
        return result
    except (KeyError, TypeError, ZeroDivisionError) as e:
        raise PolyParseError(f"malformed polynomial document: {e}")


def rename(p: LaurentPoly, mapping: Mapping[str, str]) -> LaurentPoly:
    """Rename variables; exponents and idempotent flags travel with the names."""
    names = tuple(mapping.get(n, n) for n in p.table.names)
    idem = frozenset(mapping.get(n, n) for n in p.table.idempotent)
    return LaurentPoly(VarTable(names, idem), dict(p.items()))


def reembed(p: LaurentPoly, table: VarTable) -> LaurentPoly:
    """Express ``p`` over a table that contains all of its occurring variables."""
    terms = {}
    for exps, coeff in p.items():
        new = [0] * len(table)
        for name, e in zip(p.table.names, exps):
            if e:
                new[table.index(name)] = e
        terms[tuple(new)] = coeff
    return LaurentPoly(table, terms)


Binding = Union[LaurentPoly, Scalar, Tuple[LaurentPoly, LaurentPoly]]


def substitute(p: LaurentPoly, bindings: Mapping[str, Binding], table: Optional[VarTable] = None) -> LaurentPoly:
    """Substitute polynomials (or monomial fractions) for variables of ``p``.

    The result lives in ``table``; by default the table of the first
    polynomial binding, else ``p.table``. Unbound variables of ``p`` are
    carried over by name and must exist in the result table. A binding may
    be a pair ``(numerator, denominator)`` whose denominator is a monomial.
    Negative or half powers need a monomial binding; anything else would
    leave a denominator or a radical behind.
    """
    if table is None:
        table = next((b for b in bindings.values() if isinstance(b, LaurentPoly)), None)
        table = table.table if table is not None else p.table
        for b in bindings.values():
            if isinstance(b, tuple):
                table = b[0].table
                break

    values: Dict[str, LaurentPoly] = {}
    for name, b in bindings.items():
        if name not in p.table:
            raise PolyError(f"binding for unknown variable {name!r}")
        if isinstance(b, tuple):
            num, den = b
            if not isinstance(den, LaurentPoly) or not den.is_monomial():
                raise NonMonomialDenominator(f"denominator {den} of binding for {name} is not a monomial")
            b = num * den.inverse()
        elif not isinstance(b, LaurentPoly):
            b = LaurentPoly.constant(table, b)
        if b.table != table:
            raise IncompatibleVarTables(f"binding for {name} uses {b.table.names}, expected {table.names}")
        values[name] = b
    for name in p.table.names:
        if name not in values:
            values[name] = LaurentPoly.var(table, name) if name in table else None

    cache: Dict[Tuple[str, int], LaurentPoly] = {}

    def power_of(name: str, e: int) -> LaurentPoly:
        key = (name, e)
        if key not in cache:
            base = values[name]
            if base is None:
                raise IncompatibleVarTables(f"variable {name!r} is unbound and absent from {table.names}")
            if base.is_zero():
                if e < 0:
                    raise PoleError(f"{name} bound to 0 appears with power {e / 2}")
                cache[key] = base
            elif (e < 0 or e % 2) and not base.is_monomial():
                raise UnclearedDenominator(f"power {e / 2} of non-monomial binding {name} = {base}")
            else:
                cache[key] = base ** Fraction(e, 2)
        return cache[key]

    result = LaurentPoly.zero(table)
    for exps, coeff in p.items():
        term = LaurentPoly.constant(table, coeff)
        for name, e in zip(p.table.names, exps):
            if e:
                term = term * power_of(name, e)
        result = result + term
    return result


def square_root_rewrite(p: LaurentPoly, fresh: str, base: str) -> LaurentPoly:
    """Rewrite ``fresh^n`` as ``base^(n/2)``: the encoding ``fresh^2 = base``."""
    i, j = p.table.index(fresh), p.table.index(base)
    if p.table.is_idempotent(base):
        raise PolyError(f"cannot take square roots of idempotent variable {base}")
    terms: Dict[Exponent, Fraction] = {}
    for exps, coeff in p.items():
        if exps[i] % 2:
            raise PolyError(f"{fresh} already carries a half power in {p}")
        new = list(exps)
        new[j] += exps[i] // 2
        new[i] = 0
        terms[tuple(new)] = terms.get(tuple(new), 0) + coeff
    return LaurentPoly(p.table, terms)


def eval_rational(p: LaurentPoly, point: Mapping[str, Scalar]) -> Fraction:
    """Exact value of ``p`` at a rational point."""
    total = Fraction(0)
    roots: Dict[str, Fraction] = {}
    for exps, coeff in p.items():
        value = coeff
        for name, e in zip(p.table.names, exps):
            if not e:
                continue
            if name not in point:
                raise PolyError(f"no value given for {name}")
            x = _fraction(point[name])
            if x == 0:
                if e < 0:
                    raise PoleError(f"{name} = 0 at a pole of {p}")
                value = Fraction(0)
                break
            if e % 2:
                if name not in roots:
                    roots[name] = _rational_sqrt(x)
                value *= roots[name] ** e
            else:
                value *= x ** (e // 2)
        total += value
    return total


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of an exact polynomial identity check; truthy iff it holds."""

    name: str
    holds: bool
    lhs: LaurentPoly
    rhs: LaurentPoly
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {
            "identity": self.name,
            "holds": self.holds,
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "detail": self.detail,
        }


def check_identity(name: str, lhs: LaurentPoly, rhs: LaurentPoly, detail: str = "") -> IdentityCheck:
    holds = lhs == rhs
    if not holds:
        logger.debug("identity %s fails: %s != %s (%s)", name, lhs, rhs, detail)
    return IdentityCheck(name, holds, lhs, rhs, detail)
