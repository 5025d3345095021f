from fractions import Fraction

import numpy as np
import pytest

from polyring import LaurentPoly, VarTable, eval_rational, from_json, parse_poly, render, to_json

# x, y Laurent; z takes half powers; w idempotent
T = VarTable(("x", "y", "z", "w"), frozenset({"w"}))
SEEDS = range(8)


def random_poly(rng, terms=3):
    p = LaurentPoly.zero(T)
    for _ in range(int(rng.integers(1, terms + 1))):
        coeff = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        powers = {
            "x": int(rng.integers(-2, 3)),
            "y": int(rng.integers(-2, 3)),
            "z": Fraction(int(rng.integers(-3, 4)), 2),
            "w": int(rng.integers(0, 3)),
        }
        p = p + LaurentPoly.monomial(T, coeff, powers)
    return p


def random_point(rng):
    def nonzero():
        num = int(rng.integers(1, 6)) * int(rng.choice([1, -1]))
        return Fraction(num, int(rng.integers(1, 5)))

    root = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
    # z must be a rational square for half powers; w is 0 or 1
    return {"x": nonzero(), "y": nonzero(), "z": root * root, "w": int(rng.integers(0, 2))}


@pytest.mark.parametrize("seed", SEEDS)
def test_ring_axioms(seed):
    rng = np.random.default_rng(seed)
    p, q, r = (random_poly(rng) for _ in range(3))
    zero, one = LaurentPoly.zero(T), LaurentPoly.one(T)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + zero == p
    assert p * one == p
    assert p - p == zero
    assert p * zero == zero


@pytest.mark.parametrize("seed", SEEDS)
def test_equality_agrees_with_evaluation(seed):
    rng = np.random.default_rng(100 + seed)
    p, q = random_poly(rng), random_poly(rng)
    for _ in range(5):
        point = random_point(rng)
        assert eval_rational(p + q, point) == eval_rational(p, point) + eval_rational(q, point)
        assert eval_rational(p * q, point) == eval_rational(p, point) * eval_rational(q, point)
        assert eval_rational(p ** 3, point) == eval_rational(p, point) ** 3


@pytest.mark.parametrize("seed", SEEDS)
def test_idempotent_variable_recombines_in_products(seed):
    rng = np.random.default_rng(200 + seed)
    w = LaurentPoly.var(T, "w")
    p = random_poly(rng)
    assert w * w == w
    assert (p * w) * w == p * w
    assert (1 + w) * (1 - w) == 1 - w
    assert w * (1 + w) ** 3 == 8 * w
    assert all(s.degree("w") <= 1 for s in (p * w, p * p, (p + w) ** 2))


@pytest.mark.parametrize("seed", SEEDS)
def test_half_exponents_survive_text_and_json(seed):
    rng = np.random.default_rng(300 + seed)
    p = random_poly(rng, terms=4) * LaurentPoly.var(T, "z", "1/2")
    assert parse_poly(render(p), T) == p
    assert from_json(to_json(p)) == p
    square = LaurentPoly.monomial(T, 4, {"z": 3, "x": -2})
    assert square ** "1/2" == LaurentPoly.monomial(T, 2, {"z": "3/2", "x": -1})
