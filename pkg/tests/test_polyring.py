from fractions import Fraction

import pytest

from polyring import (
    IncompatibleVarTables,
    IrrationalValueError,
    LaurentPoly,
    NonMonomialDenominator,
    PoleError,
    PolyError,
    PolyParseError,
    UnclearedDenominator,
    VarTable,
    check_identity,
    eval_rational,
    from_json,
    parse_poly,
    rename,
    render,
    substitute,
    to_json,
)

R = VarTable(("x", "y", "z", "w"), frozenset({"w"}))
XY = VarTable(("x", "y"))


def var(name, table=R, power=1):
    return LaurentPoly.var(table, name, power)


def test_render_is_graded_lex():
    y, z = var("y"), var("z")
    assert render(y ** 2 * z ** 2 + 2 * y + 1) == "y^2*z^2 + 2*y + 1"
    assert render(var("x") - 1) == "x - 1"
    assert render(LaurentPoly.zero(R)) == "0"


def test_parse_accepts_reordered_text():
    p = parse_poly("1 + 2*y + y^2*z^2", R)
    assert p == var("y") ** 2 * var("z") ** 2 + 2 * var("y") + 1
    assert parse_poly(render(p), R) == p


@pytest.mark.parametrize("text", ["", "x +", "2 x", "x * * y", "q + 1"])
def test_parse_rejects_bad_text(text):
    with pytest.raises(PolyParseError):
        parse_poly(text, R)


def test_idempotent_variable_collapses_powers():
    w = var("w")
    assert w * w == w
    assert (1 + w) ** 2 == 1 + 3 * w


def test_idempotent_rejects_half_powers():
    with pytest.raises(PolyError):
        var("w", power="1/2")


def test_half_exponents():
    root = var("z", power="1/2")
    assert root * root == var("z")
    assert render(root) == "z^(1/2)"
    assert var("z") ** "1/2" == root
    assert (4 * var("z") ** 2) ** "1/2" == 2 * var("z")


def test_sqrt_of_non_monomial_fails():
    with pytest.raises(UnclearedDenominator):
        (1 + var("z")) ** "1/2"


def test_inverse_needs_monomial():
    x = var("x", XY)
    assert (3 * x ** 2).inverse() == Fraction(1, 3) * x ** -2
    with pytest.raises(NonMonomialDenominator):
        (1 + x).inverse()


def test_mixing_tables_fails():
    with pytest.raises(IncompatibleVarTables):
        var("x") + var("x", XY)


def test_substitute_shift_and_monomial_fraction():
    X = VarTable(("X", "y"))
    p = LaurentPoly.var(X, "X") ** 2 + LaurentPoly.var(X, "y")
    x, y = var("x", XY), var("y", XY)
    assert substitute(p, {"X": x - 1}, XY) == x ** 2 - 2 * x + 1 + y
    assert substitute(p, {"X": (x, y), "y": 1}, XY) == x ** 2 * y ** -2 + 1


def test_substitute_negative_power_of_polynomial_fails():
    p = var("x", XY) ** -1
    with pytest.raises(UnclearedDenominator):
        substitute(p, {"x": var("y", XY) + 1})


def test_substitute_zero_into_pole_fails():
    with pytest.raises(PoleError):
        substitute(var("x", XY) ** -1, {"x": 0})


def test_eval_rational():
    p = parse_poly("y*z^(1/2)*w + x + 1", R)
    assert eval_rational(p, {"x": 2, "y": Fraction(1, 2), "z": 4, "w": 1}) == 4
    with pytest.raises(IrrationalValueError):
        eval_rational(p, {"x": 0, "y": 1, "z": 2, "w": 1})
    with pytest.raises(PoleError):
        eval_rational(var("x", XY) ** -1, {"x": 0, "y": 1})
    with pytest.raises(PolyError):
        eval_rational(p, {"x": 1})


def test_json_document_keeps_table():
    p = parse_poly("y*z*w + x + 1", R)
    doc = to_json(p)
    assert doc["vars"] == ["x", "y", "z", "w"]
    assert doc["idempotent"] == ["w"]
    assert from_json(doc) == p


def test_rename_moves_idempotent_flag():
    p = rename(parse_poly("y*w + x", R), {"x": "a", "w": "v"})
    assert p.table.names == ("a", "y", "z", "v")
    assert p.table.idempotent == frozenset({"v"})
    assert render(p) == "y*v + a"


def test_check_identity_is_truthy_only_when_equal():
    x = var("x", XY)
    assert check_identity("same", x + 1, 1 + x)
    failed = check_identity("different", x, x + 1, "detail")
    assert not failed
    assert failed.as_dict() == {"identity": "different", "holds": False, "lhs": "x", "rhs": "x + 1", "detail": "detail"}
