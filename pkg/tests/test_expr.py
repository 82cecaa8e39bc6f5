from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weil.expr import (
    Add,
    Call,
    Const,
    Div,
    ExprSyntaxError,
    Mul,
    Neg,
    Pow,
    Sub,
    UnknownIdentifier,
    Var,
    degree,
    evaluate_rational,
    expand,
    identifiers,
    parse_expr,
    to_string,
)

XY = ("x", "y")


def test_parser_examples():
    assert parse_expr("x^2 + 3*y", XY) == Add(Pow(Var(0), 2), Mul(Const(F(3)), Var(1)))
    assert parse_expr("exp(x)*sin(y)", XY) == Mul(Call("exp", Var(0)), Call("sin", Var(1)))
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("x + * y", XY)
    assert err.value.position == 4


def test_precedence():
    assert parse_expr("-x^2") == Neg(Pow(Var(0), 2))
    assert parse_expr("1 - x - x") == Sub(Sub(Const(F(1)), Var(0)), Var(0))
    assert parse_expr("x/2*x") == Mul(Div(Var(0), Const(F(2))), Var(0))
    assert parse_expr("2.5") == Const(F(5, 2))
    assert parse_expr("3/4") == Const(F(3, 4))


def test_errors():
    with pytest.raises(UnknownIdentifier):
        parse_expr("z", XY)
    with pytest.raises(UnknownIdentifier):
        parse_expr("tan(x)")
    for bad in ("(x", "x)", "x^-1", "", "2^3^1", "x^y"):
        with pytest.raises(ExprSyntaxError):
            parse_expr(bad)


def test_identifiers_natural_order():
    assert identifiers("x10 + x2*exp(x1)") == ["x1", "x2", "x10"]


def test_polynomial_tools():
    e = parse_expr("(x + y)^2 - x*y", XY)
    assert expand(e, 2) == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert degree(e, 2) == 2
    assert evaluate_rational(e, [F(1), F(2)]) == 7


leaf = st.one_of(
    st.builds(Const, st.fractions(min_value=0, max_value=9, max_denominator=5)),
    st.builds(Var, st.integers(0, 1)),
)
exprs = st.recursive(
    leaf,
    lambda sub: st.one_of(
        st.builds(Add, sub, sub),
        st.builds(Sub, sub, sub),
        st.builds(Mul, sub, sub),
        st.builds(Div, sub, sub),
        st.builds(Neg, sub),
        st.builds(Pow, sub, st.integers(0, 3)),
        st.builds(Call, st.sampled_from(["exp", "log", "sin", "cos", "sqrt"]), sub),
    ),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_printer_round_trip(e):
    text = to_string(e, XY)
    assert parse_expr(text, XY) == e
