import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weil.expr import parse_expr
from weil.polarization import (
    PolarizationTooLarge,
    homogeneity_check,
    multidir_derivative_fd,
    polarize,
    taylor_remainder_check,
    unidirectional,
)

rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_polarize_examples():
    sq = parse_expr("x^2")
    assert polarize(sq, 2, [F(0)], [[F(3)], [F(5)]]) == 2 * 3 * 5
    assert polarize(sq, 0, [F(7)], []) == 49
    assert unidirectional(parse_expr("x^3"), 3, [F(0)], [F(2)]) == 6 * 8
    assert polarize(parse_expr("x^3"), 2, [F(1)], [[F(1)], [F(1)]]) == 12


def test_polarize_input_errors():
    with pytest.raises(PolarizationTooLarge):
        polarize(parse_expr("x"), 17, [F(0)], [[F(1)]] * 17)
    with pytest.raises(ValueError):
        polarize(parse_expr("x"), 2, [F(0)], [[F(1)]])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(rat, rat), min_size=3, max_size=3), st.tuples(rat, rat))
def test_polarize_symmetric(vs, q):
    f = parse_expr("x1^2*x2 - 3*x1*x2^2 + x2^3 + x1", ("x1", "x2"))
    a = polarize(f, 3, list(q), [list(v) for v in vs])
    b = polarize(f, 3, list(q), [list(v) for v in reversed(vs)])
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(rat, rat), min_size=4, max_size=4), st.tuples(rat, rat))
def test_polarize_kills_low_degree(vs, q):
    f = parse_expr("x1^3 - 2*x1*x2^2 + 5*x2 - 1", ("x1", "x2"))
    assert polarize(f, 4, list(q), [list(v) for v in vs]) == 0


def test_fd_exact_for_polynomials():
    f = parse_expr("x1^3*x2 + x2^2", ("x1", "x2"))
    res = multidir_derivative_fd(f, 2, [F(1), F(2)], [[F(1), F(0)], [F(0), F(1)]])
    # d^2/dx1 dx2 = 3*x1^2
    assert res.exact and res.converged and res.value == 3


def test_fd_numeric():
    res = multidir_derivative_fd(parse_expr("exp(x)"), 2, [0.0], [[1.0], [1.0]])
    assert res.converged and res.value == pytest.approx(1.0, abs=1e-10)
    res = multidir_derivative_fd(parse_expr("sin(x1)*x2", ("x1", "x2")), 2, [0.4, 1.0], [[1.0, 0.0], [0.0, 1.0]])
    assert res.value == pytest.approx(math.cos(0.4), abs=1e-10)


def test_remainder_examples():
    pts = [[F(1, 2 ** k)] for k in range(1, 7)]
    rep = taylor_remainder_check(parse_expr("x^2 + x"), 2, [F(0)], pts)
    assert rep.passed and rep.reason == "remainder vanishes identically"
    rep = taylor_remainder_check(parse_expr("exp(x)"), 2, [0.0], [[0.5 ** k] for k in range(1, 7)])
    assert rep.passed and rep.ratios[-1] < rep.ratios[0] / 10
    # a wrong jet leaves a constant ratio
    bad = {(0,): 1.0, (1,): 1.0, (2,): 0.0}
    assert not taylor_remainder_check(parse_expr("exp(x)"), 2, [0.0], [[0.5 ** k] for k in range(1, 7)], bad).passed


def test_homogeneity_examples():
    xy = ("x", "y")
    assert homogeneity_check(parse_expr("x^2*y - 3*y^3", xy), 3, [0, 0])
    assert not homogeneity_check(parse_expr("x^2 + y", xy), 2, [0, 0])
    assert not homogeneity_check(parse_expr("x^2", xy), 2, [1, 0])
    v = homogeneity_check(parse_expr("x + y^2", xy), 1, [0, 0])
    assert not v and not v.multilinear_ok
    with pytest.raises(TypeError):
        homogeneity_check(parse_expr("exp(x)"), 1, [0])
