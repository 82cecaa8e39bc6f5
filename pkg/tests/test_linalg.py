from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weil import linalg
from weil.linalg import DimensionMismatch, echelon, intersect, member, solve, subspace_sum

rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def vectors(n):
    return st.lists(st.lists(rats, min_size=n, max_size=n), min_size=0, max_size=4)


def test_echelon_examples():
    assert echelon([(1, 1), (2, 2)]).basis == ((1, 1),)
    assert echelon([], 3).basis == ()
    assert echelon([(0, 1, 0), (1, 0, 0), (1, 1, 0)]).basis == ((1, 0, 0), (0, 1, 0))


def test_echelon_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        echelon([(1, 0), (1, 0, 0)])


def test_intersect_examples():
    e = lambda *v: echelon(v)  # noqa: E731
    assert intersect(e((1, 0)), e((0, 1))).is_zero()
    u = e((1, 2, 0), (0, 1, 1))
    assert intersect(u, u) == u
    assert intersect(e((1, 0, 0), (0, 1, 0)), e((0, 1, 0), (0, 0, 1))) == e((0, 1, 0))
    with pytest.raises(DimensionMismatch):
        intersect(e((1, 0)), e((1, 0, 0)))


def test_sum_member_solve_examples():
    assert subspace_sum(echelon([(1, 0)]), echelon([(0, 1)])) == linalg.full_space(2)
    assert member((2, 2), echelon([(1, 1)]))
    assert not member((2, 1), echelon([(1, 1)]))
    assert solve([[1, 1], [0, 1]], (3, 1)) == (2, 1)
    assert solve([[1, 1], [1, 1]], (1, 2)) is None


def test_rational_strings():
    assert linalg.format_rat(F(-3, 7)) == "-3/7"
    assert linalg.format_rat(F(4, 2)) == "2"
    assert linalg.parse_rat("-6/14") == F(-3, 7)
    with pytest.raises(ValueError):
        linalg.parse_rat("1/0")


@settings(max_examples=60, deadline=None)
@given(vectors(4))
def test_echelon_idempotent(vs):
    s = echelon(vs, 4)
    assert echelon(s.basis, 4) == s


@settings(max_examples=60, deadline=None)
@given(vectors(4), vectors(4))
def test_grassmann_identity(a, b):
    u, v = echelon(a, 4), echelon(b, 4)
    assert u.dim + v.dim == subspace_sum(u, v).dim + intersect(u, v).dim


@settings(max_examples=60, deadline=None)
@given(vectors(3), st.lists(rats, min_size=3, max_size=3))
def test_member_matches_span_growth(a, v):
    u = echelon(a, 3)
    assert member(v, u) == (echelon(list(u.basis) + [v], 3) == u)


@given(rats.filter(bool))
def test_exact_reciprocals(q):
    assert q * (1 / q) == 1
