from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from padic_ortho.errors import SingularMatrix
from padic_ortho.linalg import (
    INF,
    coordinates_in_span,
    det,
    identity,
    invert,
    is_independent,
    is_prime,
    mat_mul,
    mat_vec,
    matrix,
    rank,
    solve,
    valuation,
    vector,
)

primes = st.sampled_from([2, 3, 5, 7])
rationals = st.fractions(min_value=-60, max_value=60, max_denominator=24)
nonzero_rationals = rationals.filter(lambda x: x != 0)


@pytest.mark.parametrize(
    "x, p, expected",
    [
        (12, 2, 2),
        (F(9, 10), 5, -1),
        (1, 7, 0),
        (F(1, 4), 2, -2),
        (-18, 3, 2),
    ],
)
def test_valuation(x, p, expected):
    assert valuation(x, p) == expected


def test_valuation_of_zero_is_infinite():
    assert valuation(0, 5) is INF
    assert valuation(F(0), 2) is INF


def test_infinity_ordering():
    assert INF > F(10**9)
    assert not INF < F(3, 2)
    assert F(3, 2) < INF
    assert INF == INF and INF >= INF and INF <= INF
    assert INF + 5 is INF
    assert 5 + INF is INF


@given(nonzero_rationals, nonzero_rationals, primes)
def test_valuation_is_multiplicative(x, y, p):
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


@given(rationals, rationals, primes)
def test_valuation_ultrametric(x, y, p):
    lo = min(valuation(x, p), valuation(y, p))
    assert valuation(x + y, p) >= lo
    if valuation(x, p) != valuation(y, p):
        assert valuation(x + y, p) == lo


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], F(1)),
        ([[2, 4], [1, 3]], F(2)),
        ([[1, 2], [1, 2]], F(0)),
        ([[F(1, 2), 0], [0, F(2, 3)]], F(1, 3)),
    ],
)
def test_det(rows, expected):
    assert det(matrix(rows)) == expected


def test_invert_examples():
    assert invert(identity(3)) == identity(3)
    assert invert(matrix([[2, 0], [0, 1]])) == matrix([[F(1, 2), 0], [0, 1]])
    with pytest.raises(SingularMatrix):
        invert(matrix([[1, 1], [2, 2]]))


def test_solve_examples():
    b = vector([5, -7, F(1, 3)])
    assert solve(identity(3), b) == b
    assert solve(matrix([[2, 0], [0, 1]]), vector([1, 3])) == vector([F(1, 2), 3])
    with pytest.raises(SingularMatrix):
        solve(matrix([[1, 1], [2, 2]]), vector([1, 2]))


small_matrices = st.integers(min_value=2, max_value=3).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


@given(small_matrices, small_matrices)
@settings(max_examples=60)
def test_det_is_multiplicative(a_rows, b_rows):
    if len(a_rows) != len(b_rows):
        return
    a, b = matrix(a_rows), matrix(b_rows)
    assert det(mat_mul(a, b)) == det(a) * det(b)


@given(small_matrices)
@settings(max_examples=60)
def test_invert_twice_and_solve_roundtrip(rows):
    m = matrix(rows)
    if det(m) == 0:
        with pytest.raises(SingularMatrix):
            invert(m)
        return
    assert invert(invert(m)) == m
    b = vector(range(1, len(rows) + 1))
    assert mat_vec(m, solve(m, b)) == b


def test_rank_and_independence():
    assert rank([vector([1, 2]), vector([2, 4])]) == 1
    assert is_independent([vector([1, 0]), vector([1, 1])])
    assert not is_independent([vector([1, 1]), vector([2, 2])])


def test_coordinates_in_span():
    basis = [vector([1, 0, 1]), vector([0, 1, 1])]
    assert coordinates_in_span(basis, vector([2, 3, 5])) == (F(2), F(3))
    assert coordinates_in_span(basis, vector([0, 0, 1])) is None
    assert coordinates_in_span([], vector([0, 0])) == ()


def test_is_prime():
    assert [p for p in range(2, 30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1) and not is_prime(0) and not is_prime(-3)
