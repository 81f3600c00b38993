import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from padic_ortho.errors import (
    DimensionMismatch,
    InvalidParameters,
    NotFullRank,
    SingularMatrix,
    ZeroVector,
)
from padic_ortho.linalg import INF, identity, valuation, vector
from padic_ortho.norms import (
    WeightedCoordinateNorm,
    lattice_induced_norm,
    normalize_vector,
)
from padic_ortho.oracle import check_orthogonal_determinant, generate_instance


def sup_norm(p, n):
    return WeightedCoordinateNorm(
        p=p, matrix=identity(n), weights=tuple(F(0) for _ in range(n))
    )


def test_exponent_examples():
    n3 = sup_norm(3, 2)
    assert n3.exponent(vector([6, F(1, 3)])) == F(-1)
    half = WeightedCoordinateNorm(
        p=2, matrix=identity(2), weights=(F(1, 2), F(0)), weight_denominator=2
    )
    assert half.exponent(vector([1, 0])) == F(1, 2)
    assert half.exponent(vector([0, 0])) is INF


def test_exponent_respects_coordinate_map():
    # M shifts the first coordinate into the second before weighting.
    n = WeightedCoordinateNorm(p=2, matrix=[[1, 0], [1, 1]], weights=(F(0), F(1)))
    # Mv = (1, 3): min(val(1)+0, val(3)+1) = 0
    assert n.exponent(vector([1, 2])) == 0
    # Mv = (2, 4): min(1, 2+1) = 1
    assert n.exponent(vector([2, 2])) == 1


def test_construction_validation():
    with pytest.raises(InvalidParameters):
        WeightedCoordinateNorm(p=4, matrix=identity(2), weights=(F(0), F(0)))
    with pytest.raises(SingularMatrix):
        WeightedCoordinateNorm(p=2, matrix=[[1, 1], [2, 2]], weights=(F(0), F(0)))
    with pytest.raises(InvalidParameters):
        WeightedCoordinateNorm(
            p=2, matrix=identity(2), weights=(F(1, 3), F(0)), weight_denominator=2
        )
    with pytest.raises(DimensionMismatch):
        WeightedCoordinateNorm(p=2, matrix=identity(2), weights=(F(0),))
    with pytest.raises(DimensionMismatch):
        sup_norm(2, 2).exponent(vector([1, 2, 3]))


@pytest.mark.parametrize(
    "p, start_exp, expected_m, expected_exp",
    [
        (3, F(-2), 2, F(0)),
        (3, F(-3, 2), 2, F(1, 2)),
        (2, F(0), 0, F(0)),
        (2, F(7, 3), -2, F(1, 3)),
    ],
)
def test_normalize_vector(p, start_exp, expected_m, expected_exp):
    d = start_exp.denominator
    norm = WeightedCoordinateNorm(
        p=p,
        matrix=identity(2),
        weights=(start_exp, F(10)),  # second coordinate never the minimum here
        weight_denominator=d,
    )
    v = vector([1, 0])
    assert norm.exponent(v) == start_exp
    out, m = normalize_vector(norm, v)
    assert m == expected_m
    assert norm.exponent(out) == expected_exp
    assert out == tuple(F(p) ** m * x for x in v)


def test_normalize_zero_raises():
    with pytest.raises(ZeroVector):
        normalize_vector(sup_norm(2, 2), vector([0, 0]))


def test_normalized_window_randomized():
    rng = random.Random(11)
    for trial in range(200):
        inst = generate_instance(trial, rng.choice([2, 3, 5]), 3, 2, 10)
        v = vector([rng.randint(-300, 300) for _ in range(3)])
        if all(x == 0 for x in v):
            continue
        out, _ = normalize_vector(inst.norm, v)
        assert 0 <= inst.norm.exponent(out) < 1


def test_induced_norm_examples():
    std = lattice_induced_norm([vector([1, 0]), vector([0, 1])], 2)
    assert std.exponent(vector([1, 1])) == 0  # sup norm
    stretched = lattice_induced_norm([vector([2, 0]), vector([0, 1])], 2)
    # v = (1,1) has coordinates (1/2, 1): N' = max(|1/2|_2, 1) = 2
    assert stretched.exponent(vector([1, 1])) == F(-1)
    for b in (vector([2, 0]), vector([0, 1])):
        assert stretched.exponent(b) == 0


def test_induced_norm_against_inf_formula():
    # Independent oracle: N'(v) = inf over x = p^k with x*v in the lattice
    # of |x|^-1, located by scanning k.
    basis = [vector([2, 0]), vector([3, 1])]
    p = 2
    induced = lattice_induced_norm(basis, p)
    from padic_ortho.lattices import PAdicLattice

    lat = PAdicLattice(p=p, basis=tuple(basis))
    rng = random.Random(5)
    for _ in range(50):
        v = vector([F(rng.randint(-20, 20), rng.choice([1, 2, 4])) for _ in range(2)])
        if all(x == 0 for x in v):
            continue
        k = next(k for k in range(-12, 13) if lat.contains(tuple(F(p) ** k * x for x in v)))
        assert induced.exponent(v) == -k


def test_induced_norm_errors():
    with pytest.raises(NotFullRank):
        lattice_induced_norm([vector([1, 0, 0])], 2)
    with pytest.raises(SingularMatrix):
        lattice_induced_norm([vector([1, 1]), vector([2, 2])], 2)


def test_induced_norm_input_basis_is_orthogonal():
    rng = random.Random(23)
    for trial in range(50):
        n = rng.choice([2, 3])
        basis = None
        inst = generate_instance(900 + trial, rng.choice([2, 3, 5]), n, 1, 20)
        basis = inst.basis
        induced = lattice_induced_norm(basis, inst.p)
        assert check_orthogonal_determinant(induced, basis)


norm_seeds = st.integers(min_value=0, max_value=10**6)


@given(norm_seeds, st.integers(min_value=0, max_value=10**6))
@settings(max_examples=40, deadline=None)
def test_homogeneity_and_ultrametric(seed, sample_seed):
    inst = generate_instance(seed, 3, 2, 2, 8)
    rng = random.Random(sample_seed)
    norm = inst.norm
    v = vector([F(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(2)])
    u = vector([F(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(2)])
    x = F(rng.randint(1, 99), rng.randint(1, 9))
    if any(c != 0 for c in v):
        assert norm.exponent(tuple(x * c for c in v)) == valuation(x, 3) + norm.exponent(v)
    s = norm.exponent(tuple(a + b for a, b in zip(v, u)))
    lo = min(norm.exponent(v), norm.exponent(u))
    assert s >= lo
    if norm.exponent(v) != norm.exponent(u):
        assert s == lo


def test_bulk_ultrametric_per_norm():
    """1e4 exact random pairs per generated norm, three norms."""
    for seed, p in [(1, 2), (2, 3), (3, 5)]:
        inst = generate_instance(seed, p, 2, 2, 10)
        norm = inst.norm
        rng = random.Random(seed)
        for _ in range(10_000):
            v = (F(rng.randint(-200, 200), rng.randint(1, 30)),
                 F(rng.randint(-200, 200), rng.randint(1, 30)))
            u = (F(rng.randint(-200, 200), rng.randint(1, 30)),
                 F(rng.randint(-200, 200), rng.randint(1, 30)))
            wv, wu = norm.exponent(v), norm.exponent(u)
            ws = norm.exponent((v[0] + u[0], v[1] + u[1]))
            assert ws >= min(wv, wu)
            if wv != wu:
                assert ws == min(wv, wu)


def test_value_group_denominator():
    rng = random.Random(77)
    for trial in range(60):
        d = rng.choice([1, 2, 3, 6])
        inst = generate_instance(3000 + trial, 3, 2, d, 10)
        v = vector([rng.randint(-50, 50), rng.randint(-50, 50)])
        w = inst.norm.exponent(v)
        if w is not INF:
            assert (w * inst.norm.value_group_denominator).denominator == 1
