"""Independent ground truth: exhaustive CVP, the exact determinant
criterion, and the seeded instance generator.

This is the only module allowed to read a norm's structured fields
(coordinate matrix and weights); the production algorithms see norms as
evaluation-only black boxes, and the tests cross-check the two sides
against each other.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DependentInput,
    InvalidParameters,
    ResourceExhausted,
    TargetInLattice,
)
from .linalg import (
    INF,
    QVector,
    columns_to_matrix,
    det,
    is_independent,
    is_prime,
    mat_mul,
    valuation,
    vector,
)
from .lattices import (
    DEFAULT_MAX_LEVEL,
    CVPResult,
    PAdicLattice,
    _check_solver_inputs,
    _reject_target_in_lattice,
)
from .norms import WeightedCoordinateNorm


def _digit_string(coeffs: Sequence[int], p: int, level: int) -> tuple:
    """Level-major digit tuples of the coefficient residues (tie-break key)."""
    return tuple(
        tuple((c // p**j) % p for c in coeffs) for j in range(level)
    )


def exhaustive_cvp(
    norm: WeightedCoordinateNorm,
    lattice: PAdicLattice,
    target: QVector,
    start_level: int = 1,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> CVPResult:
    """CVP by full enumeration of all coefficient tuples mod p^k.

    No pruning: every residue at level k is evaluated, the minimum norm is
    taken, and the level is accepted only if every branch is frozen there
    (largest exponent < k + min_j w(basis_j)); otherwise k increases and the
    whole grid is re-enumerated.  Tie-break matches solve_cvp: the
    lexicographically smallest level-major digit string.
    """
    target = _check_solver_inputs(norm, lattice, target)
    _reject_target_in_lattice(lattice, target)
    if start_level < 1:
        raise InvalidParameters("start_level must be >= 1")
    p = norm.p
    basis = lattice.basis
    m = len(basis)
    floor = min(norm.exponent(b) for b in basis)
    weights = norm.weights
    # Oracle privilege: enumerate in M-coordinates with partial sums, where
    # the exponent is min_i val((Mv)_i) + e_i by definition of the family.
    y_target = tuple(
        sum(r * t for r, t in zip(row, target)) for row in norm.matrix
    )
    y_basis = [
        tuple(sum(r * b for r, b in zip(row, bvec)) for row in norm.matrix)
        for bvec in basis
    ]
    nodes = 0
    evals = m
    k = start_level
    while True:
        if k > max_level:
            raise ResourceExhausted(
                f"exhaustive enumeration passed level cap {max_level}"
            )
        pk = p**k
        best: Optional[tuple] = None  # (w, digits, coeffs)
        max_exp = None

        def grid(i: int, y: tuple, prefix: tuple) -> None:
            nonlocal best, max_exp, nodes, evals
            if i == m:
                w = INF
                for yi, e in zip(y, weights):
                    if yi:
                        cand = valuation(yi, p) + e
                        if cand < w:
                            w = cand
                nodes += 1
                evals += 1
                if w is INF:
                    raise TargetInLattice(
                        "a lattice point coincides with the target"
                    )
                if max_exp is None or w > max_exp:
                    max_exp = w
                if best is None or w > best[0]:
                    best = (w, _digit_string(prefix, p, k), prefix)
                elif w == best[0]:
                    digits = _digit_string(prefix, p, k)
                    if digits < best[1]:
                        best = (w, digits, prefix)
                return
            step = y_basis[i]
            cur = list(y)
            for c in range(pk):
                grid(i + 1, tuple(cur), prefix + (c,))
                for j in range(len(cur)):
                    cur[j] -= step[j]

        grid(0, y_target, ())
        if max_exp < k + floor:  # every branch frozen: the minimum is exact
            w, _, coeffs = best
            w0 = tuple(
                sum(c * b[i] for c, b in zip(coeffs, basis))
                for i in range(lattice.dimension)
            )
            return CVPResult(
                w0=w0,
                coefficients=coeffs,
                level=k,
                distance=w,
                nodes_explored=nodes,
                norm_evaluations=evals,
            )
        k += 1


def check_orthogonal_determinant(
    norm: WeightedCoordinateNorm, vectors: Sequence[QVector]
) -> bool:
    """Exact orthogonality criterion from determinant valuations.

    With Y = M * [vectors as columns], a Hadamard-type bound gives
    val(det Y_S) + sum of the selected weights >= sum_j w(v_j) for every
    maximal minor; equality for the best minor characterizes orthogonality
    of this norm family.  For full rank the single determinant suffices;
    below full rank the minimum over all m-row minors is used (oracle
    privilege: reads the norm's matrix and weights).
    """
    vectors = tuple(vector(v) for v in vectors)
    if not vectors:
        raise InvalidParameters("no vectors to check")
    if not is_independent(vectors):
        raise DependentInput("vectors are linearly dependent")
    m = len(vectors)
    n = norm.dimension
    p = norm.p
    y = mat_mul(norm.matrix, columns_to_matrix(vectors))
    target = sum(norm.exponent(v) for v in vectors)
    if m == n:
        w_det = valuation(det(y), p) + sum(norm.weights)
    else:
        w_det = INF
        for rows in itertools.combinations(range(n), m):
            minor = tuple(y[i] for i in rows)
            v = valuation(det(minor), p)
            if v is INF:
                continue
            cand = v + sum(norm.weights[i] for i in rows)
            if cand < w_det:
                w_det = cand
    return w_det == target


@dataclass(frozen=True)
class Instance:
    """A reproducible test problem: norm(s) plus a basis, tied to its seed."""

    p: int
    n: int
    norm: WeightedCoordinateNorm
    basis: tuple[QVector, ...]
    seed: int
    params: dict = field(default_factory=dict)
    norm2: Optional[WeightedCoordinateNorm] = None
    target: Optional[QVector] = None


def _random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return rows
    for _ in range(2 * n + 2):
        i = rng.randrange(n)
        j = rng.randrange(n)
        while j == i:
            j = rng.randrange(n)
        c = rng.randint(-3, 3)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return rows


def _random_norm(
    rng: random.Random, p: int, n: int, d: int
) -> WeightedCoordinateNorm:
    rows = _random_unimodular(rng, n)
    powers = [p ** rng.randint(0, 2) for _ in range(n)]
    scaled = [[x * powers[j] for j, x in enumerate(row)] for row in rows]
    weights = tuple(Fraction(rng.randint(-2 * d, 2 * d), d) for _ in range(n))
    return WeightedCoordinateNorm(
        p=p, matrix=scaled, weights=weights, weight_denominator=d
    )


def generate_instances(
    seed: int,
    p: int,
    n: int,
    weight_denominator: int = 1,
    entry_bound: int = 10,
    count: int = 1,
    *,
    rank: Optional[int] = None,
    second_norm: bool = False,
) -> list[Instance]:
    """Deterministic pseudo-random instances (CPython Mersenne Twister).

    Coordinate maps are products of random elementary integer matrices
    (determinant +-1) with diagonal p-power column scalings, so they are
    invertible by construction; bases are rejection-sampled integer
    matrices with full rank.  The same (seed, parameters) always
    regenerates the identical corpus.
    """
    if not is_prime(p):
        raise InvalidParameters(f"p = {p} is not prime")
    if n < 1 or count < 1 or entry_bound < 1 or weight_denominator < 1:
        raise InvalidParameters("n, count, entry_bound, weight_denominator must be >= 1")
    m = n if rank is None else rank
    if not 1 <= m <= n:
        raise InvalidParameters(f"rank must be in [1, {n}]")
    rng = random.Random(seed)
    params = {
        "p": p,
        "n": n,
        "weight_denominator": weight_denominator,
        "entry_bound": entry_bound,
        "count": count,
        "rank": m,
        "second_norm": second_norm,
    }
    out = []
    for index in range(count):
        norm = _random_norm(rng, p, n, weight_denominator)
        norm2 = _random_norm(rng, p, n, weight_denominator) if second_norm else None
        while True:
            basis = tuple(
                tuple(
                    Fraction(rng.randint(-entry_bound, entry_bound))
                    for _ in range(n)
                )
                for _ in range(m)
            )
            if is_independent(basis):
                break
        out.append(
            Instance(
                p=p,
                n=n,
                norm=norm,
                basis=basis,
                seed=seed,
                params={**params, "index": index},
                norm2=norm2,
            )
        )
    return out


def generate_instance(
    seed: int,
    p: int,
    n: int,
    weight_denominator: int = 1,
    entry_bound: int = 10,
    *,
    rank: Optional[int] = None,
    second_norm: bool = False,
) -> Instance:
    """Single-instance convenience wrapper around generate_instances."""
    return generate_instances(
        seed,
        p,
        n,
        weight_denominator,
        entry_bound,
        1,
        rank=rank,
        second_norm=second_norm,
    )[0]
