"""Orthogonalization algorithms for p-adic norms.

Three deterministic procedures, all driven by the exact CVP solver:

* single-norm orthogonalization of a vector-space basis,
* simultaneous orthogonalization under two norms,
* orthogonalization of a rank-2 lattice basis (lattice-preserving, so no
  rescaling by powers of p is applied there).

A basis v_1..v_m is N-orthogonal when N(sum a_i v_i) = max_i N(a_i v_i) for
all scalars; the finite criterion behind `check_orthogonal_sampled` only
needs one coefficient equal to 1 and the rest in Z_p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import (
    DependentBasis,
    DependentInput,
    DimensionMismatch,
    InvalidParameters,
    NotNormalized,
    PadicOrthoError,
    ZeroVector,
)
from .linalg import (
    Exponent,
    QMatrix,
    QVector,
    coordinates_in_span,
    det,
    is_independent,
    is_zero_vector,
    valuation,
    vec_sub,
    vector,
)
from .lattices import (
    DEFAULT_MAX_LEVEL,
    PAdicLattice,
    SearchStats,
    maximize_norm_ratio,
    solve_cvp,
)
from .norms import NormPair, WeightedCoordinateNorm, normalize_vector


@dataclass(frozen=True)
class OrthogonalBasisReport:
    """Result of a space-basis orthogonalization.

    `exponents` holds one tuple per norm (one for the single-norm algorithm,
    two for the simultaneous one).  `change_of_basis` expresses each output
    vector as a coordinate column over the input basis; it is invertible
    exactly when the span was preserved.
    """

    vectors: tuple[QVector, ...]
    exponents: tuple[tuple[Exponent, ...], ...]
    change_of_basis: QMatrix
    stats: SearchStats


class OrthogonalityWitness(NamedTuple):
    coefficients: tuple[Fraction, ...]
    combination_exponent: Exponent
    component_exponent: Exponent


def _exponent_in_unit_window(norm, v) -> bool:
    w = norm.exponent(v)
    return w >= 0 and w < 1


def find_orthogonal_vector(
    norm: WeightedCoordinateNorm,
    w_basis: Sequence[QVector],
    u: QVector,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    stats: Optional[SearchStats] = None,
) -> QVector:
    """Extend an orthogonal set: a vector orthogonal to span(w_basis).

    Requires w_basis N-orthogonal and everything normalized to exponents in
    [0, 1); then the correction is exactly the closest vector to u in the
    Z_p-lattice on w_basis, and u minus that correction (renormalized) is
    orthogonal to the whole hyperplane.
    """
    u = vector(u)
    if is_zero_vector(u):
        raise ZeroVector("target vector is zero")
    if not w_basis:
        return normalize_vector(norm, u)[0]
    w_basis = tuple(vector(w) for w in w_basis)
    for v in (*w_basis, u):
        if not _exponent_in_unit_window(norm, v):
            raise NotNormalized(
                "inputs must have norm exponents in [0, 1); apply normalize_vector"
            )
    if not is_independent((*w_basis, u)):
        raise DependentInput("u lies in the span of w_basis")
    lattice = PAdicLattice(p=norm.p, basis=w_basis)
    result = solve_cvp(norm, lattice, u, max_level=max_level, stats=stats)
    return normalize_vector(norm, vec_sub(u, result.w0))[0]


def _coordinates_matrix(
    input_basis: Sequence[QVector], outputs: Sequence[QVector]
) -> QMatrix:
    cols = []
    for v in outputs:
        coords = coordinates_in_span(input_basis, v)
        if coords is None:
            raise PadicOrthoError("output vector left the input span (bug)")
        cols.append(coords)
    m = len(input_basis)
    return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(m))


def orthogonalize(
    norm: WeightedCoordinateNorm,
    basis: Sequence[QVector],
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> OrthogonalBasisReport:
    """N-orthogonal basis of span(basis), exponents normalized into [0, 1).

    Recursion on the dimension: orthogonalize the span of the tail, then
    correct the head against it via CVP.  Deterministic; the output passes
    the exact determinant criterion and the sampled criterion.
    """
    basis = tuple(vector(b) for b in basis)
    if not basis:
        raise InvalidParameters("empty basis")
    if not is_independent(basis):
        raise DependentBasis("input basis is linearly dependent")
    stats = SearchStats()

    def work(vectors: tuple[QVector, ...]) -> list[QVector]:
        if len(vectors) == 1:
            return [normalize_vector(norm, vectors[0])[0]]
        tail = work(vectors[1:])
        head = normalize_vector(norm, vectors[0])[0]
        v1 = find_orthogonal_vector(
            norm, tail, head, max_level=max_level, stats=stats
        )
        return [v1, *tail]

    out = tuple(work(basis))
    change = _coordinates_matrix(basis, out)
    if det(change) == 0:
        raise PadicOrthoError("change of basis is singular (bug)")
    return OrthogonalBasisReport(
        vectors=out,
        exponents=(tuple(norm.exponent(v) for v in out),),
        change_of_basis=change,
        stats=stats,
    )


def find_orthogonal_hyperplane(
    norm: WeightedCoordinateNorm,
    basis: Sequence[QVector],
    v1: QVector,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    stats: Optional[SearchStats] = None,
) -> list[QVector]:
    """A hyperplane of span(basis) that is N-orthogonal to v1.

    Recursion: drop the basis vector carrying the p-adically largest
    coordinate of v1 (lowest index on ties), adjoin v1 in its place, find a
    hyperplane of that smaller space orthogonal to v1, and complete it with
    a vector orthogonal to the whole smaller space.  Returns m - 1 vectors
    spanning the hyperplane (empty for a line).
    """
    basis = tuple(vector(b) for b in basis)
    v1 = vector(v1)
    if is_zero_vector(v1):
        raise ZeroVector("v1 is zero")
    if not basis:
        raise InvalidParameters("empty basis")
    if not is_independent(basis):
        raise DependentBasis("input basis is linearly dependent")
    if len(basis) == 1:
        return []
    coords = coordinates_in_span(basis, v1)
    if coords is None:
        raise InvalidParameters("v1 is not in the span of the basis")
    own_stats = stats if stats is not None else SearchStats()
    p = norm.p
    jhat = min(range(len(basis)), key=lambda i: (valuation(coords[i], p), i))
    rest = [b for i, b in enumerate(basis) if i != jhat]
    v_prime = (*rest[1:], v1)
    w_prime = find_orthogonal_hyperplane(
        norm, v_prime, v1, max_level=max_level, stats=own_stats
    )
    ortho_prime = orthogonalize(norm, v_prime, max_level=max_level)
    own_stats.merge(ortho_prime.stats)
    u1 = find_orthogonal_vector(
        norm,
        ortho_prime.vectors,
        normalize_vector(norm, rest[0])[0],
        max_level=max_level,
        stats=own_stats,
    )
    return [u1, *w_prime]


def orthogonalize_simultaneous(
    pair: NormPair,
    basis: Sequence[QVector],
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> OrthogonalBasisReport:
    """A basis orthogonal under both norms of the pair simultaneously.

    Each round takes a maximizer of N/N' as the next vector, then recurses
    into a hyperplane N-orthogonal to it (which is automatically
    N'-orthogonal to it as well).  Outputs are normalized under the first
    norm; exponent tuples are reported for both norms.
    """
    basis = tuple(vector(b) for b in basis)
    if not basis:
        raise InvalidParameters("empty basis")
    if any(len(b) != pair.first.dimension for b in basis):
        raise DimensionMismatch("basis vectors do not match the norms")
    if not is_independent(basis):
        raise DependentBasis("input basis is linearly dependent")
    stats = SearchStats()

    def work(vectors: tuple[QVector, ...]) -> list[QVector]:
        if len(vectors) == 1:
            return [normalize_vector(pair.first, vectors[0])[0]]
        v1 = maximize_norm_ratio(pair, vectors, max_level=max_level, stats=stats)
        hyper = find_orthogonal_hyperplane(
            pair.first, vectors, v1, max_level=max_level, stats=stats
        )
        tail = work(tuple(hyper))
        return [normalize_vector(pair.first, v1)[0], *tail]

    out = tuple(work(basis))
    change = _coordinates_matrix(basis, out)
    if det(change) == 0:
        raise PadicOrthoError("change of basis is singular (bug)")
    return OrthogonalBasisReport(
        vectors=out,
        exponents=(
            tuple(pair.first.exponent(v) for v in out),
            tuple(pair.second.exponent(v) for v in out),
        ),
        change_of_basis=change,
        stats=stats,
    )


def orthogonalize_rank2_lattice(
    norm: WeightedCoordinateNorm,
    alpha: QVector,
    beta: QVector,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    stats: Optional[SearchStats] = None,
) -> tuple[QVector, QVector]:
    """An N-orthogonal basis of the rank-2 lattice generated by alpha, beta.

    Two CVP corrections: shift alpha by its closest vector in Z_p*beta, then
    shift beta by its closest vector in Z_p*alpha'.  Both shifts are
    Z_p-unimodular, so the lattice is unchanged; no rescaling by p-powers is
    performed because that would alter the lattice.
    """
    alpha = vector(alpha)
    beta = vector(beta)
    if not is_independent((alpha, beta)):
        raise DependentInput("alpha and beta are linearly dependent")
    r1 = solve_cvp(
        norm,
        PAdicLattice(p=norm.p, basis=(beta,)),
        alpha,
        max_level=max_level,
        stats=stats,
    )
    alpha2 = vec_sub(alpha, r1.w0)
    r2 = solve_cvp(
        norm,
        PAdicLattice(p=norm.p, basis=(alpha2,)),
        beta,
        max_level=max_level,
        stats=stats,
    )
    beta2 = vec_sub(beta, r2.w0)
    return alpha2, beta2


def check_orthogonal_sampled(
    norm: WeightedCoordinateNorm,
    vectors: Sequence[QVector],
    trials: int = 500,
    depth: int = 5,
    *,
    seed: int = 0,
) -> tuple[bool, Optional[OrthogonalityWitness]]:
    """One-sided orthogonality check by random Z_p coefficient sampling.

    Samples tuples with one coefficient fixed to 1 (round-robin position)
    and the rest uniform in [0, p^depth), and compares the norm of the
    combination with the max of the component norms.  Returns (False,
    witness) on the first violation; (True, None) means only that no
    counterexample was found.
    """
    vectors = tuple(vector(v) for v in vectors)
    if not vectors:
        raise InvalidParameters("no vectors to check")
    if trials < 1 or depth < 1:
        raise InvalidParameters("trials and depth must be >= 1")
    if not is_independent(vectors):
        raise DependentInput("vectors are linearly dependent")
    m = len(vectors)
    n = len(vectors[0])
    p = norm.p
    part = [norm.exponent(v) for v in vectors]
    rng = random.Random(seed)
    for t in range(trials):
        pinned = t % m
        coeffs = tuple(
            Fraction(1) if i == pinned else Fraction(rng.randrange(p**depth))
            for i in range(m)
        )
        combo = tuple(
            sum(c * v[i] for c, v in zip(coeffs, vectors)) for i in range(n)
        )
        lhs = norm.exponent(combo)
        rhs = min(
            valuation(c, p) + w for c, w in zip(coeffs, part) if c != 0
        )
        if lhs != rhs:
            return False, OrthogonalityWitness(
                coefficients=coeffs,
                combination_exponent=lhs,
                component_exponent=rhs,
            )
    return True, None
