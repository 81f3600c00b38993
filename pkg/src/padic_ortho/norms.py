"""The computable norm family on Q_p^n and exact norm-exponent arithmetic.

A norm here is N(v) = max_i p^(-e_i) * |(Mv)_i|_p for an invertible rational
matrix M and rational weights e_i.  Norm values are never materialized as
real numbers: we store and compare only the exponent w with N(v) = p^(-w),
an exact Fraction (or INF for the zero vector).  Larger norm == smaller
exponent.

Consumers in the solver and orthogonalizer layers must treat a norm as a
black box: call ``exponent()`` and read ``p`` / ``value_group_denominator``
only.  The structured fields (matrix, weights) are reserved for the oracle
and the generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    InvalidParameters,
    NotFullRank,
    ZeroVector,
)
from .linalg import (
    INF,
    Exponent,
    QMatrix,
    QVector,
    _int_valuation,
    columns_to_matrix,
    invert,
    is_prime,
    matrix,
    vector,
)

# Weight denominators are capped to keep value groups at desk scale
# (p^((1/d)Z) models ramified extensions of degree up to this bound).
MAX_WEIGHT_DENOMINATOR = 6


@dataclass(frozen=True)
class WeightedCoordinateNorm:
    """N(v) = max_i p^(-e_i) * |(Mv)_i|_p, evaluated exactly on exponents.

    The exponent of v is min_i (val_p((Mv)_i) + e_i); INF iff v = 0 because
    M is invertible.  Construction validates primality of p, invertibility
    of M, and that every weight denominator divides `weight_denominator`.
    """

    p: int
    matrix: QMatrix
    weights: tuple[Fraction, ...]
    weight_denominator: int = 1
    inverse: QMatrix = field(init=False, repr=False, compare=False)
    _int_rows: tuple = field(init=False, repr=False, compare=False)
    _row_offsets: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidParameters(f"p = {self.p} is not prime")
        object.__setattr__(self, "matrix", matrix(self.matrix))
        object.__setattr__(
            self, "weights", tuple(Fraction(w) for w in self.weights)
        )
        n = len(self.matrix)
        if n == 0 or any(len(row) != n for row in self.matrix):
            raise DimensionMismatch("coordinate map must be square and nonempty")
        if len(self.weights) != n:
            raise DimensionMismatch("one weight per coordinate required")
        d = self.weight_denominator
        if not isinstance(d, int) or d < 1:
            raise InvalidParameters("weight denominator must be a positive integer")
        if d > MAX_WEIGHT_DENOMINATOR:
            raise InvalidParameters(
                f"weight denominator {d} exceeds cap {MAX_WEIGHT_DENOMINATOR}"
            )
        if any(w.denominator > 1 and d % w.denominator for w in self.weights):
            raise InvalidParameters("weight denominators must divide the declared d")
        object.__setattr__(self, "inverse", invert(self.matrix))
        # Integer row cache: row_i scaled by the lcm r_i of its denominators,
        # with the valuation shift folded into the weight offset.
        int_rows = []
        offsets = []
        for row, w in zip(self.matrix, self.weights):
            r = math.lcm(*(x.denominator for x in row))
            int_rows.append(tuple(int(x * r) for x in row))
            offsets.append(w - _int_valuation(r, self.p) if r > 1 else w)
        object.__setattr__(self, "_int_rows", tuple(int_rows))
        object.__setattr__(self, "_row_offsets", tuple(offsets))

    @property
    def dimension(self) -> int:
        return len(self.weights)

    @property
    def value_group_denominator(self) -> int:
        return self.weight_denominator

    def exponent(self, v: QVector) -> Exponent:
        """w with N(v) = p^(-w); INF iff v = 0.  Exact."""
        if len(v) != self.dimension:
            raise DimensionMismatch(
                f"vector of length {len(v)} under a {self.dimension}-dim norm"
            )
        c = math.lcm(*(x.denominator for x in v))
        u = tuple(int(x * c) for x in v) if c > 1 else tuple(int(x) for x in v)
        p = self.p
        best = None
        for row, off in zip(self._int_rows, self._row_offsets):
            s = sum(a * b for a, b in zip(row, u))
            if s:
                w = _int_valuation(s, p) + off
                if best is None or w < best:
                    best = w
        if best is None:
            return INF
        if c > 1:
            best -= _int_valuation(c, p)
        return Fraction(best)


@dataclass(frozen=True)
class NormPair:
    """Two norms on the same space; the simultaneous orthogonalizer's input."""

    first: WeightedCoordinateNorm
    second: WeightedCoordinateNorm

    def __post_init__(self):
        if self.first.p != self.second.p:
            raise InvalidParameters("paired norms must share the prime")
        if self.first.dimension != self.second.dimension:
            raise DimensionMismatch("paired norms must share the dimension")


def normalize_vector(
    norm: WeightedCoordinateNorm, v: QVector
) -> tuple[QVector, int]:
    """Rescale v by p^m so the norm lands in (p^-1, 1].

    Returns (p^m * v, m) with exponent(p^m * v) in [0, 1); m = -floor(w(v)).
    """
    w = norm.exponent(v)
    if w is INF:
        raise ZeroVector("cannot normalize the zero vector")
    m = -math.floor(w)
    if m == 0:
        return tuple(v), 0
    scale = Fraction(norm.p) ** m
    return tuple(x * scale for x in v), m


def lattice_induced_norm(
    basis: Sequence[QVector], p: int
) -> WeightedCoordinateNorm:
    """The norm N' whose unit ball is the Z_p-lattice spanned by `basis`.

    N'(v) = max_i |c_i|_p for v = sum c_i * basis_i, i.e. the coordinate map
    is the basis inverse and all weights vanish.  The input basis is then
    N'-orthogonal with N'(basis_i) = 1.  Requires a full-rank basis.
    """
    basis = tuple(vector(b) for b in basis)
    if not basis:
        raise InvalidParameters("empty basis")
    n = len(basis[0])
    if any(len(b) != n for b in basis):
        raise DimensionMismatch("basis vectors of different lengths")
    if len(basis) < n:
        raise NotFullRank(
            f"induced norm needs {n} independent vectors, got {len(basis)}"
        )
    if len(basis) > n:
        raise DimensionMismatch("more basis vectors than the dimension")
    m = invert(columns_to_matrix(basis))  # SingularMatrix if dependent
    return WeightedCoordinateNorm(
        p=p, matrix=m, weights=tuple(Fraction(0) for _ in range(n))
    )


def format_exponent(w: Exponent, p: int) -> dict:
    """Exponent rendered both ways for reports: w and the symbolic p-power."""
    if w is INF:
        return {"w": "+inf", "value": "0"}
    return {"w": str(w), "value": f"{p}^({-w})"}
