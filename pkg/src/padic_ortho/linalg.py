"""Exact rational scalars, p-adic valuations, and exact linear algebra.

Everything here is pure and exact: scalars are ``fractions.Fraction``,
vectors are tuples of Fractions, matrices are tuples of row tuples.  No
floating point is used anywhere; comparisons of valuations and norm
exponents must be exact or the freeze/termination logic downstream breaks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatch, SingularMatrix

QVector = tuple[Fraction, ...]
QMatrix = tuple[QVector, ...]
ScalarLike = Union[int, str, Fraction]


class Infinity:
    """Positive infinity: the valuation / norm exponent of zero.

    Compares strictly above every finite value, absorbs addition, and is a
    singleton (``INF``).  Subtracting from it is deliberately unsupported.
    """

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinity)

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("padic-ortho:+inf")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "+inf"


INF = Infinity()

# Valuations are int-or-INF; norm exponents are Fraction-or-INF.
ExtInt = Union[int, Infinity]
Exponent = Union[Fraction, Infinity]


def is_prime(p: int) -> bool:
    """Trial division; p stays desk-scale so this is cheap."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _int_valuation(n: int, p: int) -> int:
    # n != 0
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: ScalarLike, p: int) -> ExtInt:
    """p-adic valuation val_p(x); INF for x = 0.

    |x|_p = p^(-valuation(x, p)).  Primality of p is the caller's contract
    (validated once at ingestion, not per call).
    """
    x = Fraction(x)
    if not x:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def vector(entries: Iterable[ScalarLike]) -> QVector:
    return tuple(Fraction(x) for x in entries)


def matrix(rows: Iterable[Iterable[ScalarLike]]) -> QMatrix:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix rows")
    return m


def identity(n: int) -> QMatrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def transpose(m: QMatrix) -> QMatrix:
    return tuple(zip(*m)) if m else ()


def columns_to_matrix(vectors: Sequence[QVector]) -> QMatrix:
    """n x m matrix whose columns are the given vectors."""
    return transpose(tuple(vectors))


def vec_add(u: QVector, v: QVector) -> QVector:
    if len(u) != len(v):
        raise DimensionMismatch("vector lengths differ")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: QVector, v: QVector) -> QVector:
    if len(u) != len(v):
        raise DimensionMismatch("vector lengths differ")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: QVector) -> QVector:
    return tuple(c * x for x in v)


def is_zero_vector(v: QVector) -> bool:
    return all(x == 0 for x in v)


def mat_vec(m: QMatrix, v: QVector) -> QVector:
    if m and len(m[0]) != len(v):
        raise DimensionMismatch("matrix/vector shapes differ")
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: QMatrix, b: QMatrix) -> QMatrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("matrix shapes differ")
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _check_square(m: QMatrix) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("matrix is not square")
    return n


def det(m: QMatrix) -> Fraction:
    """Exact determinant via rational Gaussian elimination.

    Pivot choice is the lowest row index with a nonzero entry, so the
    elimination (and everything derived from it) is deterministic.
    """
    n = _check_square(m)
    rows = [list(r) for r in m]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        result *= pivot
        for r in range(col + 1, n):
            f = rows[r][col]
            if f:
                f /= pivot
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return result if sign > 0 else -result


def invert(m: QMatrix) -> QMatrix:
    """Exact inverse by Gauss-Jordan; raises SingularMatrix on det 0."""
    n = _check_square(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        pivot = aug[col][col]
        aug[col] = [x / pivot for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def solve(m: QMatrix, b: QVector) -> QVector:
    """Solve Mx = b exactly; raises SingularMatrix when M is not invertible."""
    n = _check_square(m)
    if len(b) != n:
        raise DimensionMismatch("right-hand side has wrong length")
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        pivot = aug[col][col]
        aug[col] = [x / pivot for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b_ for a, b_ in zip(aug[r], aug[col])]
    return tuple(aug[i][n] for i in range(n))


def rank(vectors: Sequence[QVector]) -> int:
    """Rank of the span of the given vectors (row reduction, exact)."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("vectors of different lengths")
    rk = 0
    for col in range(width):
        piv = next((r for r in range(rk, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pivot = rows[rk][col]
        rows[rk] = [x / pivot for x in rows[rk]]
        for r in range(len(rows)):
            if r != rk and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def is_independent(vectors: Sequence[QVector]) -> bool:
    return rank(vectors) == len(vectors)


def coordinates_in_span(
    vectors: Sequence[QVector], v: QVector
) -> Optional[QVector]:
    """Coordinates of v in the independent list `vectors`, or None if v is
    outside their span.  Solved by row-reducing the augmented column system.
    """
    m = len(vectors)
    if m == 0:
        return () if is_zero_vector(v) else None
    n = len(vectors[0])
    if len(v) != n:
        raise DimensionMismatch("vector length differs from span vectors")
    # Columns are the span vectors, augmented with v.
    aug = [[vec[i] for vec in vectors] + [v[i]] for i in range(n)]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if aug[r][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pivot = aug[row][col]
        aug[row] = [x / pivot for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    # Inconsistent rows mean v is outside the span.
    for r in range(row, n):
        if aug[r][m]:
            return None
    coords = [Fraction(0)] * m
    for r, col in enumerate(pivots):
        coords[col] = aug[r][m]
    if len(pivots) < len(vectors):
        # Dependent "basis": coordinates are not well-defined.
        return None
    return tuple(coords)
