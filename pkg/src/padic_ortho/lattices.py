"""p-adic lattices and the exact digit-refinement search engine.

A lattice L = { sum a_i b_i : a_i in Z_p } is explored breadth-first by
residue classes of the coefficients mod p^k ("digit prefixes").  A branch
with representative w at level k is FROZEN once

    w_N(t - w)  <  k + c_L,      c_L = min_j w_N(b_j),

because every deeper extension adds p^k * u with u in L, whose exponent is
at least k + c_L; the ultrametric equality then pins the norm of the whole
branch to the representative's value.  The set of norm values on a coset
t + L is finite, so every branch freezes at a finite level and the search
terminates.  All comparisons are exact rational comparisons on exponents.

Norm objects are consumed strictly through their evaluation interface
(``exponent``, ``p``, ``value_group_denominator``); the searches never look
at a norm's internal structure.

Expansion is breadth-first by level with children enumerated by increasing
digit, so the lexicographic tie-break (level-major, coefficient-index minor)
is well-defined; a concurrent expansion would have to merge with the same
comparator to stay deterministic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import (
    DependentBasis,
    DimensionMismatch,
    InvalidParameters,
    PadicOrthoError,
    ResourceExhausted,
    TargetInLattice,
)
from .linalg import (
    INF,
    Exponent,
    QVector,
    coordinates_in_span,
    is_independent,
    is_prime,
    valuation,
    vec_sub,
    vector,
)
from .norms import NormPair, WeightedCoordinateNorm, normalize_vector

DEFAULT_MAX_LEVEL = 64


@dataclass(frozen=True)
class PAdicLattice:
    """Z_p-span of linearly independent rational vectors (rank m <= n)."""

    p: int
    basis: tuple[QVector, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidParameters(f"p = {self.p} is not prime")
        basis = tuple(vector(b) for b in self.basis)
        object.__setattr__(self, "basis", basis)
        if not basis:
            raise InvalidParameters("a lattice needs at least one basis vector")
        n = len(basis[0])
        if any(len(b) != n for b in basis):
            raise DimensionMismatch("basis vectors of different lengths")
        if len(basis) > n:
            raise DependentBasis("more basis vectors than the dimension")
        if not is_independent(basis):
            raise DependentBasis("lattice basis is linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis[0])

    def contains(self, v: QVector) -> bool:
        """Membership: rational coordinates exist and all have val_p >= 0."""
        coords = coordinates_in_span(self.basis, v)
        if coords is None:
            return False
        return all(valuation(c, self.p) >= 0 for c in coords)


@dataclass
class SearchStats:
    """Counters for one or more digit searches (mergeable)."""

    nodes_explored: int = 0
    norm_evaluations: int = 0
    terminal_level: int = 0
    calls: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.nodes_explored += other.nodes_explored
        self.norm_evaluations += other.norm_evaluations
        self.terminal_level = max(self.terminal_level, other.terminal_level)
        self.calls += other.calls


@dataclass(frozen=True)
class CVPResult:
    """Closest lattice vector with its exact distance exponent.

    `coefficients` are the non-negative integer digit representatives of w0,
    one per lattice basis vector, reduced mod p^level for the level at which
    the winning branch froze.
    """

    w0: QVector
    coefficients: tuple[int, ...]
    level: int
    distance: Exponent
    nodes_explored: int
    norm_evaluations: int


@dataclass(frozen=True)
class CosetEntry:
    exponent: Fraction
    representative: QVector


@dataclass(frozen=True)
class CosetValueTable:
    """The complete finite set {w_N(t + w) : w in L}, sorted by exponent."""

    entries: tuple[CosetEntry, ...]
    terminal_level: int
    nodes_explored: int
    norm_evaluations: int

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(e.exponent for e in self.entries)


class _Branch(NamedTuple):
    digits: tuple  # per-level digit tuples, level-major
    coeffs: tuple  # integer residues mod p^level
    residual: tuple  # target + sign * sum(coeffs * basis)
    exps: tuple  # exponent of residual under each norm
    forced_left: int  # post-freeze refinements still owed (deepening checks)


class _Best:
    """Running minimum of (objective, digit string) among frozen branches.

    Keeping only the current best is the value-based pruning: frozen
    branches that cannot beat it are dropped on arrival.
    """

    __slots__ = ("key", "branch")

    def __init__(self):
        self.key = None
        self.branch = None

    def offer(self, objective, branch: _Branch) -> None:
        key = (objective, branch.digits)
        if self.key is None or key < self.key:
            self.key = key
            self.branch = branch


def _search(
    norms: Sequence[WeightedCoordinateNorm],
    basis: Sequence[QVector],
    target: QVector,
    *,
    sign: int = -1,
    max_level: int = DEFAULT_MAX_LEVEL,
    objective: Optional[Callable[[tuple], object]] = None,
    extra_levels: int = 0,
    collect: Optional[list] = None,
) -> tuple[Optional[_Branch], SearchStats]:
    """Breadth-first digit refinement until every branch freezes.

    With `objective` given, returns the frozen branch minimizing
    (objective(exps), digits); with `collect` given, appends every frozen
    branch.  `sign` selects the coset direction: residuals are
    target + sign * (lattice combination).  With `extra_levels` > 0 every
    branch is refined that many levels past its own freeze point before it
    settles (used to demonstrate stability under deepening; a frozen
    branch's children all inherit its exponent, so results cannot change).
    """
    p = norms[0].p
    m = len(basis)
    stats = SearchStats(calls=1)
    floors = []
    for nm in norms:
        exps = [nm.exponent(b) for b in basis]
        stats.norm_evaluations += m
        if any(e is INF for e in exps):
            raise DependentBasis("lattice basis contains the zero vector")
        floors.append(min(exps))
    root_exps = tuple(nm.exponent(target) for nm in norms)
    stats.norm_evaluations += len(norms)
    if any(e is INF for e in root_exps):
        raise TargetInLattice("target is the zero vector")
    best = _Best() if objective is not None else None
    frontier = [
        _Branch(
            digits=(),
            coeffs=(0,) * m,
            residual=tuple(target),
            exps=root_exps,
            forced_left=extra_levels,
        )
    ]
    level = 0
    while True:
        active = []
        for br in frontier:
            frozen = all(e < level + c for e, c in zip(br.exps, floors))
            if frozen and br.forced_left == 0:
                if best is not None:
                    best.offer(objective(br.exps), br)
                if collect is not None:
                    collect.append(br)
            elif frozen:
                active.append(br._replace(forced_left=br.forced_left - 1))
            else:
                active.append(br)
        if not active:
            stats.terminal_level = level
            break
        if level >= max_level:
            raise ResourceExhausted(
                f"digit refinement exceeded level cap {max_level}"
            )
        pk = p**level
        scaled = [tuple(sign * pk * x for x in b) for b in basis]
        digit_steps = []  # digit_steps[i][d] = d * scaled[i]
        for sb in scaled:
            digit_steps.append([tuple(d * x for x in sb) for d in range(p)])
        next_frontier = []
        for br in active:
            for digit_tuple in itertools.product(range(p), repeat=m):
                residual = list(br.residual)
                for i, d in enumerate(digit_tuple):
                    if d:
                        step = digit_steps[i][d]
                        for j in range(len(residual)):
                            residual[j] += step[j]
                residual = tuple(residual)
                exps = tuple(nm.exponent(residual) for nm in norms)
                stats.nodes_explored += 1
                stats.norm_evaluations += len(norms)
                if any(e is INF for e in exps):
                    raise TargetInLattice("a lattice point coincides with the target")
                next_frontier.append(
                    _Branch(
                        digits=br.digits + (digit_tuple,),
                        coeffs=tuple(
                            c + d * pk for c, d in zip(br.coeffs, digit_tuple)
                        ),
                        residual=residual,
                        exps=exps,
                        forced_left=br.forced_left,
                    )
                )
        frontier = next_frontier
        level += 1
    return (best.branch if best is not None else None), stats


def _reject_target_in_lattice(lattice: PAdicLattice, target: QVector) -> None:
    coords = coordinates_in_span(lattice.basis, target)
    if coords is not None and all(
        valuation(c, lattice.p) >= 0 for c in coords
    ):
        raise TargetInLattice("target lies in the lattice")


def _check_solver_inputs(
    norm: WeightedCoordinateNorm, lattice: PAdicLattice, target: QVector
) -> QVector:
    if norm.p != lattice.p:
        raise InvalidParameters("norm and lattice disagree on the prime")
    if norm.dimension != lattice.dimension:
        raise DimensionMismatch("norm and lattice dimensions differ")
    target = vector(target)
    if len(target) != lattice.dimension:
        raise DimensionMismatch("target has the wrong length")
    return target


def solve_cvp(
    norm: WeightedCoordinateNorm,
    lattice: PAdicLattice,
    target: QVector,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    stats: Optional[SearchStats] = None,
) -> CVPResult:
    """Exact closest-vector solve: minimize N(target - w) over w in L.

    Branch and bound over digit prefixes; frozen branches that cannot beat
    the best known minimum are pruned.  Ties are broken by the
    lexicographically smallest digit string (level-major, coefficient-index
    minor), so identical inputs give identical representatives.
    """
    target = _check_solver_inputs(norm, lattice, target)
    _reject_target_in_lattice(lattice, target)
    branch, run_stats = _search(
        (norm,),
        lattice.basis,
        target,
        sign=-1,
        max_level=max_level,
        objective=lambda exps: -exps[0],
    )
    if stats is not None:
        stats.merge(run_stats)
    w0 = vec_sub(target, branch.residual)
    return CVPResult(
        w0=w0,
        coefficients=branch.coeffs,
        level=len(branch.digits),
        distance=branch.exps[0],
        nodes_explored=run_stats.nodes_explored,
        norm_evaluations=run_stats.norm_evaluations,
    )


def coset_norm_values(
    norm: WeightedCoordinateNorm,
    lattice: PAdicLattice,
    target: QVector,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    extra_levels: int = 0,
    stats: Optional[SearchStats] = None,
) -> CosetValueTable:
    """All norm values on the coset target + L, each with a representative.

    Runs the digit search without value-based pruning until every branch
    freezes; the distinct frozen exponents are exactly the finite value set.
    Representatives are the coset elements of the lexicographically smallest
    branch per value, so the table is reproducible and stable under forced
    extra refinement levels (`extra_levels`).
    """
    target = _check_solver_inputs(norm, lattice, target)
    _reject_target_in_lattice(lattice, target)
    frozen: list[_Branch] = []
    _, run_stats = _search(
        (norm,),
        lattice.basis,
        target,
        sign=-1,
        max_level=max_level,
        extra_levels=extra_levels,
        collect=frozen,
    )
    if stats is not None:
        stats.merge(run_stats)
    table: dict[Fraction, _Branch] = {}
    for br in frozen:
        w = br.exps[0]
        cur = table.get(w)
        if cur is None or br.digits < cur.digits:
            table[w] = br
    entries = tuple(
        CosetEntry(exponent=w, representative=table[w].residual)
        for w in sorted(table)
    )
    return CosetValueTable(
        entries=entries,
        terminal_level=run_stats.terminal_level,
        nodes_explored=run_stats.nodes_explored,
        norm_evaluations=run_stats.norm_evaluations,
    )


def maximize_norm_ratio(
    pair: NormPair,
    basis: Sequence[QVector],
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
    stats: Optional[SearchStats] = None,
) -> QVector:
    """A nonzero v maximizing N(v)/N'(v), i.e. minimizing w_N(v) - w_N'(v).

    The ratio is scale-invariant, so after normalizing the basis under N
    every candidate can be written as u_j plus a Z_p-combination of the
    other basis vectors.  Each of these n cosets is refined until branches
    freeze under BOTH norms; the winner minimizes the exponent difference,
    with ties broken by smaller j, then lexicographic digits.
    """
    basis = tuple(vector(b) for b in basis)
    if not basis:
        raise InvalidParameters("empty basis")
    if any(len(b) != pair.first.dimension for b in basis):
        raise DimensionMismatch("basis vectors do not match the norms")
    if not is_independent(basis):
        raise DependentBasis("basis is linearly dependent")
    normalized = tuple(normalize_vector(pair.first, u)[0] for u in basis)
    if len(normalized) == 1:
        return normalized[0]
    norms = (pair.first, pair.second)
    best_key = None
    best_vec = None
    for j, u_j in enumerate(normalized):
        others = normalized[:j] + normalized[j + 1 :]
        branch, run_stats = _search(
            norms,
            others,
            u_j,
            sign=+1,
            max_level=max_level,
            objective=lambda exps: exps[0] - exps[1],
        )
        if stats is not None:
            stats.merge(run_stats)
        key = (branch.exps[0] - branch.exps[1], j, branch.digits)
        if best_key is None or key < best_key:
            best_key = key
            best_vec = branch.residual
    return best_vec


def solve_lvp(
    norm: WeightedCoordinateNorm,
    lattice: PAdicLattice,
    *,
    samples: int = 32,
    sample_depth: int = 4,
    seed: int = 0,
) -> QVector:
    """A lattice vector of maximal norm.

    The ultrametric inequality bounds every Z_p-combination by the largest
    basis-vector norm, so the maximum is attained at a basis vector (lowest
    index on ties).  The bound is re-verified on sampled integer
    combinations as a cheap self-check of the norm object.
    """
    if norm.p != lattice.p:
        raise InvalidParameters("norm and lattice disagree on the prime")
    if norm.dimension != lattice.dimension:
        raise DimensionMismatch("norm and lattice dimensions differ")
    exps = [norm.exponent(b) for b in lattice.basis]
    best_idx = min(range(len(exps)), key=lambda i: (exps[i], i))
    bound = exps[best_idx]
    rng = random.Random(seed)
    p, depth = lattice.p, sample_depth
    for _ in range(samples):
        coeffs = [rng.randrange(p**depth) for _ in lattice.basis]
        v = tuple(
            sum(c * b[i] for c, b in zip(coeffs, lattice.basis))
            for i in range(lattice.dimension)
        )
        if not all(x == 0 for x in v) and norm.exponent(v) < bound:
            raise PadicOrthoError(
                "ultrametric bound violated; the norm object is inconsistent"
            )
    return lattice.basis[best_idx]
