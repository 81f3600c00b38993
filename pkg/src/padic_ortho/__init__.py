"""Norm-orthogonal bases in p-adic vector spaces and lattices.

Exact-arithmetic algorithms built on a branch-and-bound closest-vector
solver for ultrametric norms: single-norm orthogonalization, simultaneous
two-norm orthogonalization, and rank-2 lattice orthogonalization, with
independent brute-force oracles and a deterministic instance generator.
"""

from .errors import (
    DependentBasis,
    DependentInput,
    DimensionMismatch,
    InvalidParameters,
    NotFullRank,
    NotNormalized,
    PadicOrthoError,
    ResourceExhausted,
    SingularMatrix,
    TargetInLattice,
    ZeroVector,
)
from .lattices import (
    DEFAULT_MAX_LEVEL,
    CosetEntry,
    CosetValueTable,
    CVPResult,
    PAdicLattice,
    SearchStats,
    coset_norm_values,
    maximize_norm_ratio,
    solve_cvp,
    solve_lvp,
)
from .linalg import (
    INF,
    Exponent,
    ExtInt,
    Infinity,
    QMatrix,
    QVector,
    det,
    identity,
    invert,
    is_prime,
    matrix,
    solve,
    valuation,
    vector,
)
from .norms import (
    MAX_WEIGHT_DENOMINATOR,
    NormPair,
    WeightedCoordinateNorm,
    format_exponent,
    lattice_induced_norm,
    normalize_vector,
)
from .oracle import (
    Instance,
    check_orthogonal_determinant,
    exhaustive_cvp,
    generate_instance,
    generate_instances,
)
from .ortho import (
    OrthogonalBasisReport,
    OrthogonalityWitness,
    check_orthogonal_sampled,
    find_orthogonal_hyperplane,
    find_orthogonal_vector,
    orthogonalize,
    orthogonalize_rank2_lattice,
    orthogonalize_simultaneous,
)

__version__ = "0.1.0"
