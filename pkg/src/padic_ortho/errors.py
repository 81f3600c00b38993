"""Exception hierarchy shared by every module."""


class PadicOrthoError(Exception):
    """Base class for all library errors."""


class InvalidParameters(PadicOrthoError):
    """Malformed configuration: non-prime p, bad weights, bad generator args."""


class DimensionMismatch(PadicOrthoError):
    """Vector or matrix dimensions do not agree."""


class SingularMatrix(PadicOrthoError):
    """Matrix has determinant zero where an invertible one is required."""


class NotFullRank(PadicOrthoError):
    """A full-rank basis was required but fewer independent vectors were given."""


class ZeroVector(PadicOrthoError):
    """The zero vector is not admissible here."""


class DependentInput(PadicOrthoError):
    """Input vectors are linearly dependent."""


class DependentBasis(DependentInput):
    """A claimed basis is linearly dependent."""


class NotNormalized(PadicOrthoError):
    """A vector violates the required norm-exponent window [0, 1)."""


class TargetInLattice(PadicOrthoError):
    """CVP target lies in the lattice; the distance would be zero."""


class ResourceExhausted(PadicOrthoError):
    """Digit refinement hit the level cap; valid inputs terminate far earlier."""
