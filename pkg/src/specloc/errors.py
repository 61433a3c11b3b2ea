"""Exception hierarchy shared by all specloc modules."""


class SpeclocError(Exception):
    """Base class for all errors raised by specloc."""


class DimensionMismatch(SpeclocError):
    """Operands have incompatible shapes."""


class SingularMatrix(SpeclocError):
    """LU elimination hit a pivot below the singularity threshold."""

    def __init__(self, message, pivot_index=None, pivot_value=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value


class NotHermitian(SpeclocError):
    """Matrix failed the Hermitian check required by the operation."""

    def __init__(self, message, asymmetry=None):
        super().__init__(message)
        self.asymmetry = asymmetry


class NoConvergence(SpeclocError):
    """Eigenvalue iteration exceeded its sweep budget."""


class NotAnEigenvalue(SpeclocError):
    """Inverse iteration could not drive the eigenpair residual below tolerance."""


class SingularSystem(SpeclocError):
    """The vectorized equation matrix is singular (symbol vanishes on a spectrum pair)."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class KreinConditionViolated(SpeclocError):
    """Some spectrum pair annihilates the symbol polynomial within tolerance."""

    def __init__(self, message, pairs=None):
        super().__init__(message)
        # list of (s, r, abs_symbol) triples below tolerance
        self.pairs = pairs or []


class InvalidContour(SpeclocError):
    """Contour circle does not strictly enclose the target spectrum."""


class ContourTooClose(SpeclocError):
    """A quadrature node is numerically singular or the symbol nearly vanishes on the grid."""


class InvalidRegionParams(SpeclocError):
    """Region parameters violate their constraints (need a > b > 0 or p > 0)."""


class UnsupportedRegion(SpeclocError):
    """The requested operation has no formulation for this region kind."""


class CNotPositiveDefinite(SpeclocError):
    """Right-hand side C is not Hermitian positive definite."""


class HNotPositiveDefinite(SpeclocError):
    """Supplied H is not Hermitian positive definite."""
