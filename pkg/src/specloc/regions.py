"""Spectral target regions and localization certificates.

Six regions are supported: the open left half-plane, the open unit disk,
the open interior/exterior of an ellipse (semi-axes a > b > 0), and the
open interior/exterior of a parabola (Im z)^2 = 2p Re z. Each maps to a
Lyapunov-type equation whose Hermitian positive definite solvability
characterizes (half-plane, disk, interiors) or implies (exteriors)
spectrum membership; see :func:`certificate_direction`.
"""

from dataclasses import dataclass

import numpy as np

from . import eigen, linalg, lyapunov
from .errors import (CNotPositiveDefinite, DimensionMismatch,
                     InvalidRegionParams, NotHermitian)

CERT_TOL = 1e-9  # residual ceiling for a clean certificate


@dataclass(frozen=True)
class HalfPlaneLeft:
    """Open left half-plane Re z < 0."""


@dataclass(frozen=True)
class UnitDisk:
    """Open unit disk |z| < 1."""


def _check_ellipse(a, b):
    if not (np.isfinite(a) and np.isfinite(b) and a > b > 0):
        raise InvalidRegionParams(f"ellipse needs a > b > 0, got a={a}, b={b}")


def _check_parabola(p):
    if not (np.isfinite(p) and p > 0):
        raise InvalidRegionParams(f"parabola needs p > 0, got p={p}")


@dataclass(frozen=True)
class EllipseInterior:
    """Open interior of (Re z)^2/a^2 + (Im z)^2/b^2 = 1 with a > b > 0."""

    a: float
    b: float

    def __post_init__(self):
        _check_ellipse(self.a, self.b)


@dataclass(frozen=True)
class EllipseExterior:
    """Open exterior of the same ellipse."""

    a: float
    b: float

    def __post_init__(self):
        _check_ellipse(self.a, self.b)


@dataclass(frozen=True)
class ParabolaInterior:
    """Open set (Im z)^2 < 2p Re z with p > 0."""

    p: float

    def __post_init__(self):
        _check_parabola(self.p)


@dataclass(frozen=True)
class ParabolaExterior:
    """Open set (Im z)^2 > 2p Re z with p > 0."""

    p: float

    def __post_init__(self):
        _check_parabola(self.p)


REGION_KINDS = {
    "halfplane": HalfPlaneLeft,
    "disk": UnitDisk,
    "ellipse-in": EllipseInterior,
    "ellipse-out": EllipseExterior,
    "parabola-in": ParabolaInterior,
    "parabola-out": ParabolaExterior,
}


def make_region(kind, a=None, b=None, p=None):
    """Build a region from its string kind plus whichever parameters apply."""
    if kind in ("halfplane", "disk"):
        return REGION_KINDS[kind]()
    if kind in ("ellipse-in", "ellipse-out"):
        if a is None or b is None:
            raise InvalidRegionParams(f"region {kind!r} needs both --a and --b")
        return REGION_KINDS[kind](float(a), float(b))
    if kind in ("parabola-in", "parabola-out"):
        if p is None:
            raise InvalidRegionParams(f"region {kind!r} needs --p")
        return REGION_KINDS[kind](float(p))
    raise InvalidRegionParams(f"unknown region kind {kind!r}")


def region_kind(region):
    """Inverse of :func:`make_region`: the string kind of a region value."""
    for kind, cls in REGION_KINDS.items():
        if isinstance(region, cls):
            return kind
    raise InvalidRegionParams(f"not a region: {region!r}")


def region_margin(region, lam):
    """Signed margin of ``lam``: positive strictly inside, negative outside.

    Measured in the units of the region's defining inequality (so zero
    exactly on the boundary curve), not Euclidean distance.
    """
    lam = complex(lam)
    x, y = lam.real, lam.imag
    if isinstance(region, HalfPlaneLeft):
        return -x
    if isinstance(region, UnitDisk):
        return 1.0 - (x * x + y * y)
    if isinstance(region, EllipseInterior):
        return 1.0 - (x * x / region.a ** 2 + y * y / region.b ** 2)
    if isinstance(region, EllipseExterior):
        return (x * x / region.a ** 2 + y * y / region.b ** 2) - 1.0
    if isinstance(region, ParabolaInterior):
        return 2.0 * region.p * x - y * y
    if isinstance(region, ParabolaExterior):
        return y * y - 2.0 * region.p * x
    raise InvalidRegionParams(f"not a region: {region!r}")


def contains(region, lam):
    """Strict membership; boundary points belong to neither side."""
    return region_margin(region, lam) > 0.0


def region_form(region):
    """The Lyapunov-type equation attached to a region.

    Coefficient grids (zero entries omitted), with B = A* understood:

    ============== ===========================================================
    half-plane     a01 = a10 = 1; right-hand side -C
    unit disk      a00 = 1, a11 = -1; right-hand side +C
    ellipse int.   a00 = 1, a11 = -(1/(2a^2) + 1/(2b^2)),
                   a02 = a20 = -(1/(4a^2) - 1/(4b^2)); right-hand side +C
    ellipse ext.   same grid; right-hand side -C
    parabola int.  a01 = a10 = 1, a11 = -1/(2p), a02 = a20 = 1/(4p); +C
    parabola ext.  same grid; right-hand side -C
    ============== ===========================================================
    """
    if isinstance(region, HalfPlaneLeft):
        c = np.zeros((2, 2))
        c[0, 1] = c[1, 0] = 1.0
        return lyapunov.LyapunovForm(c, rhs_sign=-1)
    if isinstance(region, UnitDisk):
        c = np.zeros((2, 2))
        c[0, 0] = 1.0
        c[1, 1] = -1.0
        return lyapunov.LyapunovForm(c, rhs_sign=+1)
    if isinstance(region, (EllipseInterior, EllipseExterior)):
        a2, b2 = region.a ** 2, region.b ** 2
        c = np.zeros((3, 3))
        c[0, 0] = 1.0
        c[1, 1] = -(1.0 / (2 * a2) + 1.0 / (2 * b2))
        c[0, 2] = c[2, 0] = -(1.0 / (4 * a2) - 1.0 / (4 * b2))
        sign = +1 if isinstance(region, EllipseInterior) else -1
        return lyapunov.LyapunovForm(c, rhs_sign=sign)
    if isinstance(region, (ParabolaInterior, ParabolaExterior)):
        c = np.zeros((3, 3))
        c[0, 1] = c[1, 0] = 1.0
        c[1, 1] = -1.0 / (2 * region.p)
        c[0, 2] = c[2, 0] = 1.0 / (4 * region.p)
        sign = +1 if isinstance(region, ParabolaInterior) else -1
        return lyapunov.LyapunovForm(c, rhs_sign=sign)
    raise InvalidRegionParams(f"not a region: {region!r}")


def certificate_direction(region):
    """Whether the certificate characterizes membership or only implies it.

    The half-plane, disk, and the two interior regions are 'iff': with
    C = I, a Hermitian positive definite solution exists exactly when the
    spectrum is inside. The two exterior regions are 'sufficient_only':
    a definite solution still proves membership, but non-normal matrices
    with in-region spectra can make the C = I solution indefinite, so a
    failed certificate proves nothing there (an explicit counterexample
    lives in the test suite).
    """
    if isinstance(region, (EllipseExterior, ParabolaExterior)):
        return "sufficient_only"
    return "iff"


@dataclass
class MembershipReport:
    """Oracle-side membership of a whole spectrum."""

    inside: bool
    margin: float
    eigenvalues: np.ndarray

    def __bool__(self):
        return self.inside


@dataclass
class Certificate:
    """A solved H together with its definiteness evidence.

    ``verdict`` is the certificate claim: Hermitian positive definite H
    with residual at most the certification tolerance. ``direction``
    records whether the claim characterizes membership ('iff') or only
    implies it ('sufficient_only'). Oracle fields are filled when the
    cross-check was requested.
    """

    region: object
    h: np.ndarray
    residual: float
    posdef: bool
    min_pivot: float
    verdict: bool
    direction: str
    condition_estimate: float
    oracle_inside: bool | None = None
    oracle_margin: float | None = None
    oracle_agrees: bool | None = None
    oracle_eigenvalues: np.ndarray | None = None


def spectrum_in_region(region, a):
    """Oracle membership: every eigenvalue of ``a`` strictly inside ``region``."""
    spectrum = eigen.eig(a)
    margins = [region_margin(region, lam) for lam in spectrum.eigenvalues]
    margin = float(min(margins))
    return MembershipReport(inside=margin > 0.0, margin=margin,
                            eigenvalues=spectrum.eigenvalues)


def certify(region, a, c=None, cert_tol=CERT_TOL, check_oracle=False):
    """Solve the region's equation and test H for positive definiteness.

    With the region's form, B = A*, and right-hand side ``rhs_sign * C``
    (default C = I), a Hermitian positive definite solution is the
    membership certificate. ``check_oracle`` additionally runs the
    eigenvalue oracle and records whether it agrees with the verdict.

    Raises
    ------
    CNotPositiveDefinite
        If C is not Hermitian positive definite.
    SingularSystem
        If the spectrum touches the region's critical curve, making the
        vectorized system singular.
    """
    a = linalg.as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"A must be square, got {a.shape}")
    n = a.shape[0]
    if c is None:
        c = np.eye(n, dtype=np.complex128)
    else:
        c = linalg.as_matrix(c)
        if c.shape != a.shape:
            raise DimensionMismatch(f"C must match A, got {c.shape} vs {a.shape}")
        try:
            if not linalg.cholesky_posdef(c):
                raise CNotPositiveDefinite("C is not positive definite")
        except NotHermitian as exc:
            raise CNotPositiveDefinite(f"C is not Hermitian: {exc}") from exc

    form = region_form(region)
    report = lyapunov.solve_kron(form, linalg.adjoint(a), a, form.rhs_sign * c)
    chol = linalg.cholesky_posdef(report.h)
    posdef = chol.positive_definite
    verdict = bool(posdef and report.residual <= cert_tol)
    direction = certificate_direction(region)

    oracle_inside = oracle_margin = oracle_agrees = oracle_eigs = None
    if check_oracle:
        membership = spectrum_in_region(region, a)
        oracle_inside = membership.inside
        oracle_margin = membership.margin
        oracle_eigs = membership.eigenvalues
        if direction == "iff":
            oracle_agrees = verdict == membership.inside
        else:
            # sufficient direction only: a positive certificate must not
            # contradict the oracle; a negative one claims nothing
            oracle_agrees = (not verdict) or membership.inside

    return Certificate(region=region, h=report.h, residual=report.residual,
                       posdef=posdef, min_pivot=chol.min_pivot, verdict=verdict,
                       direction=direction,
                       condition_estimate=report.condition_estimate,
                       oracle_inside=oracle_inside, oracle_margin=oracle_margin,
                       oracle_agrees=oracle_agrees, oracle_eigenvalues=oracle_eigs)
