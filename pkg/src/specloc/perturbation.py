"""Perturbation tolerances: when does the spectrum of A + B stay put?

For the four ellipse/parabola regions, a Hermitian operator inequality in
the perturbation B decides preservation of the localization; for the two
ellipse regions a closed-form norm radius is available as well. The
half-plane and unit-disk regions have no perturbation formulation here.
"""

from dataclasses import dataclass

import numpy as np

from . import eigen, linalg, lyapunov, regions
from .errors import (DimensionMismatch, HNotPositiveDefinite,
                     InvalidRegionParams, NotHermitian, UnsupportedRegion)

LESS_THAN_I = "less_than_I"
GREATER_THAN_MINUS_I = "greater_than_minus_I"


@dataclass
class ConditionMatrix:
    """Left-hand side of a perturbation inequality, Hermitian by construction.

    ``threshold_side`` says which inequality applies: the spectrum stays
    localized when M < I (``less_than_I``) or when M > -I
    (``greater_than_minus_I``).
    """

    m: np.ndarray
    kind: str
    threshold_side: str


@dataclass
class PerturbationReport:
    """Outcome of a perturbation check.

    ``condition_holds`` is the operator-inequality test; ``margin`` is the
    distance of the extreme eigenvalue of M from its threshold (via the
    eigenvalue oracle); ``radius`` carries the closed-form norm bound for
    ellipse regions and is None for parabolas. ``verdict`` equals
    ``condition_holds``.
    """

    condition_holds: bool
    margin: float
    radius: float | None
    b_norm: float
    verdict: bool


def _square_triple(a, b, h):
    a = linalg.as_matrix(a)
    b = linalg.as_matrix(b)
    h = linalg.as_matrix(h)
    n = a.shape[0]
    for name, m in (("A", a), ("B", b), ("H", h)):
        if m.shape != (n, n):
            raise DimensionMismatch(f"{name} must be {n}x{n}, got {m.shape}")
    return a, b, h


def condition_matrix(region, a, b, h):
    """Assemble the Hermitian operator of the matching perturbation inequality.

    Ellipse regions (interior tested against < I, exterior against > -I):

        (1/(2a^2) + 1/(2b^2)) (B*HA + A*HB + B*HB)
        + (1/(4a^2) - 1/(4b^2)) (H(AB + BA + B^2) + (AB + BA + B^2)* H)

    Parabola regions (interior tested against > -I, exterior against < I):

        HB + B*H - 1/(2p) (A*HB + B*HA + B*HB)
        + 1/(4p) (H(AB + BA + B^2) + (AB + BA + B^2)* H)
    """
    a, b, h = _square_triple(a, b, h)
    bh = b.conj().T
    ah = a.conj().T
    k = a @ b + b @ a + b @ b
    sym_k = h @ k + k.conj().T @ h
    if isinstance(region, (regions.EllipseInterior, regions.EllipseExterior)):
        a2, b2 = region.a ** 2, region.b ** 2
        c1 = 1.0 / (2 * a2) + 1.0 / (2 * b2)
        c2 = 1.0 / (4 * a2) - 1.0 / (4 * b2)
        m = c1 * (bh @ h @ a + ah @ h @ b + bh @ h @ b) + c2 * sym_k
        if isinstance(region, regions.EllipseInterior):
            return ConditionMatrix(m, "ellipse_interior", LESS_THAN_I)
        return ConditionMatrix(m, "ellipse_exterior", GREATER_THAN_MINUS_I)
    if isinstance(region, (regions.ParabolaInterior, regions.ParabolaExterior)):
        p = region.p
        m = (h @ b + bh @ h
             - (ah @ h @ b + bh @ h @ a + bh @ h @ b) / (2 * p)
             + sym_k / (4 * p))
        if isinstance(region, regions.ParabolaInterior):
            return ConditionMatrix(m, "parabola_interior", GREATER_THAN_MINUS_I)
        return ConditionMatrix(m, "parabola_exterior", LESS_THAN_I)
    raise UnsupportedRegion(
        f"no perturbation condition for region kind {type(region).__name__}")


def check_perturbation(region, a, b, h):
    """Decide the perturbation inequality for (region, A, B, H).

    ``h`` must be the certificate solution for (region, A) with C = I.
    The inequality M < I (resp. M > -I) is decided by a Cholesky test on
    I - M (resp. M + I); the margin is recomputed independently from the
    eigenvalue oracle.
    """
    cm = condition_matrix(region, a, b, h)
    n = cm.m.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    test = eye - cm.m if cm.threshold_side == LESS_THAN_I else cm.m + eye
    condition_holds = bool(linalg.cholesky_posdef(test))
    real_eigs = eigen.eig(cm.m).eigenvalues.real
    if cm.threshold_side == LESS_THAN_I:
        margin = float(1.0 - real_eigs.max())
    else:
        margin = float(real_eigs.min() + 1.0)
    radius = None
    if isinstance(region, regions.EllipseInterior):
        radius = radius_ellipse_interior(a, h, region.a, region.b)
    elif isinstance(region, regions.EllipseExterior):
        radius = radius_ellipse_exterior(a, h, region.a, region.b)
    return PerturbationReport(condition_holds=condition_holds, margin=margin,
                              radius=radius,
                              b_norm=linalg.spectral_norm(b),
                              verdict=condition_holds)


def _require_posdef(h):
    try:
        if not linalg.cholesky_posdef(h):
            raise HNotPositiveDefinite("H is not positive definite")
    except NotHermitian as exc:
        raise HNotPositiveDefinite(f"H is not Hermitian: {exc}") from exc


def radius_ellipse_interior(a, h, semi_a, semi_b):
    """Norm radius preserving an ellipse-interior localization.

    rho = sqrt(||A||^2 + b^2/||H||) - ||A||, spectral norms throughout;
    any B with ||B|| < rho keeps the spectrum of A + B inside the ellipse.
    """
    if not semi_a > semi_b > 0:
        raise InvalidRegionParams(f"need a > b > 0, got a={semi_a}, b={semi_b}")
    a = linalg.as_matrix(a)
    _require_posdef(h)
    na = linalg.spectral_norm(a)
    nh = linalg.spectral_norm(h)
    return float(np.sqrt(na ** 2 + semi_b ** 2 / nh) - na)


def radius_ellipse_exterior(a, h, semi_a, semi_b):
    """Norm radius preserving an ellipse-exterior localization.

    rho = 2a^2/(a^2 - b^2) * (sqrt(||A||^2 + (a^2 - b^2)/(2a^2) * b^2/||H||)
    - ||A||) with spectral norms.
    """
    if not semi_a > semi_b > 0:
        raise InvalidRegionParams(f"need a > b > 0, got a={semi_a}, b={semi_b}")
    a = linalg.as_matrix(a)
    _require_posdef(h)
    na = linalg.spectral_norm(a)
    nh = linalg.spectral_norm(h)
    ratio = (semi_a ** 2 - semi_b ** 2) / (2 * semi_a ** 2)
    return float((np.sqrt(na ** 2 + ratio * semi_b ** 2 / nh) - na) / ratio)


def perturbed_solvability(region, a, b, c=None):
    """Solve the region equation with A replaced by A + B.

    Callers are expected to have passed the matching perturbation check
    first; a SingularSystem here contradicts the solvability guarantee and
    is a contract violation, not an accepted outcome.
    """
    a = linalg.as_matrix(a)
    b = linalg.as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"A and B must be square and equal, got {a.shape}, {b.shape}")
    if c is None:
        c = np.eye(a.shape[0], dtype=np.complex128)
    else:
        c = linalg.as_matrix(c)
        if c.shape != a.shape:
            raise DimensionMismatch(f"C must match A, got {c.shape}")
    apb = a + b
    form = regions.region_form(region)
    return lyapunov.solve_kron(form, linalg.adjoint(apb), apb, form.rhs_sign * c)
