"""Generalized Lyapunov-type matrix equations sum_jk a_jk B^j H A^k = Y.

Two independent solution routes are provided: Kronecker vectorization
(:func:`solve_kron`) and a double contour integral over resolvents
(:func:`solve_contour`). Both recompute their residual through
:func:`residual`, which never reuses solver internals.
"""

from dataclasses import dataclass, field

import numpy as np

from . import eigen, linalg
from .errors import (ContourTooClose, DimensionMismatch, InvalidContour,
                     KreinConditionViolated, SingularMatrix, SingularSystem)

MAX_ORDER = 8
KREIN_TOL_BASE = 1e-8
DEFAULT_QUADRATURE_POINTS = 64


@dataclass(frozen=True, eq=False)
class LyapunovForm:
    """Coefficient grid a_jk plus the sign of the right-hand side.

    ``coeffs[j, k]`` multiplies B^j H A^k; the grid is (N+1) x (N+1) for an
    order-N equation. ``rhs_sign`` records whether the region workflows use
    Y = +C or Y = -C; raw solves against an explicit Y ignore it.
    """

    coeffs: np.ndarray
    rhs_sign: int = 1

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionMismatch(f"coefficient grid must be square, got {c.shape}")
        if c.shape[0] > MAX_ORDER + 1:
            raise ValueError(f"order {c.shape[0] - 1} exceeds supported maximum {MAX_ORDER}")
        if not np.any(c != 0):
            raise ValueError("coefficient grid must have at least one nonzero entry")
        if self.rhs_sign not in (+1, -1):
            raise ValueError("rhs_sign must be +1 or -1")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def real_symmetric(self):
        """True when the grid is real with a_jk = a_kj (region-derived forms)."""
        c = self.coeffs
        return bool(np.all(c.imag == 0.0) and np.allclose(c, c.T, rtol=0, atol=0))


@dataclass(frozen=True)
class ContourConfig:
    """Circle center/radius plus the trapezoidal node count for one contour."""

    center: complex
    radius: float
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS

    def __post_init__(self):
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError(f"contour radius must be positive, got {self.radius}")
        if self.quadrature_points < 16:
            raise ValueError("need at least 16 quadrature points")


@dataclass
class KreinVerdict:
    """Outcome of the solvability check over all spectrum pairs."""

    ok: bool
    min_abs_symbol: float
    tol: float
    offending: list = field(default_factory=list)  # (s, r, |P(lambda_s, mu_r)|)

    def __bool__(self):
        return self.ok


@dataclass
class SolveReport:
    """Solution H with independently recomputed diagnostics."""

    h: np.ndarray
    residual: float
    hermitized: bool
    asymmetry_dropped: float
    condition_estimate: float


def symbol_eval(form, lam, mu):
    """Evaluate P(lam, mu) = sum_jk a_jk lam^j mu^k by nested Horner.

    ``lam`` and ``mu`` may be scalars or broadcastable arrays.
    """
    c = form.coeffs
    lam = np.asarray(lam, dtype=np.complex128)
    mu = np.asarray(mu, dtype=np.complex128)
    rows = []
    for j in range(c.shape[0]):
        qj = np.zeros(np.broadcast(lam, mu).shape, dtype=np.complex128) + c[j, -1]
        for k in range(c.shape[1] - 2, -1, -1):
            qj = qj * mu + c[j, k]
        rows.append(qj)
    p = rows[-1]
    for j in range(len(rows) - 2, -1, -1):
        p = p * lam + rows[j]
    if p.ndim == 0:
        return complex(p)
    return p


def krein_tolerance(form, spectra_bound):
    """Scale-aware zero threshold for the symbol polynomial."""
    amax = float(np.abs(form.coeffs).max())
    r = float(spectra_bound)
    return KREIN_TOL_BASE * max(1.0, amax * r ** (2 * form.order))


def krein_condition(form, spec_b, spec_a, krein_tol=None):
    """Check P(lambda_s, mu_r) != 0 over all pairs of the two spectra.

    ``spec_b`` and ``spec_a`` are :class:`~specloc.eigen.Spectrum` objects
    (or plain eigenvalue arrays). Degenerate closeness yields a falsy
    verdict listing the offending pairs, never an exception.
    """
    lam = np.asarray(getattr(spec_b, "eigenvalues", spec_b), dtype=np.complex128)
    mu = np.asarray(getattr(spec_a, "eigenvalues", spec_a), dtype=np.complex128)
    if krein_tol is None:
        bound = max(float(np.abs(lam).max()), float(np.abs(mu).max()))
        krein_tol = krein_tolerance(form, bound)
    p = symbol_eval(form, lam.reshape(-1, 1), mu.reshape(1, -1))
    absp = np.abs(np.atleast_2d(p))
    offending = [(int(s), int(r), float(absp[s, r]))
                 for s, r in zip(*np.where(absp <= krein_tol))]
    return KreinVerdict(ok=not offending,
                        min_abs_symbol=float(absp.min()),
                        tol=float(krein_tol),
                        offending=offending)


def _check_dims(b, a, y):
    b = linalg.as_matrix(b)
    a = linalg.as_matrix(a)
    y = linalg.as_matrix(y)
    if b.shape[0] != b.shape[1] or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("A and B must be square")
    if y.shape != (b.shape[0], a.shape[0]):
        raise DimensionMismatch(
            f"Y must be {b.shape[0]}x{a.shape[0]} to match B and A, got {y.shape}")
    return b, a, y


def _matrix_powers(m, order):
    powers = [np.eye(m.shape[0], dtype=np.complex128)]
    for _ in range(order):
        powers.append(linalg.mat_mul(powers[-1], m))
    return powers


def _hermitian_compatible(form, b, a, y):
    if b.shape != a.shape or not form.real_symmetric:
        return False
    atol = 1e-12 * max(1.0, float(np.abs(a).max()), float(np.abs(y).max()))
    return (np.allclose(b, a.conj().T, rtol=0, atol=atol)
            and np.allclose(y, y.conj().T, rtol=0, atol=atol))


def _finalize(form, b, a, y, h, condition_estimate):
    hermitized = False
    asymmetry_dropped = 0.0
    if _hermitian_compatible(form, b, a, y):
        hsym = 0.5 * (h + h.conj().T)
        asymmetry_dropped = linalg.spectral_norm(h - hsym)
        h = hsym
        hermitized = True
    return SolveReport(h=h,
                       residual=residual(form, b, a, h, y),
                       hermitized=hermitized,
                       asymmetry_dropped=asymmetry_dropped,
                       condition_estimate=float(condition_estimate))


def solve_kron(form, b, a, y):
    """Solve the equation by vectorization to a single mn x mn linear system.

    Column-stacking vec gives vec(B^j H A^k) = ((A^k)^T kron B^j) vec(H).
    When B = A*, Y is Hermitian, and the grid is real-symmetric, the
    solution is symmetrized and the dropped asymmetry recorded (uniqueness
    forces the exact solution to be Hermitian in that case).

    Raises
    ------
    SingularSystem
        On pivot failure, which signals a (near-)violated solvability
        condition: some spectrum pair annihilates the symbol.
    """
    b, a, y = _check_dims(b, a, y)
    apow = _matrix_powers(a, form.order)
    bpow = _matrix_powers(b, form.order)
    mn = b.shape[0] * a.shape[0]
    big = np.zeros((mn, mn), dtype=np.complex128)
    c = form.coeffs
    for j in range(form.order + 1):
        for k in range(form.order + 1):
            if c[j, k] != 0:
                big += c[j, k] * np.kron(apow[k].T, bpow[j])
    try:
        factors = linalg.lu_factor(big)
    except SingularMatrix as exc:
        raise SingularSystem(
            f"vectorized system is singular ({exc}); the symbol vanishes on "
            "a spectrum pair or comes numerically close",
            pivot_index=exc.pivot_index) from exc
    x = factors.solve(y.reshape(-1, order="F"))
    h = x.reshape(y.shape, order="F")
    return _finalize(form, b, a, y, h, factors.condition_estimate())


def default_contour(m, quadrature_points=DEFAULT_QUADRATURE_POINTS):
    """Circle enclosing the oracle spectrum of ``m`` with a 25% margin.

    Centered at the Gershgorin-disc centroid (mean of the diagonal); the
    radius is floored so single-point spectra still get a valid circle.
    """
    m = linalg.as_matrix(m)
    center = complex(np.trace(m) / m.shape[0])
    spectrum = eigen.eig(m)
    maxdist = float(np.abs(spectrum.eigenvalues - center).max())
    radius = max(1.25 * maxdist, 0.25 * (1.0 + abs(center)))
    return ContourConfig(center=center, radius=radius,
                         quadrature_points=quadrature_points)


def solve_contour(form, b, a, y, cfg_b, cfg_a):
    """Solve via the double resolvent contour integral.

    H = (2 pi i)^-2 * oint oint P(lam, mu)^-1 (lam I - B)^-1 Y (mu I - A)^-1
    dlam dmu over circles enclosing the spectra of B and A, discretized by
    the trapezoidal rule. Node resolvents are computed by LU solves; the
    double sum is contracted in a fixed order, so the result is
    deterministic for a given node count.

    The node grid check cannot see symbol zeros lying strictly between the
    spectra and the contours; those break the representation silently, so
    this route is meant for cross-validation against :func:`solve_kron`
    unless the contours are known to stay inside a zero-free neighborhood.

    Raises
    ------
    InvalidContour
        If a circle does not strictly enclose its spectrum (oracle-checked).
    KreinConditionViolated
        If some spectrum pair annihilates the symbol.
    ContourTooClose
        If a node resolvent is numerically singular or the symbol nearly
        vanishes on the node grid.
    """
    b, a, y = _check_dims(b, a, y)
    spec_b = eigen.eig(b)
    spec_a = eigen.eig(a)
    for cfg, spec, name in ((cfg_b, spec_b, "B"), (cfg_a, spec_a, "A")):
        maxdist = float(np.abs(spec.eigenvalues - cfg.center).max())
        if maxdist >= cfg.radius:
            raise InvalidContour(
                f"contour for {name} has radius {cfg.radius:.6g} but an eigenvalue "
                f"lies {maxdist:.6g} from its center")
    verdict = krein_condition(form, spec_b, spec_a)
    if not verdict.ok:
        raise KreinConditionViolated(
            f"{len(verdict.offending)} spectrum pair(s) annihilate the symbol",
            pairs=verdict.offending)

    qb, qa = cfg_b.quadrature_points, cfg_a.quadrature_points
    lam = cfg_b.center + cfg_b.radius * np.exp(2j * np.pi * np.arange(qb) / qb)
    mu = cfg_a.center + cfg_a.radius * np.exp(2j * np.pi * np.arange(qa) / qa)
    p = symbol_eval(form, lam.reshape(-1, 1), mu.reshape(1, -1))
    bound = max(float(np.abs(lam).max()), float(np.abs(mu).max()))
    grid_tol = krein_tolerance(form, bound)
    if np.abs(p).min() <= grid_tol:
        raise ContourTooClose(
            f"|P| dips to {np.abs(p).min():.3e} (tol {grid_tol:.3e}) on the node grid")

    m, n = y.shape
    eye_b = np.eye(m, dtype=np.complex128)
    eye_a = np.eye(n, dtype=np.complex128)
    cond = 0.0
    xb = np.empty((qb, m, n), dtype=np.complex128)
    for s in range(qb):
        try:
            factors = linalg.lu_factor(lam[s] * eye_b - b)
        except SingularMatrix as exc:
            raise ContourTooClose(f"node {lam[s]:.6g} makes (lam I - B) singular") from exc
        xb[s] = factors.solve(y)
        cond = max(cond, factors.condition_estimate())
    ra = np.empty((qa, n, n), dtype=np.complex128)
    for t in range(qa):
        try:
            factors = linalg.lu_factor(mu[t] * eye_a - a)
        except SingularMatrix as exc:
            raise ContourTooClose(f"node {mu[t]:.6g} makes (mu I - A) singular") from exc
        ra[t] = factors.solve(eye_a)
        cond = max(cond, factors.condition_estimate())

    # (lam - center) dlam/(2 pi i) collapses to radius * e^{i theta} / Q per node
    wb = cfg_b.radius * np.exp(2j * np.pi * np.arange(qb) / qb) / qb
    wa = cfg_a.radius * np.exp(2j * np.pi * np.arange(qa) / qa) / qa
    weights = (wb.reshape(-1, 1) * wa.reshape(1, -1)) / p
    inner = np.tensordot(weights, ra, axes=(1, 0))   # (qb, n, n)
    h = np.einsum("sij,sjk->ik", xb, inner)
    return _finalize(form, b, a, y, h, cond)


def residual(form, b, a, h, y):
    """Relative residual ||sum_jk a_jk B^j H A^k - Y|| / max(1, ||Y||).

    Matrix powers are rebuilt here by repeated multiplication so the check
    stays independent of whichever solver produced H.
    """
    b = linalg.as_matrix(b)
    a = linalg.as_matrix(a)
    h = linalg.as_matrix(h)
    y = linalg.as_matrix(y)
    c = form.coeffs
    acc = np.zeros_like(y)
    for j in range(form.order + 1):
        left = h
        for _ in range(j):
            left = linalg.mat_mul(linalg.as_matrix(b), left)
        for k in range(form.order + 1):
            if c[j, k] == 0:
                continue
            term = left
            for _ in range(k):
                term = linalg.mat_mul(term, a)
            acc = acc + c[j, k] * term
    return float(linalg.spectral_norm(acc - y) / max(1.0, linalg.spectral_norm(y)))
