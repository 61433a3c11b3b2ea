"""Dense complex matrix arithmetic, factorizations, and norms.

Everything operates on 2-D ``numpy.ndarray`` with dtype complex128.
All functions are pure; inputs are never modified in place.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, SingularMatrix

# Relative tolerances, scaled by the norm of the operand they test.
HERM_TOL = 1e-10     # asymmetry allowed before a matrix stops counting as Hermitian
POSDEF_TOL = 1e-12   # Cholesky pivots must exceed POSDEF_TOL * ||H||
PIVOT_TOL = 1e-13    # LU pivots must exceed PIVOT_TOL * max|A_ij|
NORM_TOL = 1e-12     # power-iteration residual target for the spectral norm

_NORM_SEED = 20240917  # deterministic start vectors for power iteration


def as_matrix(a):
    """Validate and return ``a`` as a finite 2-D complex128 array.

    Raises
    ------
    DimensionMismatch
        If ``a`` is not 2-D or has a zero dimension.
    ValueError
        If any entry is NaN or infinite.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {np.shape(a)}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def mat_mul(a, b):
    """Matrix product A @ B with an explicit dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    """Conjugate transpose A*."""
    return as_matrix(a).conj().T.copy()


@dataclass(frozen=True)
class HermitianVerdict:
    """How far a matrix is from Hermitian: ||M - M*|| against the tolerance."""

    is_hermitian: bool
    asymmetry: float

    def __bool__(self):
        return self.is_hermitian


def hermitian_verdict(m, herm_tol=HERM_TOL):
    """Measure the asymmetry ||M - M*|| in the operator 2-norm.

    The verdict compares it against ``herm_tol * ||M||``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("hermitian check needs a square matrix")
    asymmetry = spectral_norm(m - m.conj().T)
    scale = spectral_norm(m)
    return HermitianVerdict(is_hermitian=asymmetry <= herm_tol * scale,
                            asymmetry=asymmetry)


class LUFactors:
    """Partial-pivoted LU factorization PA = LU of a square matrix.

    Provides solves against A and A*, and a Hager-style 1-norm condition
    estimate. The factorization copies its input.
    """

    def __init__(self, a, pivot_tol=PIVOT_TOL):
        a = as_matrix(a)
        n, m = a.shape
        if n != m:
            raise DimensionMismatch(f"LU needs a square matrix, got {a.shape}")
        lu = a.copy()
        perm = np.arange(n)
        maxabs = np.abs(a).max()
        threshold = pivot_tol * maxabs
        if maxabs == 0.0:
            raise SingularMatrix("zero matrix", pivot_index=0, pivot_value=0.0)
        for k in range(n):
            p = k + int(np.argmax(np.abs(lu[k:, k])))
            pivot = abs(lu[p, k])
            if pivot < threshold:
                raise SingularMatrix(
                    f"pivot {pivot:.3e} below threshold {threshold:.3e} at step {k}",
                    pivot_index=k, pivot_value=pivot)
            if p != k:
                lu[[k, p], :] = lu[[p, k], :]
                perm[[k, p]] = perm[[p, k]]
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
        self._lu = lu
        self._perm = perm
        self._a = a
        self._n = n
        self._one_norm = float(np.abs(a).sum(axis=0).max())
        self._adjoint_factors = None

    @property
    def shape(self):
        return self._a.shape

    def solve(self, b):
        """Solve A x = b; ``b`` may be a vector, a column, or a matrix of columns."""
        b = np.asarray(b, dtype=np.complex128)
        squeeze = b.ndim == 1
        if squeeze:
            b = b.reshape(-1, 1)
        if b.shape[0] != self._n:
            raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {self._n}")
        x = b[self._perm, :].copy()
        lu = self._lu
        for k in range(1, self._n):           # forward: L y = Pb (unit diagonal)
            x[k, :] -= lu[k, :k] @ x[:k, :]
        for k in range(self._n - 1, -1, -1):  # backward: U x = y
            x[k, :] -= lu[k, k + 1:] @ x[k + 1:, :]
            x[k, :] /= lu[k, k]
        return x[:, 0] if squeeze else x

    def _solve_adjoint(self, b):
        # Lazily factorize A*; two factorizations keep the substitution code simple.
        if self._adjoint_factors is None:
            self._adjoint_factors = LUFactors(self._a.conj().T)
        return self._adjoint_factors.solve(b)

    def condition_estimate(self):
        """Hager-style estimate of the 1-norm condition number of A."""
        n = self._n
        x = np.full(n, 1.0 / n, dtype=np.complex128)
        est = 0.0
        for _ in range(5):
            y = self.solve(x)
            est = float(np.abs(y).sum())
            xi = np.where(y == 0, 1.0, y / np.maximum(np.abs(y), np.finfo(float).tiny))
            z = self._solve_adjoint(xi)
            j = int(np.argmax(np.abs(z)))
            if np.abs(z[j]) <= np.real(np.vdot(z, x)) + 1e-30:
                break
            x = np.zeros(n, dtype=np.complex128)
            x[j] = 1.0
        return est * self._one_norm


def lu_factor(a, pivot_tol=PIVOT_TOL):
    """Factor a square matrix; see :class:`LUFactors`."""
    return LUFactors(a, pivot_tol=pivot_tol)


def lu_solve(a, b, pivot_tol=PIVOT_TOL):
    """Solve A x = b by partial-pivoted LU.

    Raises :class:`~specloc.errors.SingularMatrix` when a pivot falls below
    ``pivot_tol * max|A_ij|``. Use :func:`lu_factor` to reuse the
    factorization or to obtain a condition estimate.
    """
    return lu_factor(a, pivot_tol=pivot_tol).solve(b)


class CholeskyResult:
    """Outcome of :func:`cholesky_posdef`.

    ``factor`` is the lower-triangular L with L L* = H when the matrix is
    positive definite, else None. ``failed_index`` is the first pivot at or
    below the threshold. ``min_pivot`` is the smallest pivot encountered,
    failing one included.
    """

    def __init__(self, factor, failed_index, min_pivot):
        self.factor = factor
        self.failed_index = failed_index
        self.min_pivot = min_pivot

    @property
    def positive_definite(self):
        return self.factor is not None

    def __bool__(self):
        return self.positive_definite


def cholesky_posdef(h, herm_tol=HERM_TOL, posdef_tol=POSDEF_TOL):
    """Attempt a Cholesky factorization as a positive-definiteness test.

    The Hermitian check runs first: asymmetry above ``herm_tol * ||H||``
    raises :class:`~specloc.errors.NotHermitian`. The factorization then
    works on the Hermitian average (H + H*)/2 and succeeds only if every
    pivot exceeds ``posdef_tol * ||H||``.

    Returns
    -------
    CholeskyResult
        Truthily positive definite, with the failing pivot index otherwise.
    """
    h = as_matrix(h)
    n, m = h.shape
    if n != m:
        raise DimensionMismatch(f"Cholesky needs a square matrix, got {h.shape}")
    scale = spectral_norm(h)
    asymmetry = spectral_norm(h - h.conj().T)
    if asymmetry > herm_tol * scale:
        raise NotHermitian(
            f"asymmetry {asymmetry:.3e} exceeds {herm_tol:.1e} * ||H|| = {herm_tol * scale:.3e}",
            asymmetry=asymmetry)
    hh = 0.5 * (h + h.conj().T)
    threshold = posdef_tol * scale
    low = np.zeros_like(hh)
    min_pivot = np.inf
    for j in range(n):
        d = hh[j, j].real - np.sum(np.abs(low[j, :j]) ** 2)
        min_pivot = min(min_pivot, d)
        if d <= threshold:
            return CholeskyResult(None, j, float(min_pivot))
        low[j, j] = np.sqrt(d)
        if j + 1 < n:
            low[j + 1:, j] = (hh[j + 1:, j] - low[j + 1:, :j] @ low[j, :j].conj()) / low[j, j]
    return CholeskyResult(low, None, float(min_pivot))


def spectral_norm(a, tol=NORM_TOL, max_iter=5000):
    """Operator 2-norm via power iteration on A*A.

    The start vector is drawn from a fixed-seed generator, so results are
    deterministic. Iteration stops when the Rayleigh-quotient residual
    drops below ``tol`` relative to the current estimate; the Rayleigh
    quotient of a Hermitian matrix is accurate to the residual squared, so
    the returned value is sharp even for slow (small-gap) convergence.
    """
    a = as_matrix(a)
    scale = np.abs(a).max()
    if scale == 0.0:
        return 0.0
    b = a / scale
    m = b.conj().T @ b
    n = m.shape[0]
    rng = np.random.default_rng(_NORM_SEED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    theta = 0.0
    for _ in range(max_iter):
        w = m @ v
        theta = float(np.real(np.vdot(v, w)))
        resid = float(np.linalg.norm(w - theta * v))
        if resid <= tol * max(theta, np.finfo(float).tiny):
            break
        nw = np.linalg.norm(w)
        if nw == 0.0:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        v = w / nw
    return float(scale * np.sqrt(max(theta, 0.0)))
