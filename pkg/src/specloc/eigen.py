"""Eigenvalue oracle: Householder Hessenberg reduction plus shifted complex QR.

This module verifies certificates produced elsewhere, so it is deliberately
self-contained: it never calls the LU/Cholesky routines the equation solvers
use. Shifted linear systems are solved by a local elimination that
substitutes tiny pivots instead of failing, the standard inverse-iteration
trick.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotAnEigenvalue

MAX_SWEEPS = 30       # QR sweeps allowed per eigenvalue
EIGVEC_TOL = 1e-10    # eigenpair residual target, relative to ||A||_F
_SEED = 74180235


@dataclass
class Spectrum:
    """All eigenvalues of a matrix, sorted lexicographically by (re, im).

    ``backward_error`` is the largest sigma_min-style residual estimate of
    A - lambda*I over the computed eigenvalues, relative to the scale of A.
    """

    eigenvalues: np.ndarray
    backward_error: float

    def __len__(self):
        return len(self.eigenvalues)


def _square(a):
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {np.shape(a)}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite")
    return m


def hessenberg(a):
    """Reduce to upper-Hessenberg form by unitary Householder similarity."""
    h = _square(a).copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * normx
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _wilkinson_shift(a, b, c, d):
    # Eigenvalue of [[a, b], [c, d]] closer to d.
    mid = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + b * c + 0j)
    r1 = mid + disc
    r2 = mid - disc
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def _qr_sweep(h, lo, hi, shift):
    # One explicit shifted QR step on the active block h[lo:hi, lo:hi].
    for k in range(lo, hi):
        h[k, k] -= shift
    rots = []
    for k in range(lo, hi - 1):
        x, y = h[k, k], h[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0.0 + 0j
        else:
            c, s = x / r, y / r
        rots.append((c, s))
        rowk = h[k, k:hi].copy()
        rowk1 = h[k + 1, k:hi]
        h[k, k:hi] = np.conj(c) * rowk + np.conj(s) * rowk1
        h[k + 1, k:hi] = -s * rowk + c * rowk1
        h[k + 1, k] = 0.0
    for k in range(lo, hi - 1):
        c, s = rots[k - lo]
        top = min(k + 2, hi)
        colk = h[lo:top, k].copy()
        colk1 = h[lo:top, k + 1]
        h[lo:top, k] = c * colk + s * colk1
        h[lo:top, k + 1] = -np.conj(s) * colk + np.conj(c) * colk1
    for k in range(lo, hi):
        h[k, k] += shift


def eig(a, max_sweeps=MAX_SWEEPS):
    """Compute all eigenvalues by Wilkinson-shifted QR with deflation.

    Raises
    ------
    NoConvergence
        If more than ``max_sweeps * n`` total sweeps are spent, which
        signals pathological input.
    """
    a = _square(a)
    n = a.shape[0]
    h = hessenberg(a)
    u = np.finfo(float).eps
    guard = max(np.abs(h).max(), np.finfo(float).tiny)
    eigs = []
    hi = n
    sweeps_here = 0
    total = 0
    budget = max_sweeps * n
    while hi > 0:
        if hi == 1:
            eigs.append(h[0, 0])
            hi = 0
            continue
        s = abs(h[hi - 2, hi - 2]) + abs(h[hi - 1, hi - 1])
        if s == 0.0:
            s = guard
        if abs(h[hi - 1, hi - 2]) <= u * s:
            h[hi - 1, hi - 2] = 0.0
            eigs.append(h[hi - 1, hi - 1])
            hi -= 1
            sweeps_here = 0
            continue
        lo = hi - 2
        while lo > 0:
            s2 = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s2 == 0.0:
                s2 = guard
            if abs(h[lo, lo - 1]) <= u * s2:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if total >= budget:
            raise NoConvergence(f"QR spent {total} sweeps on a {n}x{n} matrix")
        sweeps_here += 1
        total += 1
        if sweeps_here % 10 == 0:
            # exceptional shift to break symmetric stalls
            shift = h[hi - 1, hi - 1] + 0.75 * abs(h[hi - 1, hi - 2])
        else:
            shift = _wilkinson_shift(h[hi - 2, hi - 2], h[hi - 2, hi - 1],
                                     h[hi - 1, hi - 2], h[hi - 1, hi - 1])
        _qr_sweep(h, lo, hi, shift)
    values = np.array(eigs, dtype=np.complex128)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    rng = np.random.default_rng(_SEED)
    backward = 0.0
    for lam in values:
        backward = max(backward, _sigma_min_estimate(a, lam, rng) / scale)
    return Spectrum(eigenvalues=values, backward_error=backward)


def _solve_shifted(m, b):
    # Elimination with partial pivoting; tiny pivots are replaced, not fatal.
    # The floor keeps 1/pivot finite, so intentional near-singularity just
    # produces huge (finite) iterates for the caller to renormalize.
    n = m.shape[0]
    lu = m.copy()
    x = np.asarray(b, dtype=np.complex128).copy()
    floor = max(np.finfo(float).eps * np.abs(m).max(), 1e-290)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n):
            p = k + int(np.argmax(np.abs(lu[k:, k])))
            if p != k:
                lu[[k, p], :] = lu[[p, k], :]
                x[[k, p]] = x[[p, k]]
            if abs(lu[k, k]) < floor:
                lu[k, k] = floor
            factors = lu[k + 1:, k] / lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(factors, lu[k, k + 1:])
            x[k + 1:] -= factors * x[k]
        for k in range(n - 1, -1, -1):
            x[k] -= lu[k, k + 1:] @ x[k + 1:]
            x[k] /= lu[k, k]
    return x


def _sigma_min_estimate(a, lam, rng):
    # Two inverse-iteration steps approximate the minimal singular vector of
    # A - lambda*I; ||(A - lambda*I) v|| then estimates sigma_min.
    n = a.shape[0]
    m = a - lam * np.eye(n)
    if np.abs(m).max() == 0.0:
        return 0.0
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(2):
        w = _solve_shifted(m, v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            return 0.0
        v = w / nw
    return float(np.linalg.norm(m @ v))


def eigvec(a, lam, tol=EIGVEC_TOL, max_iter=20):
    """Unit eigenvector for an eigenvalue estimate, by inverse iteration.

    Raises :class:`~specloc.errors.NotAnEigenvalue` if the residual
    ``||A v - lam v||`` cannot be pushed below ``tol * ||A||_F``, which is
    what happens when ``lam`` is not close to the spectrum.
    """
    a = _square(a)
    n = a.shape[0]
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    m = a - lam * np.eye(n)
    rng = np.random.default_rng(_SEED + 1)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    best_v, best_r = v, np.inf
    for _ in range(max_iter):
        w = _solve_shifted(m, v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            break
        v = w / nw
        r = float(np.linalg.norm(a @ v - lam * v))
        if r < best_r:
            best_v, best_r = v, r
        if r <= tol * scale:
            return v.reshape(-1, 1)
    raise NotAnEigenvalue(
        f"residual {best_r:.3e} never reached {tol:.1e} * ||A|| = {tol * scale:.3e}")
