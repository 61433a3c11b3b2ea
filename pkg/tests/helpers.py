"""Shared test machinery: controlled random instances and multiset matching.

Instance generation is the one place tests construct matrices with known
spectra: eigenvalues are sampled inside (or violating) a region with a
stated margin, then conjugated by a random well-conditioned similarity.
numpy.linalg is fair game here; it never touches the code paths under test.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from specloc import regions


def multiset_max_distance(x, y):
    """Largest matched distance between two equally sized complex multisets."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    assert x.size == y.size
    cost = np.abs(x.reshape(-1, 1) - y.reshape(1, -1))
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def random_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_similarity(rng, n, log_spread=0.5):
    """(S, S^-1) with condition number at most exp(2 * log_spread)."""
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    s = np.exp(rng.uniform(-log_spread, log_spread, size=n))
    mat = (u * s) @ v.conj().T
    inv = (v / s) @ u.conj().T
    return mat, inv


def matrix_with_spectrum(rng, eigenvalues, log_spread=0.5):
    """Matrix whose exact spectrum is ``eigenvalues``, moderately non-normal."""
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    n = eigenvalues.size
    s, sinv = random_similarity(rng, n, log_spread)
    return s @ np.diag(eigenvalues) @ sinv


def random_hermitian(rng, n, shift=0.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T) + shift * np.eye(n)


def random_hermitian_posdef(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g @ g.conj().T + n * np.eye(n)


def sample_inside(region, rng, margin):
    """One point with region_margin >= ``margin`` (strictly inside)."""
    if isinstance(region, regions.HalfPlaneLeft):
        return complex(rng.uniform(-3.0 - margin, -margin), rng.uniform(-3.0, 3.0))
    if isinstance(region, regions.UnitDisk):
        r2 = rng.uniform(0.0, 1.0 - margin)
        theta = rng.uniform(0.0, 2 * np.pi)
        return np.sqrt(r2) * np.exp(1j * theta)
    if isinstance(region, regions.EllipseInterior):
        r2 = rng.uniform(0.0, 1.0 - margin)
        theta = rng.uniform(0.0, 2 * np.pi)
        u, v = np.sqrt(r2) * np.cos(theta), np.sqrt(r2) * np.sin(theta)
        return complex(region.a * u, region.b * v)
    if isinstance(region, regions.EllipseExterior):
        r2 = rng.uniform(1.0 + margin, 4.0)
        theta = rng.uniform(0.0, 2 * np.pi)
        u, v = np.sqrt(r2) * np.cos(theta), np.sqrt(r2) * np.sin(theta)
        return complex(region.a * u, region.b * v)
    if isinstance(region, regions.ParabolaInterior):
        x = rng.uniform(margin / (2 * region.p), margin / (2 * region.p) + 3.0)
        ymax = np.sqrt(2 * region.p * x - margin)
        return complex(x, rng.uniform(-ymax, ymax))
    if isinstance(region, regions.ParabolaExterior):
        y = rng.uniform(-3.0, 3.0)
        xmax = (y * y - margin) / (2 * region.p)
        return complex(rng.uniform(xmax - 3.0, xmax), y)
    raise AssertionError(f"unknown region {region!r}")


def sample_violating(region, rng, margin):
    """One point strictly on the wrong side, margin measured the same way."""
    if isinstance(region, regions.HalfPlaneLeft):
        return complex(rng.uniform(margin, margin + 3.0), rng.uniform(-3.0, 3.0))
    if isinstance(region, regions.UnitDisk):
        r2 = rng.uniform(1.0 + margin, 4.0)
        theta = rng.uniform(0.0, 2 * np.pi)
        return np.sqrt(r2) * np.exp(1j * theta)
    if isinstance(region, regions.EllipseInterior):
        return sample_inside(regions.EllipseExterior(region.a, region.b), rng, margin)
    if isinstance(region, regions.EllipseExterior):
        return sample_inside(regions.EllipseInterior(region.a, region.b), rng, margin)
    if isinstance(region, regions.ParabolaInterior):
        return sample_inside(regions.ParabolaExterior(region.p), rng, margin)
    if isinstance(region, regions.ParabolaExterior):
        return sample_inside(regions.ParabolaInterior(region.p), rng, margin)
    raise AssertionError(f"unknown region {region!r}")


def in_region_matrix(region, rng, n, margin=0.1, log_spread=0.5):
    eigs = [sample_inside(region, rng, margin) for _ in range(n)]
    return matrix_with_spectrum(rng, eigs, log_spread), np.array(eigs)


def out_region_matrix(region, rng, n, margin=0.1, log_spread=0.5):
    """At least one eigenvalue strictly violating; the rest stay inside."""
    bad = int(rng.integers(1, n + 1))
    eigs = [sample_violating(region, rng, margin) for _ in range(bad)]
    eigs += [sample_inside(region, rng, margin) for _ in range(n - bad)]
    rng.shuffle(eigs)
    return matrix_with_spectrum(rng, eigs, log_spread), np.array(eigs)
