import numpy as np
import pytest
import scipy.linalg

from helpers import (in_region_matrix, out_region_matrix, random_hermitian_posdef,
                     sample_inside, sample_violating)
from specloc import eigen, linalg, lyapunov, regions
from specloc.errors import (CNotPositiveDefinite, InvalidRegionParams,
                            SingularSystem)

ALL_REGIONS = [
    regions.HalfPlaneLeft(),
    regions.UnitDisk(),
    regions.EllipseInterior(2.0, 1.0),
    regions.EllipseInterior(1.5, 0.8),
    regions.EllipseExterior(2.0, 1.0),
    regions.EllipseExterior(3.0, 1.2),
    regions.ParabolaInterior(1.0),
    regions.ParabolaInterior(0.5),
    regions.ParabolaExterior(1.0),
    regions.ParabolaExterior(2.0),
]
# regions whose C = I certificate characterizes membership in both directions
IFF_REGIONS = [r for r in ALL_REGIONS
               if not isinstance(r, (regions.EllipseExterior, regions.ParabolaExterior))]
EXTERIOR_REGIONS = [r for r in ALL_REGIONS
                    if isinstance(r, (regions.EllipseExterior, regions.ParabolaExterior))]


class TestContains:
    def test_ellipse_examples(self):
        e = regions.EllipseInterior(2.0, 1.0)
        assert regions.contains(e, 1.0)
        assert not regions.contains(e, 2.0)  # boundary
        assert not regions.contains(regions.EllipseExterior(2.0, 1.0), 2.0)

    def test_parabola_exterior_negative_axis(self):
        assert regions.contains(regions.ParabolaExterior(1.0), -1.0)

    def test_halfplane_and_disk_boundaries(self):
        assert regions.contains(regions.HalfPlaneLeft(), -0.1 + 5j)
        assert not regions.contains(regions.HalfPlaneLeft(), 0.0)
        assert regions.contains(regions.UnitDisk(), 0.5j)
        assert not regions.contains(regions.UnitDisk(), 1.0)

    @pytest.mark.parametrize("region", ALL_REGIONS, ids=str)
    def test_margin_sign_matches_membership(self, region, rng):
        for _ in range(50):
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            assert regions.contains(region, z) == (regions.region_margin(region, z) > 0)

    @pytest.mark.parametrize("region", ALL_REGIONS, ids=str)
    def test_samplers_respect_margins(self, region, rng):
        for _ in range(100):
            assert regions.region_margin(region, sample_inside(region, rng, 0.07)) >= 0.07
            assert regions.region_margin(region, sample_violating(region, rng, 0.07)) <= -0.07


class TestRegionForm:
    def test_ellipse_grid(self):
        form = regions.region_form(regions.EllipseInterior(2.0, 1.0))
        c = form.coeffs
        assert c[0, 0] == 1.0
        assert c[1, 1] == -0.625
        assert c[0, 2] == c[2, 0] == 0.1875
        assert form.rhs_sign == +1
        assert regions.region_form(regions.EllipseExterior(2.0, 1.0)).rhs_sign == -1

    def test_parabola_grid(self):
        form = regions.region_form(regions.ParabolaInterior(1.0))
        c = form.coeffs
        assert c[0, 1] == c[1, 0] == 1.0
        assert c[1, 1] == -0.5
        assert c[0, 2] == c[2, 0] == 0.25
        assert form.rhs_sign == +1
        assert regions.region_form(regions.ParabolaExterior(1.0)).rhs_sign == -1

    def test_halfplane_grid(self):
        form = regions.region_form(regions.HalfPlaneLeft())
        assert form.coeffs[0, 1] == form.coeffs[1, 0] == 1.0
        assert form.coeffs[0, 0] == 0.0
        assert form.rhs_sign == -1

    def test_disk_grid(self):
        form = regions.region_form(regions.UnitDisk())
        assert form.coeffs[0, 0] == 1.0
        assert form.coeffs[1, 1] == -1.0
        assert form.rhs_sign == +1

    def test_invalid_params(self):
        with pytest.raises(InvalidRegionParams):
            regions.EllipseInterior(1.0, 2.0)
        with pytest.raises(InvalidRegionParams):
            regions.EllipseInterior(1.0, 1.0)  # circle excluded: needs a > b
        with pytest.raises(InvalidRegionParams):
            regions.EllipseExterior(-2.0, -3.0)
        with pytest.raises(InvalidRegionParams):
            regions.ParabolaInterior(0.0)

    def test_make_region_dispatch(self):
        assert regions.make_region("disk") == regions.UnitDisk()
        assert regions.make_region("ellipse-in", a=2, b=1) == regions.EllipseInterior(2, 1)
        with pytest.raises(InvalidRegionParams):
            regions.make_region("ellipse-in", a=2)
        with pytest.raises(InvalidRegionParams):
            regions.make_region("pentagon")


class TestCertifyScalars:
    def test_ellipse_interior_golden(self):
        cert = regions.certify(regions.EllipseInterior(2.0, 1.0), np.array([[0.5]]))
        assert cert.verdict and cert.posdef
        assert abs(cert.h[0, 0] - 16.0 / 15.0) < 1e-15
        assert cert.direction == "iff"

    def test_ellipse_exterior_golden(self):
        cert = regions.certify(regions.EllipseExterior(2.0, 1.0), np.array([[3.0]]))
        assert cert.verdict
        assert abs(cert.h[0, 0] - 0.8) < 1e-15
        assert cert.direction == "sufficient_only"

    def test_parabola_interior_golden(self):
        cert = regions.certify(regions.ParabolaInterior(1.0), np.array([[1.0]]))
        assert cert.verdict
        assert abs(cert.h[0, 0] - 0.5) < 1e-15

    def test_parabola_exterior_direction(self):
        cert = regions.certify(regions.ParabolaExterior(1.0), np.array([[-1.0]]))
        assert cert.verdict
        assert cert.direction == "sufficient_only"

    def test_boundary_contact_raises(self):
        with pytest.raises(SingularSystem):
            regions.certify(regions.EllipseInterior(2.0, 1.0), np.array([[2.0]]))

    def test_c_must_be_posdef(self):
        a = np.array([[0.5]])
        with pytest.raises(CNotPositiveDefinite):
            regions.certify(regions.UnitDisk(), a, c=np.array([[-1.0]]))
        with pytest.raises(CNotPositiveDefinite):
            regions.certify(regions.UnitDisk(), np.eye(2) * 0.5,
                            c=np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_general_posdef_c(self, rng):
        a, _ = in_region_matrix(regions.UnitDisk(), rng, 3)
        c = random_hermitian_posdef(rng, 3)
        cert = regions.certify(regions.UnitDisk(), a, c=c)
        assert cert.verdict


class TestSpectrumInRegion:
    def test_examples(self):
        e = regions.EllipseInterior(2.0, 1.0)
        assert regions.spectrum_in_region(e, np.diag([0.1, 0.5j])).inside
        assert not regions.spectrum_in_region(regions.HalfPlaneLeft(), np.eye(2)).inside
        assert regions.spectrum_in_region(regions.UnitDisk(), np.diag([0.5])).inside

    def test_margin_reported(self):
        rep = regions.spectrum_in_region(regions.UnitDisk(), np.diag([0.5, 0.8j]))
        assert rep.margin == pytest.approx(1 - 0.8**2, abs=1e-12)


class TestCriterionSoundness:
    """Small-batch versions; the acceptance suite runs the full counts."""

    @pytest.mark.parametrize("region", IFF_REGIONS, ids=str)
    def test_forward_inside_certifies(self, region, rng):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            a, _ = in_region_matrix(region, rng, n, margin=0.1)
            cert = regions.certify(region, a, check_oracle=True)
            assert cert.verdict, (region, cert.residual, cert.min_pivot)
            assert cert.residual <= 1e-9
            assert cert.oracle_agrees

    @pytest.mark.parametrize("region", ALL_REGIONS, ids=str)
    def test_reverse_violation_never_certifies(self, region, rng):
        # decisive for every region: a violating eigenvalue forces a negative
        # Rayleigh quotient on H through the eigenvector identity
        for _ in range(10):
            n = int(rng.integers(2, 7))
            a, _ = out_region_matrix(region, rng, n, margin=0.1)
            try:
                cert = regions.certify(region, a, check_oracle=True)
            except SingularSystem:
                continue  # no clean certificate either way
            assert not cert.verdict
            assert cert.oracle_agrees

    @pytest.mark.parametrize("region", EXTERIOR_REGIONS, ids=str)
    def test_exterior_inside_solvable_hermitian(self, region, rng):
        # the exterior equations stay uniquely solvable for in-region spectra
        # even where definiteness is lost; H is still Hermitian
        for _ in range(10):
            n = int(rng.integers(2, 7))
            a, _ = in_region_matrix(region, rng, n, margin=0.1, log_spread=1.1513)
            cert = regions.certify(region, a)
            assert cert.residual <= 1e-9
            asym = linalg.spectral_norm(cert.h - cert.h.conj().T)
            assert asym <= 1e-10 * max(linalg.spectral_norm(cert.h), 1e-300)


class TestExteriorForwardCounterexamples:
    """The exterior certificates are one-directional, and provably so.

    With C = I and a mildly non-normal A whose spectrum sits deep inside
    the exterior region, the unique solution of the exterior equation can
    be indefinite. These frozen instances pin that behavior down; they are
    why certificate_direction reports sufficient_only for the exteriors.
    """

    @staticmethod
    def _shear_instance(d1, d2, t):
        s = np.array([[1.0, t], [0.0, 1.0]])
        sinv = np.array([[1.0, -t], [0.0, 1.0]])
        return s @ np.diag([d1, d2]) @ sinv

    def test_ellipse_exterior_indefinite_solution(self):
        region = regions.EllipseExterior(2.0, 1.0)
        a = self._shear_instance(-2.9014684045004886 - 1.3616490015132974j,
                                 -2.9920496027948156 + 1.3334204208655467j,
                                 1.703556174918155)
        membership = regions.spectrum_in_region(region, a)
        assert membership.inside and membership.margin > 2.9
        cert = regions.certify(region, a)
        assert cert.residual <= 1e-12  # the solve itself is clean
        assert not cert.posdef         # yet H is indefinite
        assert cert.min_pivot < -0.05

    def test_parabola_exterior_indefinite_solution(self):
        region = regions.ParabolaExterior(1.0)
        a = self._shear_instance(-2.4370272746075234 + 1.9302549492327805j,
                                 -1.9480436699492951 - 1.663135473240406j,
                                 1.9512310594035136)
        membership = regions.spectrum_in_region(region, a)
        assert membership.inside and membership.margin > 6.0
        cert = regions.certify(region, a)
        assert cert.residual <= 1e-12
        assert not cert.posdef
        assert cert.min_pivot < -0.05

    def test_normal_matrices_stay_sound(self, rng):
        # for normal A the exterior forward direction does hold with C = I
        from helpers import random_unitary
        for region in EXTERIOR_REGIONS:
            for _ in range(10):
                n = int(rng.integers(2, 6))
                eigs = [sample_inside(region, rng, 0.1) for _ in range(n)]
                q = random_unitary(rng, n)
                a = q @ np.diag(eigs) @ q.conj().T
                cert = regions.certify(region, a)
                assert cert.verdict, (region, cert.min_pivot)


class TestQuadraticFormIdentity:
    """The eigenvector identity behind the ellipse and parabola criteria."""

    @staticmethod
    def _apply_form(form, a, h):
        astar = linalg.adjoint(a)
        acc = np.zeros_like(h)
        for j in range(form.order + 1):
            for k in range(form.order + 1):
                if form.coeffs[j, k] == 0:
                    continue
                term = np.linalg.matrix_power(astar, j) @ h @ np.linalg.matrix_power(a, k)
                acc = acc + form.coeffs[j, k] * term
        return acc

    def test_ellipse_identity(self, rng):
        region = regions.EllipseInterior(2.0, 1.0)
        form = regions.region_form(region)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            inside = bool(rng.integers(0, 2))
            a, eigs = (in_region_matrix if inside else out_region_matrix)(
                region, rng, n, margin=0.1)
            h = random_hermitian_posdef(rng, n)
            op = self._apply_form(form, a, h)
            for lam in eigen.eig(a).eigenvalues:
                v = eigen.eigvec(a, lam)
                lhs = (v.conj().T @ op @ v).item()
                factor = 1 - lam.real**2 / 4.0 - lam.imag**2 / 1.0
                rhs = factor * (v.conj().T @ h @ v).item()
                assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1e-9)

    def test_parabola_identity(self, rng):
        p = 1.0
        region = regions.ParabolaInterior(p)
        form = regions.region_form(region)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            inside = bool(rng.integers(0, 2))
            a, eigs = (in_region_matrix if inside else out_region_matrix)(
                region, rng, n, margin=0.1)
            h = random_hermitian_posdef(rng, n)
            op = self._apply_form(form, a, h)
            for lam in eigen.eig(a).eigenvalues:
                v = eigen.eigvec(a, lam)
                lhs = (v.conj().T @ op @ v).item()
                factor = 2 * lam.real - lam.imag**2 / p
                rhs = factor * (v.conj().T @ h @ v).item()
                assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1e-9)


class TestDiskMatchesDiscreteLyapunov:
    def test_against_scipy(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 6))
            a, _ = in_region_matrix(regions.UnitDisk(), rng, n, margin=0.2)
            c = random_hermitian_posdef(rng, n)
            cert = regions.certify(regions.UnitDisk(), a, c=c)
            ref = scipy.linalg.solve_discrete_lyapunov(linalg.adjoint(a), c)
            assert np.abs(cert.h - ref).max() <= 1e-8 * max(1.0, np.abs(ref).max())

    def test_schur_unstable_scalar(self):
        # |2| > 1: solvable but indefinite, H = -1/3
        form = regions.region_form(regions.UnitDisk())
        a = np.array([[2.0]])
        rep = lyapunov.solve_kron(form, linalg.adjoint(a), a, np.eye(1))
        assert abs(rep.h[0, 0] + 1.0 / 3.0) < 1e-15
        assert not linalg.cholesky_posdef(rep.h).positive_definite
