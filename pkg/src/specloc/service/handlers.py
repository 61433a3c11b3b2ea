"""Service handlers: pure request-model -> response-model functions.

The FastAPI endpoints and the CLI both dispatch here, so library outcomes
map to stable error codes exactly once. Handlers raise
:class:`ServiceError`; the HTTP layer turns that into a JSON error body,
the CLI into an exit code.
"""

import time

import numpy as np

from .. import eigen, linalg, lyapunov, perturbation, regions
from ..errors import (CNotPositiveDefinite, ContourTooClose, DimensionMismatch,
                      HNotPositiveDefinite, InvalidContour, InvalidRegionParams,
                      KreinConditionViolated, NoConvergence, NotHermitian,
                      SingularSystem, UnsupportedRegion)
from . import schemas

# error code -> (http status, CLI exit code)
ERROR_CODES = {
    "parse": (400, 2),
    "invalid_input": (400, 2),
    "no_convergence": (422, 3),
    "singular_system": (422, 4),
    "invalid_region": (400, 5),
    "certificate_failed": (422, 6),
    "krein_violation": (422, 7),
}


class ServiceError(Exception):
    """Library outcome that maps to a non-success report."""

    def __init__(self, code, message, **extra):
        super().__init__(message)
        if code not in ERROR_CODES:
            raise ValueError(f"unknown error code {code!r}")
        self.code = code
        self.message = message
        self.extra = extra

    @property
    def http_status(self):
        return ERROR_CODES[self.code][0]

    @property
    def exit_code(self):
        return ERROR_CODES[self.code][1]

    def payload(self):
        return {"code": self.code, "message": self.message, **self.extra}


def _region(payload):
    try:
        return regions.make_region(payload.kind, a=payload.a, b=payload.b, p=payload.p)
    except InvalidRegionParams as exc:
        raise ServiceError("invalid_region", str(exc)) from exc


def _matrix(payload, name):
    try:
        return linalg.as_matrix(payload.to_array())
    except (ValueError, DimensionMismatch) as exc:
        raise ServiceError("invalid_input", f"bad matrix {name}: {exc}") from exc


def _pairs(values):
    return [(float(v.real), float(v.imag)) for v in np.asarray(values)]


def handle_spectrum(req: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
    a = _matrix(req.matrix, "A")
    if a.shape[0] != a.shape[1]:
        raise ServiceError("invalid_input", f"matrix must be square, got {a.shape}")
    t0 = time.perf_counter()
    try:
        spectrum = eigen.eig(a)
    except NoConvergence as exc:
        raise ServiceError("no_convergence", str(exc)) from exc
    return schemas.SpectrumResponse(
        eigenvalues=_pairs(spectrum.eigenvalues),
        backward_error=spectrum.backward_error,
        timings={"total_s": time.perf_counter() - t0})


def handle_certify(req: schemas.CertifyRequest) -> schemas.CertifyResponse:
    region = _region(req.region)
    a = _matrix(req.matrix, "A")
    c = _matrix(req.c, "C") if req.c is not None else None
    t0 = time.perf_counter()
    try:
        cert = regions.certify(region, a, c=c, cert_tol=req.cert_tol,
                               check_oracle=req.oracle)
    except SingularSystem as exc:
        raise ServiceError("singular_system", str(exc)) from exc
    except CNotPositiveDefinite as exc:
        raise ServiceError("invalid_input", str(exc)) from exc
    except NoConvergence as exc:
        raise ServiceError("no_convergence", str(exc)) from exc
    except DimensionMismatch as exc:
        raise ServiceError("invalid_input", str(exc)) from exc
    oracle = None
    if req.oracle:
        oracle = schemas.OracleInfo(
            eigenvalues=_pairs(cert.oracle_eigenvalues),
            in_region=cert.oracle_inside,
            margin=cert.oracle_margin,
            agrees=cert.oracle_agrees)
    return schemas.CertifyResponse(
        region=req.region,
        verdict=cert.verdict,
        posdef=cert.posdef,
        residual=cert.residual,
        min_pivot=cert.min_pivot,
        direction=cert.direction,
        condition_estimate=cert.condition_estimate,
        h=schemas.MatrixPayload.from_array(cert.h),
        oracle=oracle,
        timings={"total_s": time.perf_counter() - t0})


def handle_perturb(req: schemas.PerturbRequest) -> schemas.PerturbResponse:
    region = _region(req.region)
    a = _matrix(req.matrix_a, "A")
    t0 = time.perf_counter()
    try:
        base = regions.certify(region, a)
    except (SingularSystem, CNotPositiveDefinite, DimensionMismatch) as exc:
        raise ServiceError("certificate_failed",
                           f"base certificate failed: {exc}") from exc
    if not base.verdict:
        raise ServiceError(
            "certificate_failed",
            f"base certificate failed: posdef={base.posdef}, residual={base.residual:.3e}")
    base_fields = dict(base_residual=base.residual,
                       base_min_pivot=base.min_pivot,
                       base_condition_estimate=base.condition_estimate)

    if req.radius_only:
        try:
            if isinstance(region, regions.EllipseInterior):
                radius = perturbation.radius_ellipse_interior(a, base.h, region.a, region.b)
            elif isinstance(region, regions.EllipseExterior):
                radius = perturbation.radius_ellipse_exterior(a, base.h, region.a, region.b)
            else:
                raise ServiceError(
                    "invalid_input",
                    "no closed-form radius exists for this region; only the ellipse "
                    "regions have one")
        except HNotPositiveDefinite as exc:
            raise ServiceError("certificate_failed", str(exc)) from exc
        return schemas.PerturbResponse(
            region=req.region, verdict=None, radius=radius, **base_fields,
            timings={"total_s": time.perf_counter() - t0})

    if req.matrix_b is None:
        raise ServiceError("invalid_input", "matrix B is required unless radius_only is set")
    b = _matrix(req.matrix_b, "B")
    try:
        report = perturbation.check_perturbation(region, a, b, base.h)
    except UnsupportedRegion as exc:
        raise ServiceError("invalid_input", str(exc)) from exc
    except DimensionMismatch as exc:
        raise ServiceError("invalid_input", str(exc)) from exc
    except NoConvergence as exc:
        raise ServiceError("no_convergence", str(exc)) from exc
    return schemas.PerturbResponse(
        region=req.region,
        verdict=report.verdict,
        condition_holds=report.condition_holds,
        margin=report.margin,
        radius=report.radius,
        b_norm=report.b_norm,
        **base_fields,
        timings={"total_s": time.perf_counter() - t0})


def handle_solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
    a = _matrix(req.matrix_a, "A")
    y = _matrix(req.matrix_y, "Y")
    if (req.region is None) == (req.coefficients is None):
        raise ServiceError("invalid_input",
                           "exactly one of region or coefficients must be given")
    if req.region is not None:
        form = regions.region_form(_region(req.region))
    else:
        try:
            form = lyapunov.LyapunovForm(req.coefficients.to_array(),
                                         rhs_sign=req.coefficients.rhs_sign)
        except (ValueError, DimensionMismatch) as exc:
            raise ServiceError("invalid_input", f"bad coefficient grid: {exc}") from exc
    b = _matrix(req.matrix_b, "B") if req.matrix_b is not None else linalg.adjoint(a)

    t0 = time.perf_counter()
    krein = None
    try:
        if req.method == "kron":
            report = lyapunov.solve_kron(form, b, a, y)
        else:
            cfg_b = lyapunov.default_contour(b, req.quadrature_points)
            cfg_a = lyapunov.default_contour(a, req.quadrature_points)
            report = lyapunov.solve_contour(form, b, a, y, cfg_b, cfg_a)
            verdict = lyapunov.krein_condition(form, eigen.eig(b), eigen.eig(a))
            krein = schemas.KreinInfo(min_abs_symbol=verdict.min_abs_symbol,
                                      tol=verdict.tol, offending=verdict.offending)
    except SingularSystem as exc:
        raise ServiceError("singular_system", str(exc)) from exc
    except KreinConditionViolated as exc:
        raise ServiceError("krein_violation", str(exc), pairs=exc.pairs) from exc
    except (ContourTooClose, InvalidContour) as exc:
        raise ServiceError("singular_system", str(exc)) from exc
    except DimensionMismatch as exc:
        raise ServiceError("invalid_input", str(exc)) from exc
    except NoConvergence as exc:
        raise ServiceError("no_convergence", str(exc)) from exc

    posdef = None
    h = report.h
    if h.shape[0] == h.shape[1]:
        try:
            posdef = bool(linalg.cholesky_posdef(h))
        except NotHermitian:
            posdef = None  # non-Hermitian H has no definiteness verdict
    return schemas.SolveResponse(
        h=schemas.MatrixPayload.from_array(h),
        residual=report.residual,
        condition_estimate=report.condition_estimate,
        hermitized=report.hermitized,
        asymmetry_dropped=report.asymmetry_dropped,
        posdef=posdef,
        method=req.method,
        quadrature_points=req.quadrature_points if req.method == "contour" else None,
        krein=krein,
        timings={"total_s": time.perf_counter() - t0})
