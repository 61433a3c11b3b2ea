"""specloc: certify where a matrix spectrum lives, and how far it can be pushed.

The library solves Lyapunov-type matrix equations attached to six spectral
target regions (left half-plane, unit disk, ellipse interior/exterior,
parabola interior/exterior), certifies spectrum membership through
Hermitian positive definite solutions, and computes perturbation
tolerances preserving the localization. An independent QR eigenvalue
oracle cross-checks every claim.
"""

__version__ = "0.1.0"

from . import eigen, errors, linalg, lyapunov, matrixio, perturbation, regions
from .eigen import Spectrum, eig, eigvec, hessenberg
from .errors import SpeclocError
from .linalg import (HermitianVerdict, adjoint, cholesky_posdef, hermitian_verdict,
                     lu_factor, lu_solve, mat_mul, spectral_norm)
from .lyapunov import (ContourConfig, LyapunovForm, SolveReport, default_contour,
                       krein_condition, residual, solve_contour, solve_kron,
                       symbol_eval)
from .perturbation import (ConditionMatrix, PerturbationReport, check_perturbation,
                           condition_matrix, perturbed_solvability,
                           radius_ellipse_exterior, radius_ellipse_interior)
from .regions import (Certificate, EllipseExterior, EllipseInterior, HalfPlaneLeft,
                      ParabolaExterior, ParabolaInterior, UnitDisk, certify,
                      contains, make_region, region_form, region_margin,
                      spectrum_in_region)

__all__ = [
    "__version__",
    "errors", "linalg", "eigen", "lyapunov", "regions", "perturbation", "matrixio",
    "SpeclocError",
    "mat_mul", "adjoint", "lu_factor", "lu_solve", "cholesky_posdef", "spectral_norm",
    "HermitianVerdict", "hermitian_verdict",
    "Spectrum", "hessenberg", "eig", "eigvec",
    "LyapunovForm", "ContourConfig", "SolveReport", "symbol_eval", "krein_condition",
    "solve_kron", "solve_contour", "residual", "default_contour",
    "HalfPlaneLeft", "UnitDisk", "EllipseInterior", "EllipseExterior",
    "ParabolaInterior", "ParabolaExterior", "Certificate", "make_region",
    "contains", "region_margin", "region_form", "certify", "spectrum_in_region",
    "ConditionMatrix", "PerturbationReport", "condition_matrix", "check_perturbation",
    "radius_ellipse_interior", "radius_ellipse_exterior", "perturbed_solvability",
]
