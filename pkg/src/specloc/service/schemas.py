"""Pydantic request/response models for the certification service."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MatrixPayload(BaseModel):
    """Dense complex matrix on the wire: row-major [re, im] pairs."""

    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    entries: list[tuple[float, float]]

    @model_validator(mode="after")
    def _check_entries(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        for i, (re, im) in enumerate(self.entries):
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError(f"entries[{i}] is not finite")
        return self

    def to_array(self):
        values = [complex(re, im) for re, im in self.entries]
        return np.array(values, dtype=np.complex128).reshape(self.rows, self.cols)

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=np.complex128)
        return cls(rows=m.shape[0], cols=m.shape[1],
                   entries=[(float(v.real), float(v.imag)) for v in m.reshape(-1)])


class RegionPayload(BaseModel):
    """Region selector: kind plus whichever parameters apply."""

    kind: str
    a: float | None = None
    b: float | None = None
    p: float | None = None


class CoefficientsPayload(BaseModel):
    """Explicit coefficient grid for raw solves."""

    coeffs: list[list[tuple[float, float]]]
    rhs_sign: int = 1

    @field_validator("rhs_sign")
    @classmethod
    def _sign(cls, v):
        if v not in (1, -1):
            raise ValueError("rhs_sign must be 1 or -1")
        return v

    def to_array(self):
        size = len(self.coeffs)
        if size == 0 or any(len(row) != size for row in self.coeffs):
            raise ValueError("coefficient grid must be square and nonempty")
        return np.array([[complex(re, im) for re, im in row] for row in self.coeffs],
                        dtype=np.complex128)


class SpectrumRequest(BaseModel):
    matrix: MatrixPayload


class SpectrumResponse(BaseModel):
    eigenvalues: list[tuple[float, float]]
    backward_error: float
    timings: dict[str, float]


class OracleInfo(BaseModel):
    eigenvalues: list[tuple[float, float]]
    in_region: bool
    margin: float
    agrees: bool


class CertifyRequest(BaseModel):
    matrix: MatrixPayload
    region: RegionPayload
    c: MatrixPayload | None = None
    oracle: bool = False
    cert_tol: float = 1e-9


class CertifyResponse(BaseModel):
    region: RegionPayload
    verdict: bool
    posdef: bool
    residual: float
    min_pivot: float
    direction: str
    condition_estimate: float
    h: MatrixPayload
    oracle: OracleInfo | None = None
    timings: dict[str, float]


class PerturbRequest(BaseModel):
    matrix_a: MatrixPayload
    region: RegionPayload
    matrix_b: MatrixPayload | None = None
    radius_only: bool = False


class PerturbResponse(BaseModel):
    region: RegionPayload
    verdict: bool | None
    condition_holds: bool | None = None
    margin: float | None = None
    radius: float | None = None
    b_norm: float | None = None
    base_residual: float
    base_min_pivot: float
    base_condition_estimate: float
    timings: dict[str, float]


class KreinInfo(BaseModel):
    min_abs_symbol: float
    tol: float
    offending: list[tuple[int, int, float]] = []


class SolveRequest(BaseModel):
    matrix_a: MatrixPayload
    matrix_y: MatrixPayload
    region: RegionPayload | None = None
    coefficients: CoefficientsPayload | None = None
    matrix_b: MatrixPayload | None = None
    method: str = "kron"
    quadrature_points: int = 64

    @field_validator("method")
    @classmethod
    def _method(cls, v):
        if v not in ("kron", "contour"):
            raise ValueError("method must be 'kron' or 'contour'")
        return v


class SolveResponse(BaseModel):
    h: MatrixPayload
    residual: float
    condition_estimate: float
    hermitized: bool
    asymmetry_dropped: float
    posdef: bool | None
    method: str
    quadrature_points: int | None = None
    krein: KreinInfo | None = None
    timings: dict[str, float]


class ErrorInfo(BaseModel):
    model_config = ConfigDict(extra="allow")

    code: str
    message: str


class HealthResponse(BaseModel):
    status: str
    version: str
