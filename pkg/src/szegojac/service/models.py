"""Request/response schemas for the HTTP service.

The JSON shapes mirror the library's own dict forms: a matrix is
{"a": [...], "b": [...]} with an implicit free tail, coefficients are
{"alpha": [...]}, and sequences are {"offset", "values", "tail"}.
"""

from typing import Optional

from pydantic import BaseModel, Field


class MatrixIn(BaseModel):
    a: list[float] = Field(default_factory=list)
    b: list[float] = Field(default_factory=list)
    tail_bound: float = 0.0


class MatrixOut(BaseModel):
    a: list[float]
    b: list[float]
    tail_bound: float = 0.0


class TolOverrides(BaseModel):
    """Optional tolerance overrides; unset fields keep the defaults."""
    tol_edge: Optional[float] = None
    tol_roundtrip: Optional[float] = None
    tol_report: Optional[float] = None
    tol_eig: Optional[float] = None
    grid_size: Optional[int] = None
    window_K: Optional[int] = None


class MFunctionRequest(BaseModel):
    matrix: MatrixIn
    z_re: float
    z_im: float = 0.0


class MFunctionResponse(BaseModel):
    m_re: float
    m_im: float


class EdgesRequest(BaseModel):
    matrix: MatrixIn
    method: str = "extrapolated-limit"
    tol: TolOverrides = Field(default_factory=TolOverrides)


class EdgeOut(BaseModel):
    edge: float
    value: Optional[float]
    method: str
    status: str
    error_estimate: float


class EdgesResponse(BaseModel):
    minus: EdgeOut
    plus: EdgeOut
    range_membership: list[str]


class EigsRequest(BaseModel):
    matrix: MatrixIn
    tol: TolOverrides = Field(default_factory=TolOverrides)


class EigsResponse(BaseModel):
    eigenvalues: list[float]


class GeronimusRequest(BaseModel):
    direction: str                    # "fwd" | "inv"
    variant: str                      # "e" | "o" | "+" | "-"
    alpha: Optional[list[float]] = None
    matrix: Optional[MatrixIn] = None
    tol: TolOverrides = Field(default_factory=TolOverrides)


class GeronimusResponse(BaseModel):
    variant: str
    matrix: Optional[MatrixOut] = None
    alpha: Optional[list[float]] = None
    alpha_minus1: Optional[float] = None


class SzegoMapRequest(BaseModel):
    direction: str                    # "fwd" | "inv"
    variant: str
    alpha: Optional[list[float]] = None    # fwd: coefficients of the circle measure
    x: Optional[list[float]] = None        # inv: line weight table
    v: Optional[list[float]] = None
    tol: TolOverrides = Field(default_factory=TolOverrides)


class SzegoMapResponse(BaseModel):
    variant: str
    x: Optional[list[float]] = None
    v: Optional[list[float]] = None
    theta: Optional[list[float]] = None
    w: Optional[list[float]] = None


class CommuteRequest(BaseModel):
    matrix: MatrixIn
    op: str                           # "add" | "remove"
    E: float
    gamma: Optional[float] = None     # required for add
    tol: TolOverrides = Field(default_factory=TolOverrides)


class CommuteResponse(BaseModel):
    matrix: MatrixOut
    op: str
    E: float
    gamma: float
    weight: float


class AsymptoticsRequest(BaseModel):
    matrix: MatrixIn
    E: float
    K: Optional[int] = None
    tol: TolOverrides = Field(default_factory=TolOverrides)


class AsymptoticsResponse(BaseModel):
    E: float
    kinds: list[str]
    k: list[int]
    psi_s: list[float]
    psi_b: list[float]
    ratio: list[float]
    residual: list[float]
    c_estimates: list[Optional[float]]
    residual_sup: float


class CheckRequest(BaseModel):
    direction: str                    # "1to2" | "2to1"
    matrix: Optional[MatrixIn] = None      # 1to2 input
    alpha: Optional[list[float]] = None    # 2to1 input
    variant: Optional[str] = None          # 2to1 input
    tol: TolOverrides = Field(default_factory=TolOverrides)


class CheckResponse(BaseModel):
    report: dict
    status: str
