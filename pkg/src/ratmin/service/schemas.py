"""Request and response models for the fitting service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class FilterParamsModel(BaseModel):
    center: float = 0.4
    width: float = Field(default=0.2, ge=0.0)
    rise: float = Field(default=0.05, gt=0.0)


class BoundsModel(BaseModel):
    lower: float = Field(default=1.0, gt=0.0)
    upper: float = 1e6
    positive: bool = False

    @model_validator(mode="after")
    def _ordered(self):
        if self.upper < self.lower:
            raise ValueError("upper bound must be >= lower bound")
        return self


class ApproximantModel(BaseModel):
    """Wire form of a fitted approximant; matches the on-disk JSON schema."""

    domain: tuple[float, float]
    num: list[float]
    den: list[float]
    basis: str = "chebyshev-T"
    convention: str = "plain-sum"
    bounds: BoundsModel | None = None


class TablePoint(BaseModel):
    x: float
    y: float


class FitRequest(BaseModel):
    func: str | None = None
    table: list[TablePoint] | None = None
    num_degree: int = Field(ge=0)
    den_degree: int = Field(ge=0)
    lbound: float = Field(default=1.0, gt=0.0)
    ubound: float = 1e6
    positive: bool = False
    epsilon: float = Field(default=1e-12, gt=0.0)
    fit_points: int = Field(default=400, ge=2)
    eval_points: int = Field(default=1000, ge=2)
    grid: Literal["equidistant", "chebyshev"] = "equidistant"
    filter_params: FilterParamsModel | None = None
    include_plot: bool = False

    @model_validator(mode="after")
    def _one_source(self):
        if (self.func is None) == (self.table is None):
            raise ValueError("provide exactly one of 'func' or 'table'")
        return self


class FitResponse(BaseModel):
    record: dict


class ApplyRequest(BaseModel):
    approximant: ApproximantModel
    points: list[float] | None = None
    eval_points: int = Field(default=1000, ge=2)
    func: str | None = None
    filter_params: FilterParamsModel | None = None


class ApplyResponse(BaseModel):
    x: list[float]
    values: list[float]
    uniform_error: float | None = None


class SpectrumModel(BaseModel):
    kind: Literal["chebyshev", "uniform", "clustered", "explicit"]
    size: int | None = Field(default=None, ge=1)
    seed: int = 7
    eigenvalues: list[float] | None = None

    @model_validator(mode="after")
    def _sized(self):
        if self.kind == "explicit":
            if not self.eigenvalues:
                raise ValueError("explicit spectrum needs eigenvalues")
        elif self.size is None:
            raise ValueError(f"spectrum kind {self.kind!r} needs a size")
        return self


class MatrixSource(BaseModel):
    """Either a server-readable matrix file or a seeded synthetic spectrum."""

    path: str | None = None
    spectrum: SpectrumModel | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.path is None) == (self.spectrum is None):
            raise ValueError("provide exactly one of 'path' or 'spectrum'")
        return self


class MatFunRequest(BaseModel):
    approximant: ApproximantModel
    matrix: MatrixSource
    func: str | None = None
    filter_params: FilterParamsModel | None = None
    refine: bool = False
    out_path: str | None = None
    return_matrix: bool = False


class MatVecRequest(BaseModel):
    approximant: ApproximantModel
    matrix: MatrixSource | None = None
    vector_path: str | None = None
    vector_seed: int = 7
    func: str | None = None
    filter_params: FilterParamsModel | None = None
    bench: bool = False
    bench_sizes: list[int] = Field(default_factory=lambda: [100, 500, 1000, 2500])
    bench_reps: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _matrix_unless_bench(self):
        if not self.bench and self.matrix is None:
            raise ValueError("a matrix source is required unless bench is set")
        return self


class PsdRequest(BaseModel):
    matrix: MatrixSource
    approximant: ApproximantModel | None = None
    num_degree: int = Field(default=5, ge=0)
    den_degree: int = Field(default=5, ge=0)
    ubound: float = 100.0
    out_path: str | None = None
    return_matrix: bool = False


class RecordResponse(BaseModel):
    record: dict


class MatVecResponse(BaseModel):
    record: dict
    result: list[float] | None = None


class ReproduceRequest(BaseModel):
    experiments: list[str] | None = None
    seed: int = 7
    bench_sizes: list[int] | None = None
    bench_reps: int | None = None
    lp_cases: int | None = None
    include_plot: bool = False


class ReproduceResponse(BaseModel):
    records: list[dict]
    all_pass: bool


class FunctionInfo(BaseModel):
    id: str
    domain: tuple[float, float]


class HealthResponse(BaseModel):
    status: str
    version: str
