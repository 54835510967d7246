"""FastAPI service exposing the fitting and matrix-function operations.

The CLI drives this app in-process by default; `ratmin serve` hosts it with
uvicorn for remote clients. Matrix files referenced by path are read from
the server's filesystem.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ratmin import __version__
from ratmin.cheb import equidistant_grid
from ratmin.experiments import (
    BENCH_REPS,
    BENCH_SIZES,
    benchmark_matvec,
    fit_record,
    list_experiments,
    run_experiment,
    random_unit_vector,
    spectrum_eigenvalues,
    table_fit_record,
)
from ratmin.funcs import FilterParams, builtin, builtin_ids
from ratmin.lp import SimplexCyclingError
from ratmin.matfun import (
    SingularDenominatorError,
    SpectrumSpec,
    cond_check,
    exact_matrix_function,
    frobenius_rel_error,
    load_matrix_bin,
    load_matrix_csv,
    make_normal_matrix,
    random_orthogonal,
    rational_apply,
    rational_apply_vec,
    save_matrix_bin,
    save_matrix_csv,
)
from ratmin.minimax import UnsatisfiableProblemError
from ratmin.rational import DegenerateDenominatorError, RationalApproximant, uniform_error
from ratmin.service import schemas

NUMERICAL_FAILURES = (
    SimplexCyclingError,
    SingularDenominatorError,
    DegenerateDenominatorError,
    UnsatisfiableProblemError,
    np.linalg.LinAlgError,
)


def _filter_params(model: schemas.FilterParamsModel | None) -> FilterParams | None:
    if model is None:
        return None
    return FilterParams(model.center, model.width, model.rise)


def _approximant(model: schemas.ApproximantModel) -> RationalApproximant:
    return RationalApproximant.from_dict(model.model_dump(exclude_none=True))


def _load_matrix(source: schemas.MatrixSource):
    """Returns (matrix, spectrum_spec_or_None); the spec is known for synthetic sources."""
    if source.path is not None:
        path = Path(source.path)
        if not path.exists():
            raise ValueError(f"matrix file not found: {path}")
        matrix = load_matrix_bin(path) if path.suffix == ".bin" else load_matrix_csv(path)
        return matrix, None
    model = source.spectrum
    if model.kind == "explicit":
        eig = np.asarray(model.eigenvalues, dtype=float)
    else:
        eig = spectrum_eigenvalues(model.kind, model.size, seed=model.seed)
    spec = SpectrumSpec(eig, seed=model.seed)
    return make_normal_matrix(spec), spec


def _save_matrix(path: str, matrix) -> None:
    if Path(path).suffix == ".bin":
        save_matrix_bin(path, matrix)
    else:
        save_matrix_csv(path, matrix)


def create_app() -> FastAPI:
    app = FastAPI(
        title="ratmin service",
        description="Bounded-denominator minimax rational approximation "
                    "and matrix-function evaluation",
        version=__version__,
    )

    @app.exception_handler(ValueError)
    async def usage_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc), "kind": "usage"})

    for failure in NUMERICAL_FAILURES:
        @app.exception_handler(failure)
        async def numerical_error(request: Request, exc: Exception):
            return JSONResponse(
                status_code=422,
                content={"detail": f"{type(exc).__name__}: {exc}", "kind": "numerical"},
            )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.get("/functions", response_model=list[schemas.FunctionInfo])
    def functions():
        out = []
        for func_id in builtin_ids():
            _, domain = builtin(func_id)
            out.append(schemas.FunctionInfo(id=func_id, domain=(domain.a, domain.b)))
        return out

    @app.get("/experiments", response_model=list[str])
    def experiments():
        return list_experiments()

    @app.post("/fit", response_model=schemas.FitResponse)
    def fit_endpoint(req: schemas.FitRequest):
        if req.table is not None:
            xs = [p.x for p in req.table]
            ys = [p.y for p in req.table]
            record, _ = table_fit_record(
                xs, ys, req.num_degree, req.den_degree, lbound=req.lbound,
                ubound=req.ubound, positive=req.positive, epsilon=req.epsilon,
                include_plot=req.include_plot)
        else:
            record, *_rest = fit_record(
                req.func, req.num_degree, req.den_degree, lbound=req.lbound,
                ubound=req.ubound, positive=req.positive, epsilon=req.epsilon,
                fit_points=req.fit_points, eval_points=req.eval_points,
                grid_kind=req.grid, params=_filter_params(req.filter_params),
                include_plot=req.include_plot)
        return schemas.FitResponse(record=record)

    @app.post("/apply", response_model=schemas.ApplyResponse)
    def apply_endpoint(req: schemas.ApplyRequest):
        r = _approximant(req.approximant)
        if req.points is not None:
            x = np.asarray(req.points, dtype=float)
        else:
            x = equidistant_grid(r.domain, req.eval_points)
        values = np.asarray(r(x), dtype=float)
        err = None
        if req.func is not None:
            f, _ = builtin(req.func, _filter_params(req.filter_params))
            err = float(np.max(np.abs(f(x) - values)))
        return schemas.ApplyResponse(x=x.tolist(), values=values.tolist(), uniform_error=err)

    @app.post("/matfun", response_model=schemas.RecordResponse)
    def matfun_endpoint(req: schemas.MatFunRequest):
        r = _approximant(req.approximant)
        matrix, spec = _load_matrix(req.matrix)
        t0 = time.perf_counter()
        report = rational_apply(r, matrix, refine=req.refine)
        seconds = time.perf_counter() - t0
        record = {
            "command": "matfun",
            "params": req.model_dump(exclude={"approximant"}, exclude_none=True),
            "metrics": {
                "matrix_size": int(matrix.shape[0]),
                "lu_residual": report.residual,
                "cond_bound": report.cond_bound,
            },
            "timings": {"apply_seconds": seconds},
        }
        if spec is not None:
            if r.bounds is not None:
                record["metrics"]["cond_q"] = cond_check(r, r.bounds, spec)
            if req.func is not None:
                f, _ = builtin(req.func, _filter_params(req.filter_params))
                exact = exact_matrix_function(f, spec)
                record["metrics"]["frobenius_rel_error"] = frobenius_rel_error(report.result, exact)
        if req.out_path:
            _save_matrix(req.out_path, report.result)
            record["out_path"] = req.out_path
        if req.return_matrix:
            record["result"] = report.result.tolist()
        return schemas.RecordResponse(record=record)

    @app.post("/matvec", response_model=schemas.MatVecResponse)
    def matvec_endpoint(req: schemas.MatVecRequest):
        r = _approximant(req.approximant)
        record = {
            "command": "matvec",
            "params": req.model_dump(exclude={"approximant"}, exclude_none=True),
            "metrics": {},
            "timings": {},
        }
        result = None
        if req.matrix is not None:
            matrix, spec = _load_matrix(req.matrix)
            if req.vector_path is not None:
                v = np.loadtxt(req.vector_path, delimiter=",", ndmin=1)
            else:
                v = random_unit_vector(matrix.shape[0], seed=req.vector_seed)
            if v.shape != (matrix.shape[0],):
                raise ValueError(f"vector of length {v.size} does not match k={matrix.shape[0]}")
            t0 = time.perf_counter()
            report = rational_apply_vec(r, matrix, v)
            record["timings"]["matvec_seconds"] = time.perf_counter() - t0
            record["metrics"].update({
                "matrix_size": int(matrix.shape[0]),
                "lu_residual": report.residual,
                "cond_bound": report.cond_bound,
            })
            if spec is not None and req.func is not None:
                f, _ = builtin(req.func, _filter_params(req.filter_params))
                q = random_orthogonal(spec.dim, spec.seed)
                exact = q @ (np.asarray(f(spec.eigenvalues)) * (q.T @ v))
                record["metrics"]["rel_error_vs_exact"] = float(
                    np.linalg.norm(report.result - exact) / np.linalg.norm(v))
            result = report.result.tolist()
        if req.bench:
            record["metrics"]["bench"] = benchmark_matvec(
                r, sizes=tuple(req.bench_sizes), reps=req.bench_reps)
        return schemas.MatVecResponse(record=record, result=result)

    @app.post("/psd", response_model=schemas.RecordResponse)
    def psd_endpoint(req: schemas.PsdRequest):
        matrix, spec = _load_matrix(req.matrix)
        if not np.allclose(matrix, matrix.T, atol=1e-10):
            raise ValueError("PSD projection expects a symmetric matrix")
        if req.approximant is not None:
            r = _approximant(req.approximant)
            fit_rec = None
        else:
            fit_rec, report, *_rest = fit_record(
                "relu", req.num_degree, req.den_degree, ubound=req.ubound, positive=True)
            r = report.approximant
        t0 = time.perf_counter()
        projected = rational_apply(r, matrix).result
        seconds = time.perf_counter() - t0
        record = {
            "command": "psd",
            "params": req.model_dump(exclude={"approximant"}, exclude_none=True),
            "metrics": {"matrix_size": int(matrix.shape[0])},
            "timings": {"apply_seconds": seconds},
            "approximant": r.to_dict(),
        }
        if fit_rec is not None:
            record["metrics"]["fit_uniform_error"] = fit_rec["metrics"]["uniform_error"]
        if spec is not None:
            q = random_orthogonal(spec.dim, spec.seed)
            result_eig = np.diag(q.T @ projected @ q)
            deviation = float(np.max(np.abs(result_eig - np.maximum(0.0, spec.eigenvalues))))
            err = record["metrics"].get("fit_uniform_error")
            record["metrics"]["max_eigenvalue_deviation"] = deviation
            if err is not None:
                record["metrics"]["eigenvalues_below_minus_error"] = int(
                    np.sum(result_eig < -err))
        if req.out_path:
            _save_matrix(req.out_path, projected)
            record["out_path"] = req.out_path
        if req.return_matrix:
            record["result"] = projected.tolist()
        return schemas.RecordResponse(record=record)

    @app.post("/reproduce", response_model=schemas.ReproduceResponse)
    def reproduce_endpoint(req: schemas.ReproduceRequest):
        names = req.experiments or list_experiments()
        unknown = sorted(set(names) - set(list_experiments()))
        if unknown:
            raise ValueError(f"unknown experiments {unknown}; know {list_experiments()}")
        kwargs = {"seed": req.seed, "include_plot": req.include_plot}
        records = []
        for name in names:
            extra = dict(kwargs)
            if name == "bell-matvec":
                extra["sizes"] = tuple(req.bench_sizes or BENCH_SIZES)
                extra["reps"] = req.bench_reps or BENCH_REPS
            if name == "lp-suite" and req.lp_cases:
                extra["cases"] = req.lp_cases
            for record in run_experiment(name, **extra):
                record.setdefault("experiment", name)
                records.append(record)
        return schemas.ReproduceResponse(
            records=records, all_pass=all(r.get("pass", True) for r in records))

    return app


app = create_app()
