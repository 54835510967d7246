"""Command-line client for the fitting service.

Commands marshal their flags into service requests. By default the requests
run against the ASGI app in-process (no server needed); pass --server URL to
talk to a remote `ratmin serve` instance instead. Exit codes: 0 success,
1 tolerance failure in reproduce, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class ClientError(Exception):
    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def _request(server: str | None, method: str, path: str, payload=None):
    if server:
        response = httpx.request(method, server.rstrip("/") + path, json=payload, timeout=None)
    else:
        from ratmin.service.app import app

        async def go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport, base_url="http://ratmin",
                                         timeout=None) as client:
                return await client.request(method, path, json=payload)

        response = asyncio.run(go())
    if response.status_code == 200:
        return response.json()
    try:
        body = response.json()
    except Exception:
        body = {"detail": response.text}
    detail = body.get("detail", body)
    kind = body.get("kind", "usage" if response.status_code in (400, 422) else "numerical")
    code = EXIT_NUMERICAL if kind == "numerical" else EXIT_USAGE
    raise ClientError(f"service error ({response.status_code}): {detail}", code)


# -- flag plumbing -----------------------------------------------------------


def _parse_degrees(text: str):
    try:
        n, m = (int(part) for part in text.split(","))
    except Exception:
        raise ClientError(f"--deg expects 'n,m' (numerator,denominator), got {text!r}", EXIT_USAGE)
    return n, m


def _read_table(path: str):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            x, y = line.split(",")
            rows.append({"x": float(x), "y": float(y)})
    return rows


def _fit_payload(args) -> dict:
    n, m = _parse_degrees(args.deg)
    payload = {
        "num_degree": n,
        "den_degree": m,
        "lbound": args.lbound,
        "ubound": args.ubound,
        "positive": args.positive,
        "epsilon": args.eps,
        "fit_points": args.fit_points,
        "eval_points": args.eval_points,
        "grid": args.grid,
        "include_plot": args.csv is not None,
    }
    if args.table:
        payload["table"] = _read_table(args.table)
    elif args.func:
        payload["func"] = args.func
    else:
        raise ClientError("one of --func or --table is required", EXIT_USAGE)
    return payload


def _matrix_payload(args) -> dict:
    if args.matrix:
        return {"path": args.matrix}
    if args.spectrum:
        if args.spectrum == "file":
            if not args.spectrum_file:
                raise ClientError("--spectrum file needs --spectrum-file <path>", EXIT_USAGE)
            eigenvalues = [float(v) for v in Path(args.spectrum_file).read_text().split()]
            return {"spectrum": {"kind": "explicit", "eigenvalues": eigenvalues, "seed": args.seed}}
        if not args.size:
            raise ClientError(f"--spectrum {args.spectrum} needs --size", EXIT_USAGE)
        return {"spectrum": {"kind": args.spectrum, "size": args.size, "seed": args.seed}}
    raise ClientError("a matrix source is required: --matrix or --spectrum", EXIT_USAGE)


def _load_approximant(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ClientError(f"approximant file not found: {path}", EXIT_USAGE)
    except json.JSONDecodeError as exc:
        raise ClientError(f"approximant file is not valid JSON: {exc}", EXIT_USAGE)


def _write_json(path: str, doc) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(path).with_suffix(Path(path).suffix + ".tmp")
    tmp.write_text(json.dumps(doc, indent=2) + "\n")
    tmp.replace(path)


def _write_plot_csv(path: str, plot: dict) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(plot["columns"])
        writer.writerows(plot["rows"])


# -- commands ----------------------------------------------------------------


def cmd_fit(args) -> int:
    data = _request(args.server, "POST", "/fit", _fit_payload(args))
    record = data["record"]
    metrics = record["metrics"]
    print(f"uniform error  {metrics['uniform_error']:.6g}")
    print(f"C_r (fit grid) {metrics['c_r_fit_grid']:.6g}")
    print(f"bracket        [{metrics['z_lower']:.6g}, {metrics['z_upper']:.6g}] "
          f"in {metrics['iterations']} iterations")
    if args.approximant_out:
        _write_json(args.approximant_out, record["approximant"])
        print(f"approximant -> {args.approximant_out}")
    if args.csv:
        _write_plot_csv(args.csv, record.pop("plot"))
        print(f"plot data   -> {args.csv}")
    if args.out:
        _write_json(args.out, record)
        print(f"record      -> {args.out}")
    return EXIT_OK


def cmd_apply(args) -> int:
    payload = {
        "approximant": _load_approximant(args.approximant),
        "eval_points": args.eval_points,
    }
    if args.points:
        payload["points"] = [float(p) for p in args.points.split(",")]
    if args.func:
        payload["func"] = args.func
    data = _request(args.server, "POST", "/apply", payload)
    if data["uniform_error"] is not None:
        print(f"uniform error vs {args.func}: {data['uniform_error']:.6g}")
    if args.csv:
        rows = list(zip(data["x"], data["values"]))
        _write_plot_csv(args.csv, {"columns": ["x", "r"], "rows": rows})
        print(f"values -> {args.csv}")
    else:
        for x, v in zip(data["x"][:8], data["values"][:8]):
            print(f"r({x:.6g}) = {v:.9g}")
        if len(data["x"]) > 8:
            print(f"... {len(data['x'])} points total (use --csv to save them)")
    if args.out:
        _write_json(args.out, data)
    return EXIT_OK


def cmd_matfun(args) -> int:
    payload = {
        "approximant": _load_approximant(args.approximant),
        "matrix": _matrix_payload(args),
        "refine": args.refine,
    }
    if args.func:
        payload["func"] = args.func
    if args.matrix_out:
        payload["out_path"] = args.matrix_out
    data = _request(args.server, "POST", "/matfun", payload)
    record = data["record"]
    for key, value in record["metrics"].items():
        print(f"{key:24} {value:.6g}" if isinstance(value, float) else f"{key:24} {value}")
    if args.out:
        _write_json(args.out, record)
    return EXIT_OK


def cmd_matvec(args) -> int:
    payload = {
        "approximant": _load_approximant(args.approximant),
        "vector_seed": args.seed,
        "bench": args.bench,
        "bench_reps": args.bench_reps,
    }
    if args.bench_sizes:
        payload["bench_sizes"] = [int(s) for s in args.bench_sizes.split(",")]
    if args.matrix or args.spectrum:
        payload["matrix"] = _matrix_payload(args)
    if args.vector:
        payload["vector_path"] = args.vector
    if args.func:
        payload["func"] = args.func
    data = _request(args.server, "POST", "/matvec", payload)
    record = data["record"]
    for key, value in record["metrics"].items():
        if key == "bench":
            print("bench (mean seconds over repetitions):")
            for row in value:
                print(f"  k={row['size']:5d}  matvec {row['matvec_mean_seconds']:.4f}"
                      f"  full {row['full_mean_seconds']:.4f}")
        else:
            print(f"{key:24} {value:.6g}" if isinstance(value, float) else f"{key:24} {value}")
    if args.result_out and data.get("result") is not None:
        _write_plot_csv(args.result_out,
                        {"columns": ["value"], "rows": [[v] for v in data["result"]]})
    if args.out:
        _write_json(args.out, record)
    return EXIT_OK


def cmd_psd(args) -> int:
    payload = {"matrix": _matrix_payload(args)}
    if args.approximant:
        payload["approximant"] = _load_approximant(args.approximant)
    else:
        n, m = _parse_degrees(args.deg)
        payload.update({"num_degree": n, "den_degree": m, "ubound": args.ubound})
    if args.matrix_out:
        payload["out_path"] = args.matrix_out
    data = _request(args.server, "POST", "/psd", payload)
    record = data["record"]
    for key, value in record["metrics"].items():
        print(f"{key:32} {value:.6g}" if isinstance(value, float) else f"{key:32} {value}")
    if args.out:
        _write_json(args.out, record)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.list:
        for name in _request(args.server, "GET", "/experiments"):
            print(name)
        return EXIT_OK
    payload = {"seed": args.seed, "include_plot": args.out is not None}
    if args.experiment:
        payload["experiments"] = args.experiment.split(",")
    if args.bench_sizes:
        payload["bench_sizes"] = [int(s) for s in args.bench_sizes.split(",")]
    if args.bench_reps:
        payload["bench_reps"] = args.bench_reps
    if args.lp_cases:
        payload["lp_cases"] = args.lp_cases
    data = _request(args.server, "POST", "/reproduce", payload)

    print(f"{'experiment':14} {'check':58} {'status':>6}")
    failures = 0
    for idx, record in enumerate(data["records"]):
        name = record.get("experiment", "?")
        if args.out:
            out_dir = Path(args.out)
            _write_json(out_dir / f"{name}-{idx:02d}.json",
                        {k: v for k, v in record.items() if k != "plot"})
            if "plot" in record:
                _write_plot_csv(out_dir / f"{name}-{idx:02d}.csv", record["plot"])
        for check in record.get("checks", []):
            status = "pass" if check["pass"] else "FAIL"
            if not check["pass"]:
                failures += 1
            detail = check["quantity"]
            if "measured" in check and "reference" in check:
                detail += f" [{check['measured']:.4g} vs {check['reference']:.4g}]"
            elif "measured" in check and "bound" in check:
                detail += f" [{check['measured']:.4g} {check.get('sense', '<=')} {check['bound']:.4g}]"
            print(f"{name:14} {detail:58} {status:>6}")
    if args.out:
        print(f"records -> {args.out}")
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_TOLERANCE
    print("all checks passed")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("ratmin.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_fit_flags(p):
    p.add_argument("--func", help="builtin target function id")
    p.add_argument("--table", help="CSV file of x,f(x) samples (custom target)")
    p.add_argument("--deg", default="5,5", help="degrees n,m (numerator,denominator)")
    p.add_argument("--lbound", type=float, default=1.0, help="denominator lower bound")
    p.add_argument("--ubound", type=float, default=1e6, help="denominator upper bound")
    p.add_argument("--positive", action="store_true", help="constrain the numerator to be >= 0")
    p.add_argument("--eps", type=float, default=1e-12, help="bisection precision")
    p.add_argument("--fit-points", type=int, default=400)
    p.add_argument("--eval-points", type=int, default=1000)
    p.add_argument("--grid", choices=("equidistant", "chebyshev"), default="equidistant")


def _add_matrix_flags(p):
    p.add_argument("--matrix", help="matrix file (.csv or .bin)")
    p.add_argument("--spectrum", choices=("chebyshev", "uniform", "clustered", "file"))
    p.add_argument("--spectrum-file", help="eigenvalue list file for --spectrum file")
    p.add_argument("--size", type=int, help="matrix dimension for synthetic spectra")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratmin",
        description="Minimax rational approximation with denominator bounds, "
                    "applied to matrix functions.")
    parser.add_argument("--server", help="remote service URL (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a rational approximant")
    _add_fit_flags(p)
    p.add_argument("--out", help="write the full run record JSON here")
    p.add_argument("--approximant-out", help="write the approximant JSON here")
    p.add_argument("--csv", help="write (x, f, r, error) plot data here")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("apply", help="evaluate a saved approximant")
    p.add_argument("--approximant", required=True, help="approximant JSON file")
    p.add_argument("--points", help="comma-separated evaluation points")
    p.add_argument("--eval-points", type=int, default=1000)
    p.add_argument("--func", help="builtin function to report the uniform error against")
    p.add_argument("--out", help="write the evaluation JSON here")
    p.add_argument("--csv", help="write (x, r) values here")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("matfun", help="apply an approximant to a matrix: r(A)")
    p.add_argument("--approximant", required=True)
    _add_matrix_flags(p)
    p.add_argument("--func", help="compare against the exact matrix function (synthetic spectra)")
    p.add_argument("--refine", action="store_true", help="one step of iterative refinement")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--matrix-out", help="write r(A) to this matrix file")
    p.add_argument("--out", help="write the run record JSON here")
    p.set_defaults(handler=cmd_matfun)

    p = sub.add_parser("matvec", help="apply r(A) to a vector without forming r(A)")
    p.add_argument("--approximant", required=True)
    _add_matrix_flags(p)
    p.add_argument("--vector", help="vector file (one value per line)")
    p.add_argument("--func", help="compare against the exact filtered vector")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--bench", action="store_true",
                   help="time the matvec path against explicit r(A) formation")
    p.add_argument("--bench-sizes", help="comma-separated sizes (default 100,500,1000,2500)")
    p.add_argument("--bench-reps", type=int, default=10)
    p.add_argument("--result-out", help="write the result vector here (CSV)")
    p.add_argument("--out", help="write the run record JSON here")
    p.set_defaults(handler=cmd_matvec)

    p = sub.add_parser("psd", help="project a symmetric matrix toward the PSD cone")
    _add_matrix_flags(p)
    p.add_argument("--approximant", help="nonnegative approximant JSON (default: fit one)")
    p.add_argument("--deg", default="5,5")
    p.add_argument("--ubound", type=float, default=100.0)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--matrix-out", help="write the projected matrix here")
    p.add_argument("--out", help="write the run record JSON here")
    p.set_defaults(handler=cmd_psd)

    p = sub.add_parser("reproduce", help="run the reproduction experiment suite")
    p.add_argument("--experiment", help="comma-separated experiment ids (default: all)")
    p.add_argument("--list", action="store_true", help="list experiments without running")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--bench-sizes", help="override benchmark sizes")
    p.add_argument("--bench-reps", type=int)
    p.add_argument("--lp-cases", type=int)
    p.add_argument("--out", help="directory for per-experiment records and plot CSVs")
    p.set_defaults(handler=cmd_reproduce)

    p = sub.add_parser("serve", help="host the service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ClientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
