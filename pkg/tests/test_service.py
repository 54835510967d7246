import numpy as np
import pytest
from fastapi.testclient import TestClient

from ratmin.matfun import save_matrix_csv
from ratmin.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def small_fit(client):
    response = client.post("/fit", json={
        "func": "relu", "num_degree": 2, "den_degree": 2,
        "ubound": 10.0, "fit_points": 60, "eval_points": 100,
    })
    assert response.status_code == 200
    return response.json()["record"]


class TestMeta:
    def test_health(self, client):
        doc = client.get("/health").json()
        assert doc["status"] == "ok"

    def test_functions_list_domains(self, client):
        doc = {entry["id"]: entry["domain"] for entry in client.get("/functions").json()}
        assert doc["f1"] == [0.0, 3.0]
        assert doc["f4"] == [-0.5, 0.5]

    def test_experiments_listed(self, client):
        names = client.get("/experiments").json()
        assert "f1-sweep" in names and "lp-suite" in names


class TestFit:
    def test_returns_record_with_approximant(self, small_fit):
        assert small_fit["metrics"]["uniform_error"] < 0.08
        approx = small_fit["approximant"]
        assert approx["basis"] == "chebyshev-T"
        assert len(approx["num"]) == 3 and len(approx["den"]) == 3
        assert approx["bounds"]["upper"] == 10.0

    def test_custom_table(self, client):
        xs = np.linspace(0.0, 1.0, 30)
        table = [{"x": float(x), "y": float(x * x)} for x in xs]
        response = client.post("/fit", json={
            "table": table, "num_degree": 2, "den_degree": 0, "ubound": 2.0,
        })
        assert response.status_code == 200
        assert response.json()["record"]["metrics"]["uniform_error"] < 1e-9

    def test_requires_exactly_one_source(self, client):
        response = client.post("/fit", json={"num_degree": 1, "den_degree": 1})
        assert response.status_code == 422

    def test_unknown_function_is_usage_error(self, client):
        response = client.post("/fit", json={
            "func": "f17", "num_degree": 1, "den_degree": 1,
        })
        assert response.status_code == 400
        assert response.json()["kind"] == "usage"

    def test_plot_included_on_request(self, client):
        response = client.post("/fit", json={
            "func": "relu", "num_degree": 1, "den_degree": 1,
            "fit_points": 30, "eval_points": 40, "include_plot": True,
        })
        plot = response.json()["record"]["plot"]
        assert plot["columns"] == ["x", "f", "r", "error"]
        assert len(plot["rows"]) == 40


class TestApply:
    def test_points_and_error(self, client, small_fit):
        response = client.post("/apply", json={
            "approximant": small_fit["approximant"],
            "points": [0.5, -0.5], "func": "relu",
        })
        doc = response.json()
        assert doc["x"] == [0.5, -0.5]
        assert doc["values"][0] == pytest.approx(0.5, abs=0.05)
        assert doc["uniform_error"] is not None

    def test_default_grid_over_domain(self, client, small_fit):
        doc = client.post("/apply", json={
            "approximant": small_fit["approximant"], "eval_points": 11,
        }).json()
        assert len(doc["x"]) == 11
        assert doc["x"][0] == -1.0 and doc["x"][-1] == 1.0
        assert doc["uniform_error"] is None


class TestMatFun:
    def test_spectrum_source_with_exact_comparison(self, client, small_fit):
        response = client.post("/matfun", json={
            "approximant": small_fit["approximant"],
            "matrix": {"spectrum": {"kind": "chebyshev", "size": 16, "seed": 5}},
            "func": "relu",
        })
        metrics = response.json()["record"]["metrics"]
        assert metrics["matrix_size"] == 16
        assert metrics["lu_residual"] < 1e-12
        assert metrics["cond_q"] <= 10.0 * (1 + 1e-8)
        assert metrics["frobenius_rel_error"] < 0.2

    def test_file_source(self, client, small_fit, tmp_path):
        a = np.diag(np.linspace(-0.9, 0.9, 8))
        path = tmp_path / "a.csv"
        save_matrix_csv(path, a)
        response = client.post("/matfun", json={
            "approximant": small_fit["approximant"],
            "matrix": {"path": str(path)},
            "return_matrix": True,
        })
        record = response.json()["record"]
        assert record["metrics"]["matrix_size"] == 8
        result = np.array(record["result"])
        assert result.shape == (8, 8)

    def test_missing_file_is_usage_error(self, client, small_fit):
        response = client.post("/matfun", json={
            "approximant": small_fit["approximant"],
            "matrix": {"path": "/nonexistent.csv"},
        })
        assert response.status_code == 400

    def test_singular_denominator_is_numerical_error(self, client):
        # q(t) = t vanishes at the eigenvalue 0
        approx = {"domain": [-1.0, 1.0], "num": [1.0], "den": [0.0, 1.0]}
        response = client.post("/matfun", json={
            "approximant": approx,
            "matrix": {"spectrum": {"kind": "explicit", "eigenvalues": [0.0, 0.5], "seed": 1}},
        })
        assert response.status_code == 422
        assert response.json()["kind"] == "numerical"


class TestMatVec:
    def test_matches_exact_filtered_vector(self, client, small_fit):
        response = client.post("/matvec", json={
            "approximant": small_fit["approximant"],
            "matrix": {"spectrum": {"kind": "uniform", "size": 24, "seed": 9}},
            "func": "relu",
        })
        doc = response.json()
        assert len(doc["result"]) == 24
        assert doc["record"]["metrics"]["rel_error_vs_exact"] < 0.1

    def test_bench_reports_both_paths(self, client, small_fit):
        response = client.post("/matvec", json={
            "approximant": small_fit["approximant"],
            "bench": True, "bench_sizes": [40], "bench_reps": 2,
        })
        bench = response.json()["record"]["metrics"]["bench"]
        assert bench[0]["size"] == 40
        assert bench[0]["paths_rel_difference"] < 1e-8


class TestPsd:
    def test_projects_spectrum(self, client):
        response = client.post("/psd", json={
            "matrix": {"spectrum": {"kind": "clustered", "size": 20, "seed": 3}},
            "num_degree": 2, "den_degree": 2, "ubound": 10.0,
        })
        metrics = response.json()["record"]["metrics"]
        assert metrics["max_eigenvalue_deviation"] < 0.1
        assert metrics["eigenvalues_below_minus_error"] == 0

    def test_rejects_nonsymmetric(self, client, small_fit, tmp_path):
        a = np.triu(np.ones((4, 4)))
        path = tmp_path / "ns.csv"
        save_matrix_csv(path, a)
        response = client.post("/psd", json={
            "matrix": {"path": str(path)},
            "approximant": small_fit["approximant"],
        })
        assert response.status_code == 400


class TestReproduce:
    def test_lp_suite_subset(self, client):
        response = client.post("/reproduce", json={"experiments": ["lp-suite"], "lp_cases": 120})
        doc = response.json()
        assert doc["all_pass"] is True
        assert doc["records"][0]["experiment"] == "lp-suite"

    def test_unknown_experiment(self, client):
        response = client.post("/reproduce", json={"experiments": ["warp-drive"]})
        assert response.status_code == 400
