import numpy as np
import pytest

from ratmin.cheb import Domain, cheb_nodes, clenshaw
from ratmin.matfun import (
    MatApplyReport,
    SingularDenominatorError,
    SpectrumSpec,
    cond_check,
    exact_matrix_function,
    frobenius_rel_error,
    load_matrix_bin,
    load_matrix_csv,
    make_normal_matrix,
    map_matrix,
    matrix_cheb_poly,
    matrix_cheb_poly_vec,
    random_orthogonal,
    rational_apply,
    rational_apply_vec,
    save_matrix_bin,
    save_matrix_csv,
)
from ratmin.rational import BoundSpec, RationalApproximant


def approximant(num, den, domain=(-1.0, 1.0), bounds=None):
    return RationalApproximant(Domain(*domain), num, den, bounds)


class TestMapMatrix:
    def test_identity_domain(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(map_matrix(Domain(-1, 1), a), a)

    def test_midpoint_to_zero(self):
        a = 1.5 * np.eye(3)
        np.testing.assert_allclose(map_matrix(Domain(0, 3), a), np.zeros((3, 3)), atol=1e-15)

    def test_endpoints(self):
        a = np.diag([0.0, 3.0])
        np.testing.assert_allclose(map_matrix(Domain(0, 3), a), np.diag([-1.0, 1.0]), atol=1e-15)

    def test_requires_square(self):
        with pytest.raises(ValueError):
            map_matrix(Domain(-1, 1), np.ones((2, 3)))


class TestMatrixChebPoly:
    def test_constant(self):
        a = np.random.default_rng(0).standard_normal((4, 4))
        np.testing.assert_array_equal(matrix_cheb_poly([1.0], a, Domain(-1, 1)), np.eye(4))

    def test_linear_is_matrix_itself(self):
        a = np.random.default_rng(1).standard_normal((5, 5))
        np.testing.assert_allclose(matrix_cheb_poly([0.0, 1.0], a, Domain(-1, 1)), a, atol=1e-14)

    def test_t2_on_diagonal(self):
        a = np.diag([0.5, -0.5])
        out = matrix_cheb_poly([0.0, 0.0, 1.0], a, Domain(-1, 1))
        np.testing.assert_allclose(out, np.diag([-0.5, -0.5]), atol=1e-14)

    def test_matches_scalar_clenshaw_on_diagonals(self):
        rng = np.random.default_rng(2)
        t = rng.uniform(-1, 1, size=12)
        for deg in (0, 1, 2, 7, 15):
            c = rng.standard_normal(deg + 1)
            out = matrix_cheb_poly(c, np.diag(t), Domain(-1, 1))
            np.testing.assert_allclose(np.diag(out), clenshaw(c, t), atol=1e-11)
            off = out - np.diag(np.diag(out))
            assert np.max(np.abs(off)) < 1e-12

    def test_domain_mapping(self):
        rng = np.random.default_rng(3)
        d = Domain(0.0, 3.0)
        t = rng.uniform(0, 3, size=8)
        c = rng.standard_normal(6)
        out = matrix_cheb_poly(c, np.diag(t), d)
        from ratmin.cheb import map_to_ref

        np.testing.assert_allclose(np.diag(out), clenshaw(c, map_to_ref(d, t)), atol=1e-12)


class TestMatrixChebPolyVec:
    def test_constant(self):
        v = np.arange(4.0)
        a = np.random.default_rng(0).standard_normal((4, 4))
        np.testing.assert_array_equal(matrix_cheb_poly_vec([1.0], a, v, Domain(-1, 1)), v)

    def test_linear(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((5, 5))
        v = rng.standard_normal(5)
        np.testing.assert_allclose(matrix_cheb_poly_vec([0.0, 1.0], a, v, Domain(-1, 1)), a @ v, atol=1e-13)

    def test_column_extraction_matches_full_matrix(self):
        rng = np.random.default_rng(4)
        a = rng.uniform(-0.5, 0.5, size=(20, 20))
        c = rng.standard_normal(11)
        full = matrix_cheb_poly(c, a, Domain(-1, 1))
        e1 = np.zeros(20)
        e1[0] = 1.0
        np.testing.assert_allclose(matrix_cheb_poly_vec(c, a, e1, Domain(-1, 1)), full[:, 0], atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matrix_cheb_poly_vec([1.0], np.eye(3), np.ones(4), Domain(-1, 1))


class TestRationalApply:
    def test_scalar_matrix_consistency(self):
        r = approximant([0.3, 0.2], [2.0, 0.5])
        c = 0.37
        report = rational_apply(r, c * np.eye(6))
        np.testing.assert_allclose(report.result, float(r(c)) * np.eye(6), atol=1e-12)
        assert report.residual < 1e-12

    def test_diagonal_matches_scalar(self):
        rng = np.random.default_rng(5)
        lam = rng.uniform(-1, 1, size=30)
        r = approximant(rng.standard_normal(5), [3.0, 0.4, 0.2], bounds=BoundSpec(1.0, 8.0))
        report = rational_apply(r, np.diag(lam))
        np.testing.assert_allclose(np.diag(report.result), r(lam), atol=1e-10)
        assert report.cond_bound == pytest.approx(8.0)

    def test_similarity_equivariance(self):
        rng = np.random.default_rng(6)
        lam = rng.uniform(-1, 1, size=40)
        spec = SpectrumSpec(lam, seed=11)
        a = make_normal_matrix(spec)
        r = approximant(rng.standard_normal(4), [2.5, 0.3])
        report = rational_apply(r, a)
        expected = exact_matrix_function(lambda t: np.asarray(r(t)), spec)
        assert frobenius_rel_error(report.result, expected) < 1e-8

    def test_singular_denominator_detected(self):
        r = approximant([1.0], [0.0, 1.0])  # q(t) = t
        with pytest.raises(SingularDenominatorError):
            rational_apply(r, np.zeros((3, 3)))

    def test_refinement_flag(self):
        r = approximant([0.5, 0.1], [2.0, 0.3])
        a = np.diag([0.2, -0.4, 0.9])
        plain = rational_apply(r, a)
        refined = rational_apply(r, a, refine=True)
        assert refined.residual <= plain.residual + 1e-15


class TestRationalApplyVec:
    def test_zero_vector(self):
        r = approximant([0.3], [1.5])
        out = rational_apply_vec(r, np.eye(4), np.zeros(4))
        np.testing.assert_array_equal(out.result, np.zeros(4))

    def test_scaled_identity(self):
        r = approximant([0.3, 0.2], [2.0, 0.5])
        v = np.arange(1.0, 6.0)
        out = rational_apply_vec(r, 0.25 * np.eye(5), v)
        np.testing.assert_allclose(out.result, float(r(0.25)) * v, atol=1e-12)

    def test_matches_full_path(self):
        rng = np.random.default_rng(7)
        spec = SpectrumSpec(rng.uniform(-1, 1, size=100), seed=3)
        a = make_normal_matrix(spec)
        v = rng.standard_normal(100)
        r = approximant(rng.standard_normal(6), [3.0, 0.5, -0.2], bounds=BoundSpec(1.0, 10.0))
        fast = rational_apply_vec(r, a, v).result
        full = rational_apply(r, a).result @ v
        assert np.linalg.norm(fast - full) <= 1e-8 * np.linalg.norm(full)


class TestMakeNormalMatrix:
    def test_equal_eigenvalues_give_scaled_identity(self):
        for seed in (1, 9):
            a = make_normal_matrix(SpectrumSpec(np.full(7, 2.5), seed=seed))
            np.testing.assert_allclose(a, 2.5 * np.eye(7), atol=1e-12)

    def test_two_by_two_invariants(self):
        a = make_normal_matrix(SpectrumSpec(np.array([1.0, -1.0]), seed=4))
        assert np.trace(a) == pytest.approx(0.0, abs=1e-10)
        assert np.linalg.det(a) == pytest.approx(-1.0, abs=1e-10)

    def test_deterministic(self):
        spec = SpectrumSpec(np.linspace(-1, 1, 12), seed=123)
        np.testing.assert_array_equal(make_normal_matrix(spec), make_normal_matrix(spec))

    def test_symmetric_with_prescribed_spectrum(self):
        lam = np.linspace(-0.9, 0.8, 25)
        a = make_normal_matrix(SpectrumSpec(lam, seed=2))
        np.testing.assert_array_equal(a, a.T)
        got = np.sort(np.linalg.eigvalsh(a))
        np.testing.assert_allclose(got, lam, atol=1e-10)

    def test_orthogonal_factor(self):
        q = random_orthogonal(15, seed=5)
        np.testing.assert_allclose(q @ q.T, np.eye(15), atol=1e-12)


class TestCondCheck:
    def test_constant_denominator(self):
        r = approximant([1.0], [2.0])
        assert cond_check(r, BoundSpec(1.0, 2.0), SpectrumSpec(np.array([0.1, 0.7]))) == 1.0

    def test_linear_denominator(self):
        r = approximant([1.0], [1.5, 0.5])
        spec = SpectrumSpec(np.array([-1.0, 1.0]))
        assert cond_check(r, BoundSpec(1.0, 2.0), spec) == pytest.approx(2.0, abs=1e-14)

    def test_within_guarantee(self):
        bounds = BoundSpec(1.0, 2.0)
        r = approximant([1.0], [1.5, 0.5], bounds=bounds)
        spec = SpectrumSpec(np.linspace(-1, 1, 50), seed=8)
        assert cond_check(r, bounds, spec) <= bounds.cond_bound * (1 + 1e-8)


class TestFrobenius:
    def test_equal(self):
        a = np.ones((3, 3))
        assert frobenius_rel_error(a, a) == 0.0

    def test_double(self):
        a = np.random.default_rng(0).standard_normal((4, 4))
        assert frobenius_rel_error(2 * a, a) == pytest.approx(1.0, rel=1e-12)

    def test_constructed_ratio(self):
        rng = np.random.default_rng(1)
        y = rng.standard_normal((5, 5))
        e = rng.standard_normal((5, 5))
        e *= 0.1 * np.linalg.norm(y) / np.linalg.norm(e)
        assert frobenius_rel_error(y + e, y) == pytest.approx(0.1, rel=1e-12)

    def test_zero_reference(self):
        assert frobenius_rel_error(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0
        with pytest.raises(ValueError):
            frobenius_rel_error(np.ones((2, 2)), np.zeros((2, 2)))


class TestMatrixIO:
    def test_csv_round_trip(self, tmp_path):
        a = np.random.default_rng(3).standard_normal((6, 6))
        path = tmp_path / "m.csv"
        save_matrix_csv(path, a)
        np.testing.assert_array_equal(load_matrix_csv(path), a)

    def test_bin_round_trip(self, tmp_path):
        a = np.random.default_rng(4).standard_normal((9, 9))
        path = tmp_path / "m.bin"
        save_matrix_bin(path, a)
        np.testing.assert_array_equal(load_matrix_bin(path), a)

    def test_bin_header(self, tmp_path):
        path = tmp_path / "m.bin"
        save_matrix_bin(path, np.eye(3))
        raw = path.read_bytes()
        assert len(raw) == 8 + 9 * 8
        assert int.from_bytes(raw[:8], "little") == 3

    def test_csv_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("3\n1.0,0.0\n0.0,1.0\n")
        with pytest.raises(ValueError):
            load_matrix_csv(path)


def test_report_type():
    assert MatApplyReport(np.zeros(2), 0.0).cond_bound is None
