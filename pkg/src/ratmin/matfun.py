"""Lifting rational approximants to matrices: r(A) and r(A)v.

Matrix Chebyshev polynomials are evaluated by the Clenshaw recurrence on the
domain-mapped matrix, the denominator is inverted through an LU solve, and
Theorem-style conditioning checks are computed from known spectra. Test
matrices with prescribed eigenvalues come from a seeded counter-based
generator so every experiment is reproducible from a single integer seed.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ratmin.cheb import Domain
from ratmin.rational import BoundSpec, RationalApproximant


class SingularDenominatorError(ArithmeticError):
    """q(A) is singular to working precision; the spectrum left the certified region."""


@dataclass(frozen=True)
class SpectrumSpec:
    """Prescribed eigenvalues plus the seed that fixes the orthogonal frame."""

    eigenvalues: np.ndarray
    seed: int = 7

    def __post_init__(self):
        eig = np.asarray(self.eigenvalues, dtype=float)
        if eig.ndim != 1 or eig.size < 1:
            raise ValueError("eigenvalues must be a nonempty 1-D array")
        if not np.all(np.isfinite(eig)):
            raise ValueError("eigenvalues must be finite")
        eig.flags.writeable = False
        object.__setattr__(self, "eigenvalues", eig)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class MatApplyReport:
    """Result of applying an approximant to a matrix (or matrix-vector pair)."""

    result: np.ndarray
    residual: float
    cond_bound: float | None = None


def map_matrix(domain: Domain, a: np.ndarray) -> np.ndarray:
    """Matrix version of the affine [a,b] -> [-1,1] map."""
    a = np.asarray(a, dtype=float)
    _require_square(a)
    out = (2.0 / domain.width) * a
    out[np.diag_indices_from(out)] -= (domain.a + domain.b) / domain.width
    return out


def matrix_cheb_poly(coeffs, a: np.ndarray, domain: Domain) -> np.ndarray:
    """Sum c_j T_j(A_hat) by the matrix Clenshaw recurrence.

    Three k x k workspaces are reused across the recurrence steps, so peak
    extra memory stays at 3k^2 regardless of the degree.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    a_hat = map_matrix(domain, a)
    k = a_hat.shape[0]
    deg = coeffs.size - 1
    if deg == 0:
        return coeffs[0] * np.eye(k)
    b_next = np.zeros((k, k))  # B_{j+1}
    b_after = np.zeros((k, k))  # B_{j+2}
    scratch = np.empty((k, k))
    diag = np.diag_indices(k)
    for j in range(deg, 0, -1):
        np.matmul(a_hat, b_next, out=scratch)
        scratch *= 2.0
        scratch -= b_after
        scratch[diag] += coeffs[j]
        b_after, b_next, scratch = b_next, scratch, b_after
    # final step uses A_hat, not 2 A_hat
    np.matmul(a_hat, b_next, out=scratch)
    scratch -= b_after
    scratch[diag] += coeffs[0]
    return scratch


def matrix_cheb_poly_vec(coeffs, a: np.ndarray, v: np.ndarray, domain: Domain) -> np.ndarray:
    """(sum c_j T_j(A_hat)) v using matrix-vector products only: O(deg * k^2)."""
    coeffs = np.asarray(coeffs, dtype=float)
    a = np.asarray(a, dtype=float)
    _require_square(a)
    v = np.asarray(v, dtype=float)
    if v.shape != (a.shape[0],):
        raise ValueError(f"vector of length {v.shape} does not match matrix dim {a.shape[0]}")
    shift = (domain.a + domain.b) / domain.width
    scale = 2.0 / domain.width

    def a_hat_dot(w):
        return scale * (a @ w) - shift * w

    deg = coeffs.size - 1
    b_next = np.zeros_like(v)
    b_after = np.zeros_like(v)
    for j in range(deg, 0, -1):
        b_next, b_after = coeffs[j] * v + 2.0 * a_hat_dot(b_next) - b_after, b_next
    return coeffs[0] * v + a_hat_dot(b_next) - b_after


def _factor_denominator(r: RationalApproximant, a: np.ndarray):
    q_mat = matrix_cheb_poly(r.den, a, r.domain)
    factors = lu_factor(q_mat)
    pivots = np.abs(np.diag(factors[0]))
    q_norm = np.linalg.norm(q_mat)
    if q_norm == 0.0 or pivots.min() < 1e-14 * q_norm:
        raise SingularDenominatorError(
            "denominator matrix is singular to working precision; "
            "the spectrum is outside the certified region")
    return q_mat, factors


def rational_apply(r: RationalApproximant, a: np.ndarray, refine: bool = False) -> MatApplyReport:
    """r(A) = q(A)^{-1} p(A) via matrix Clenshaw and an LU solve."""
    a = np.asarray(a, dtype=float)
    _require_square(a)
    p_mat = matrix_cheb_poly(r.num, a, r.domain)
    q_mat, factors = _factor_denominator(r, a)
    x = lu_solve(factors, p_mat)
    if refine:
        x += lu_solve(factors, p_mat - q_mat @ x)
    p_norm = np.linalg.norm(p_mat)
    residual = float(np.linalg.norm(q_mat @ x - p_mat) / p_norm) if p_norm > 0 else 0.0
    return MatApplyReport(x, residual, r.bounds.cond_bound if r.bounds else None)


def rational_apply_vec(r: RationalApproximant, a: np.ndarray, v: np.ndarray,
                       refine: bool = False) -> MatApplyReport:
    """r(A) v without forming p(A): numerator acts on v by the vector Clenshaw."""
    a = np.asarray(a, dtype=float)
    w = matrix_cheb_poly_vec(r.num, a, v, r.domain)
    q_mat, factors = _factor_denominator(r, a)
    x = lu_solve(factors, w)
    if refine:
        x += lu_solve(factors, w - q_mat @ x)
    w_norm = np.linalg.norm(w)
    residual = float(np.linalg.norm(q_mat @ x - w) / w_norm) if w_norm > 0 else 0.0
    return MatApplyReport(x, residual, r.bounds.cond_bound if r.bounds else None)


def random_orthogonal(dim: int, seed: int) -> np.ndarray:
    """Orthogonal factor of a seeded Gaussian matrix, sign-fixed so R has positive diagonal."""
    rng = np.random.Generator(np.random.Philox(seed))
    gauss = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def make_normal_matrix(spec: SpectrumSpec) -> np.ndarray:
    """Symmetric matrix Q diag(eigenvalues) Q^T with a seeded random orthogonal Q."""
    q = random_orthogonal(spec.dim, spec.seed)
    a = (q * spec.eigenvalues) @ q.T
    return (a + a.T) / 2.0


def cond_check(r: RationalApproximant, bounds: BoundSpec, spec: SpectrumSpec) -> float:
    """cond_2(q(A)) computed exactly from the known spectrum.

    For a normal matrix with eigenvalues where the fit certified
    l <= q <= u, this is guaranteed to be at most u/l.
    """
    q_vals = np.abs(np.asarray(r.denominator_at(spec.eigenvalues)))
    return float(q_vals.max() / q_vals.min())


def frobenius_rel_error(x: np.ndarray, y: np.ndarray) -> float:
    """||X - Y||_F / ||Y||_F, with 0/0 = 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    y_norm = np.linalg.norm(y)
    diff = np.linalg.norm(x - y)
    if y_norm == 0.0:
        if diff == 0.0:
            return 0.0
        raise ValueError("relative error against a zero reference is undefined")
    return float(diff / y_norm)


def exact_matrix_function(f, spec: SpectrumSpec) -> np.ndarray:
    """Q f(D) Q^T for the matrix that make_normal_matrix(spec) returns."""
    q = random_orthogonal(spec.dim, spec.seed)
    return (q * f(spec.eigenvalues)) @ q.T


# -- matrix file formats ----------------------------------------------------


def save_matrix_csv(path, a) -> None:
    """Header line with the dimension, then k rows of k comma-separated decimals."""
    a = np.asarray(a, dtype=float)
    _require_square(a)
    with open(path, "w") as fh:
        fh.write(f"{a.shape[0]}\n")
        for row in a:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    with open(path) as fh:
        dim = int(fh.readline())
        a = np.loadtxt(fh, delimiter=",", ndmin=2)
    if a.shape != (dim, dim):
        raise ValueError(f"header says {dim}x{dim}, file holds {a.shape}")
    return a


def save_matrix_bin(path, a) -> None:
    """8-byte little-endian dimension header, then k*k little-endian doubles, row-major."""
    a = np.ascontiguousarray(a, dtype="<f8")
    _require_square(a)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", a.shape[0]))
        fh.write(a.tobytes())


def load_matrix_bin(path) -> np.ndarray:
    with open(path, "rb") as fh:
        (dim,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != dim * dim:
        raise ValueError(f"header says {dim}x{dim}, file holds {data.size} values")
    return data.reshape(dim, dim).astype(float)


def _require_square(a):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
