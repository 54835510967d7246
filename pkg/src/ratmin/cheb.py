"""Chebyshev polynomials of the first kind: basis rows, Clenshaw sums, grids.

Every coefficient vector in this package uses the plain-sum convention
(value = sum c_j T_j), with no halved first term. ``cheb_expand`` converts
the classical dashed-sum expansion coefficients to this convention before
returning them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _npcheb


@dataclass(frozen=True)
class Domain:
    """Closed segment [a, b] a function is approximated on."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("domain endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"domain requires a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a


def map_to_ref(domain: Domain, x):
    """Affine map taking [a, b] onto the reference interval [-1, 1].

    Values outside [a, b] are mapped without complaint (|t| > 1); mild
    extrapolation is the caller's responsibility.
    """
    return (2.0 * np.asarray(x, dtype=float) - domain.a - domain.b) / domain.width


def map_from_ref(domain: Domain, t):
    """Inverse of :func:`map_to_ref`: [-1, 1] back onto [a, b]."""
    return 0.5 * (domain.a + domain.b + domain.width * np.asarray(t, dtype=float))


def cheb_vector(t, k: int):
    """Rows (T_0(t), ..., T_k(t)) by the three-term recursion.

    ``t`` may be a scalar (returns shape ``(k+1,)``) or an array (returns
    ``t.shape + (k+1,)``). The recursion is defined for any real t, so
    extrapolation beyond [-1, 1] is allowed.
    """
    if k < 0:
        raise ValueError("degree k must be >= 0")
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape + (k + 1,))
    out[..., 0] = 1.0
    if k >= 1:
        out[..., 1] = t
    for j in range(2, k + 1):
        out[..., j] = 2.0 * t * out[..., j - 1] - out[..., j - 2]
    return out


def clenshaw(coeffs, t):
    """Evaluate sum c_j T_j(t) by the Clenshaw recurrence (plain-sum coeffs)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size < 1:
        raise ValueError("coefficient vector must be 1-D and nonempty")
    return _npcheb.chebval(t, coeffs)


def cheb_nodes(n: int):
    """The n roots of T_n, ascending.

    Computed as sin(pi*(2j-1-n)/(2n)) rather than the cosine form so that the
    grid is exactly symmetric and the middle node of an odd count is exactly 0.
    """
    if n < 1:
        raise ValueError("need at least one node")
    j = np.arange(1, n + 1)
    return np.sin(np.pi * (2 * j - 1 - n) / (2.0 * n))


def equidistant_grid(domain: Domain, n: int):
    """n uniformly spaced points on [a, b], endpoints included."""
    if n < 2:
        raise ValueError("an equidistant grid needs at least 2 points")
    return np.linspace(domain.a, domain.b, n)


def chebyshev_grid(domain: Domain, n: int):
    """The n Chebyshev nodes mapped onto [a, b]."""
    return map_from_ref(domain, cheb_nodes(n))


def cheb_expand(values, k: int):
    """Degree-k truncated Chebyshev expansion from samples at cheb_nodes(N).

    ``values[j]`` must be f(z_j) at the N ascending roots of T_N. Uses the
    discrete orthogonality of the T_j at those roots; the constant term is
    halved internally so the result is a plain-sum coefficient vector.
    """
    values = np.asarray(values, dtype=float)
    n_nodes = values.shape[0]
    if k >= n_nodes:
        raise ValueError(f"expansion degree {k} needs more than {n_nodes} nodes")
    basis = cheb_vector(cheb_nodes(n_nodes), k)  # (N, k+1)
    coeffs = (2.0 / n_nodes) * (basis.T @ values)
    coeffs[0] *= 0.5
    return coeffs
