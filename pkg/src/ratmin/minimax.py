"""Bisection over the uniform-error level with LP feasibility at each level.

A level z is feasible when some coefficient pair (alpha, beta) satisfies
|f(x_i) - p(x_i)/q(x_i)| <= z on the whole grid together with the denominator
bounds l <= q(x_i) <= u (and optional numerator positivity). Multiplying the
two-sided error inequality by the positive denominator makes every constraint
linear, so each level reduces to one LP whose optimum theta is <= 0 exactly
when the level is feasible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ratmin.cheb import Domain, cheb_vector, map_to_ref
from ratmin.lp import OPTIMAL, LinearProgram, SimplexCyclingError, solve_lp
from ratmin.rational import BoundSpec, RationalApproximant

THETA_TOL = 1e-9
_MAX_DOUBLINGS = 50


class UnsatisfiableProblemError(RuntimeError):
    """No error level was feasible, even after growing the initial level."""


@dataclass(frozen=True)
class FitProblem:
    """One fitting instance: samples, degrees, denominator bounds, precision.

    ``num_degree`` is the numerator (p) degree, ``den_degree`` the denominator
    (q) degree. ``domain`` defaults to the grid hull; pass it explicitly when
    the grid does not touch the intended endpoints (Chebyshev grids).
    """

    grid: np.ndarray
    values: np.ndarray
    num_degree: int
    den_degree: int
    bounds: BoundSpec = field(default_factory=BoundSpec)
    epsilon: float = 1e-12
    domain: Domain | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be a 1-D array with at least 2 points")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if values.shape != grid.shape:
            raise ValueError("values must match the grid pointwise")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if self.num_degree < 0 or self.den_degree < 0:
            raise ValueError("degrees must be nonnegative")
        need = self.num_degree + self.den_degree + 2
        if grid.size < need:
            raise ValueError(f"grid of {grid.size} points cannot support degrees "
                             f"({self.den_degree},{self.num_degree}); need >= {need}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        domain = self.domain or Domain(float(grid[0]), float(grid[-1]))
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "domain", domain)


@dataclass(frozen=True)
class FitReport:
    """Outcome of a bisection run; the approximant witnesses the last feasible level."""

    approximant: RationalApproximant
    z_lower: float
    z_upper: float
    iterations: int
    level_trace: list[tuple[float, bool]]
    z_initial: float
    doubling_steps: int

    def to_dict(self) -> dict:
        return {
            "approximant": self.approximant.to_dict(),
            "z_lower": self.z_lower,
            "z_upper": self.z_upper,
            "iterations": self.iterations,
            "z_initial": self.z_initial,
            "doubling_steps": self.doubling_steps,
            "level_trace": [[z, bool(flag)] for z, flag in self.level_trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def assemble_feasibility(problem: FitProblem, z: float) -> LinearProgram:
    """The level-z feasibility LP over y = (alpha, beta, theta), minimizing theta.

    Per grid point, in order: the two error rows multiplied through by the
    denominator, the lower and upper denominator bounds, and (when requested)
    numerator nonnegativity.
    """
    if z < 0:
        raise ValueError("level z must be nonnegative")
    n, m = problem.num_degree, problem.den_degree
    t = map_to_ref(problem.domain, problem.grid)
    g = cheb_vector(t, n)  # (N, n+1)
    h = cheb_vector(t, m)  # (N, m+1)
    f = problem.values
    npts = f.size
    nvar = (n + 1) + (m + 1) + 1
    rows_per_point = 5 if problem.bounds.positive else 4

    block = np.zeros((npts, rows_per_point, nvar))
    rhs = np.zeros((npts, rows_per_point))
    senses = np.empty((npts, rows_per_point), dtype="<U2")
    a_sl = np.s_[: n + 1]
    b_sl = np.s_[n + 1 : n + m + 2]

    block[:, 0, a_sl] = -g
    block[:, 0, b_sl] = (f - z)[:, None] * h
    block[:, 0, -1] = -1.0
    senses[:, 0] = "<="

    block[:, 1, a_sl] = g
    block[:, 1, b_sl] = -(f + z)[:, None] * h
    block[:, 1, -1] = -1.0
    senses[:, 1] = "<="

    block[:, 2, b_sl] = h
    senses[:, 2] = ">="
    rhs[:, 2] = problem.bounds.lower

    block[:, 3, b_sl] = h
    senses[:, 3] = "<="
    rhs[:, 3] = problem.bounds.upper

    if problem.bounds.positive:
        block[:, 4, a_sl] = g
        senses[:, 4] = ">="

    objective = np.zeros(nvar)
    objective[-1] = 1.0
    return LinearProgram(
        objective,
        block.reshape(npts * rows_per_point, nvar),
        senses.reshape(-1),
        rhs.reshape(-1),
    )


def check_level(problem: FitProblem, z: float):
    """Decide feasibility of level z; return (feasible, (alpha, beta) or None)."""
    lp = assemble_feasibility(problem, z)
    try:
        outcome = solve_lp(lp, early_exit_threshold=0.0)
    except SimplexCyclingError as exc:
        raise SimplexCyclingError(f"LP solver cycled at level z={z!r}") from exc
    if outcome.status != OPTIMAL:
        # theta can always absorb the error rows and a constant denominator
        # sits inside [l, u], so the level LP is feasible and bounded.
        raise RuntimeError(f"level LP unexpectedly {outcome.status} at z={z!r}")
    if outcome.objective_value > THETA_TOL:
        return False, None
    n = problem.num_degree
    x = outcome.solution
    return True, (x[: n + 1].copy(), x[n + 1 : n + 2 + problem.den_degree].copy())


def _witness_approximant(problem: FitProblem, witness) -> RationalApproximant:
    alpha, beta = witness
    return RationalApproximant(problem.domain, alpha, beta, problem.bounds)


def fit(problem: FitProblem) -> FitReport:
    """Algorithmic core: bracket the optimal level, then bisect to epsilon."""
    f = problem.values
    if problem.bounds.positive:
        z_initial = float(np.max(np.abs(f)))
    else:
        z_initial = float((f.max() - f.min()) / 2.0)

    trace: list[tuple[float, bool]] = []
    z_hi = z_initial
    feasible, witness = check_level(problem, z_hi)
    trace.append((z_hi, feasible))
    doublings = 0
    while not feasible and doublings < _MAX_DOUBLINGS:
        z_hi = 2.0 * z_hi
        doublings += 1
        feasible, witness = check_level(problem, z_hi)
        trace.append((z_hi, feasible))
    if not feasible:
        raise UnsatisfiableProblemError(
            "no feasible error level found; constraints cannot be satisfied")

    lower = 0.0
    width = z_hi  # invariant: the bracket is [lower, lower + width], upper end feasible
    iterations = 0
    while width > problem.epsilon:
        width *= 0.5  # exact halving
        z = lower + width
        feasible, candidate = check_level(problem, z)
        trace.append((z, feasible))
        iterations += 1
        if feasible:
            witness = candidate
        else:
            lower = z

    return FitReport(
        approximant=_witness_approximant(problem, witness),
        z_lower=lower,
        z_upper=lower + width,
        iterations=iterations,
        level_trace=trace,
        z_initial=z_initial,
        doubling_steps=doublings,
    )
