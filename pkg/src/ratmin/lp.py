"""Dense linear programming sized for the fitting feasibility subproblems.

``solve_lp`` takes inequality-form programs over free variables. The work
happens on the dual: a program with n variables and r rows (r >> n here)
dualizes to n equality constraints over r nonnegative multipliers, so the
two-phase dense simplex runs on an (n+1) x (r+n+1) tableau with an n x n
basis, and the primal point falls out of the active rows — an n x n solve
against pristine data, which keeps the feasibility certificate sharp no
matter how degenerate the row set is. When the dual is infeasible (possible
only for unbounded or infeasible primals) a primal-tableau fallback decides
which of the two it is.

Every Optimal outcome is certified against all rows before it is returned;
a solve that cannot be certified is retried with a graded rhs relaxation
(relaxation preserves infeasibility claims) and reported as a distinct
failure if that ladder runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-10
_PIVOT_PREFERRED = 1e-5
_DEGENERATE_STEP_TOL = 1e-12
_RATIO_TIE_REL = 1e-7
_REFRESH_EVERY = 20  # pivots between exact tableau refactorizations


class SimplexCyclingError(RuntimeError):
    """Iteration cap exceeded or the solve degraded numerically; never mis-stated."""


@dataclass(frozen=True)
class LinearProgram:
    """min objective . y subject to rows of the form coeffs . y (<=|>=) rhs, y free."""

    objective: np.ndarray
    lhs: np.ndarray
    senses: np.ndarray  # '<=' or '>=' per row
    rhs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        a = np.atleast_2d(np.asarray(self.lhs, dtype=float))
        s = np.atleast_1d(np.asarray(self.senses))
        b = np.atleast_1d(np.asarray(self.rhs, dtype=float))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("objective must be a nonempty vector")
        if a.shape != (b.size, c.size):
            raise ValueError(f"lhs shape {a.shape} does not match {b.size} rows x {c.size} vars")
        if s.shape != (b.size,):
            raise ValueError("one sense per row required")
        if not np.all(np.isin(s, ("<=", ">="))):
            raise ValueError("senses must be '<=' or '>='")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "lhs", a)
        object.__setattr__(self, "senses", s.astype("<U2"))
        object.__setattr__(self, "rhs", b)

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_rows(self) -> int:
        return self.rhs.size

    @classmethod
    def from_rows(cls, objective, rows) -> "LinearProgram":
        """Build from a list of (coeffs, sense, rhs) triples."""
        coeffs, senses, rhs = zip(*rows)
        return cls(np.asarray(objective, float), np.array(coeffs, float), np.array(senses), np.array(rhs, float))

    def dump(self) -> str:
        """Plain-text row list for offline inspection."""
        lines = ["minimize " + " + ".join(f"{c:g}*y{i}" for i, c in enumerate(self.objective))]
        for a, s, b in zip(self.lhs, self.senses, self.rhs):
            terms = " + ".join(f"{v:g}*y{i}" for i, v in enumerate(a))
            lines.append(f"{terms} {s} {b:g}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    solution: np.ndarray | None = None
    objective_value: float | None = None


def feasibility_tolerance(rhs) -> np.ndarray:
    """Per-row slack allowed when certifying feasibility: 1e-8 * (1 + |rhs|)."""
    return 1e-8 * (1.0 + np.abs(np.asarray(rhs, dtype=float)))


def solve_lp(lp: LinearProgram, early_exit_threshold: float | None = None) -> LpOutcome:
    """Solve the LP; deterministic for identical inputs.

    ``early_exit_threshold`` permits (but does not require) stopping at the
    first certified point whose objective reaches the threshold; the dual
    solve is cheap enough that the optimum is computed either way.
    """
    c = lp.objective
    n = lp.num_vars

    # Normalize every row to <= form.
    flip = lp.senses == ">="
    a_full = np.where(flip[:, None], -lp.lhs, lp.lhs)
    b_full = np.where(flip, -lp.rhs, lp.rhs)
    tol_full = feasibility_tolerance(lp.rhs)

    # Rows with no variable coefficients are decided immediately.
    row_scale = np.max(np.abs(a_full), axis=1)
    trivial = row_scale == 0.0
    if np.any(trivial):
        if np.any(b_full[trivial] < -tol_full[trivial]):
            return LpOutcome(INFEASIBLE)
        keep = ~trivial
        a_full, b_full, tol_full, row_scale = (v[keep] for v in (a_full, b_full, tol_full, row_scale))
    if a_full.shape[0] == 0:
        # Unconstrained: bounded only for a zero objective.
        if np.any(c != 0.0):
            return LpOutcome(UNBOUNDED)
        return LpOutcome(OPTIMAL, np.zeros(n), 0.0)

    # Row equilibration keeps all tableau entries O(1).
    scale = 1.0 / row_scale
    a = a_full * scale[:, None]
    b = b_full * scale
    tol = tol_full * scale

    iter_cap = 50 * (n + lp.num_rows)
    bland_after = 10 * n
    result = _solve_certified(c, a, b, tol, bland_after, iter_cap)
    if result.status != OPTIMAL:
        return LpOutcome(result.status)
    return LpOutcome(OPTIMAL, result.solution, float(c @ result.solution))


@dataclass
class _Result:
    status: str
    solution: np.ndarray | None = None


def _solve_certified(c, a, b, tol, bland_after, iter_cap,
                     perturbs=(0.0, 1e-9, 1e-7)) -> _Result:
    """Dual solve whose Optimal answers are certified against every row.

    A cycling solve or a failed certificate is retried with a graded rhs
    relaxation: relaxing <= rows only enlarges the feasible region, so an
    infeasibility claim for the relaxed program still certifies the original,
    while any certified-optimal point of the relaxed program that satisfies
    the original rows is optimal for them too.
    """
    last_error = None
    for perturb in perturbs:
        b_eff = b if perturb == 0.0 else b + perturb * (1.0 + np.abs(b)) * (
            np.arange(1, b.size + 1) / b.size)
        try:
            res = _solve_dual(c, a, b_eff, bland_after, iter_cap)
        except SimplexCyclingError as exc:
            last_error = exc
            continue
        if res.status == OPTIMAL:
            violation = a @ res.solution - b - tol
            if violation.max() > 0.0:
                polished = _polish_point(res.solution, a, b, tol)
                violation = a @ polished - b - tol
                if violation.max() > 0.0:
                    last_error = SimplexCyclingError(
                        f"optimal point violated rows by {violation.max():.2e} beyond tolerance")
                    continue
                res = _Result(OPTIMAL, polished)
        return res
    raise last_error


def _polish_point(x, a, b, tol, rounds=4):
    """Least-norm correction pushing residual row violations strictly inside.

    All violated rows are projected simultaneously (they are often nearly
    parallel or paired, so one-at-a-time sweeps ping-pong). The corrections
    are on the scale of the violations themselves, far below the objective
    tolerance, and the result is re-certified by the caller.
    """
    x = x.copy()
    for _ in range(rounds):
        residual = a @ x - b
        bad = np.nonzero(residual > 0.0)[0]
        if bad.size == 0:
            return x
        shift = -0.5 * tol[bad] - residual[bad]
        try:
            dx = np.linalg.lstsq(a[bad], shift, rcond=None)[0]
        except np.linalg.LinAlgError:
            return x
        if not np.all(np.isfinite(dx)):
            return x
        x += dx
    return x


# -- dual-form simplex -------------------------------------------------------


def _solve_dual(c, a, b, bland_after, iter_cap) -> _Result:
    """Solve min c.y, a y <= b (y free) through its dual.

    The dual is min b.mu subject to a^T mu = -c, mu >= 0. Its tableau has
    one row per primal VARIABLE, so the basis stays n x n however many rows
    the primal has. At the dual optimum the nonbasic reduced costs
    b - a y >= 0 are exactly primal feasibility, and y is recovered by
    solving the active-row system against pristine data.
    """
    r, n = a.shape
    # Rescale each dual variable by its cost magnitude so the phase-2 cost
    # row is O(1) and Dantzig pricing is not dominated by large-rhs rows.
    # This is an exact change of variables; the basis index set is unaffected.
    mu_scale = 1.0 + np.abs(b)
    eq = a.T / mu_scale  # (n, r)
    cost = b / mu_scale
    rhs = -c.astype(float).copy()

    # Equation scaling for tableau conditioning, undone when the primal point
    # is read back from the multipliers.
    eq_scale = np.maximum(np.max(np.abs(eq), axis=1), 1e-12)
    eq /= eq_scale[:, None]
    rhs = rhs / eq_scale
    negative = rhs < 0.0
    eq[negative] *= -1.0
    rhs[negative] *= -1.0
    eq_sign = np.where(negative, -1.0, 1.0)

    # Tableau: dual variables, artificials, rhs. Artificials form the basis.
    tableau = np.zeros((n + 1, r + n + 1))
    tableau[:n, :r] = eq
    tableau[:n, r : r + n] = np.eye(n)
    tableau[:n, -1] = rhs
    tableau[-1, :r] = -eq.sum(axis=0)
    tableau[-1, -1] = -rhs.sum()
    basis = r + np.arange(n)

    status = _simplex(tableau, basis, bland_after, iter_cap, entering_limit=r)
    if status == UNBOUNDED:
        raise SimplexCyclingError("phase-1 dual simplex claimed an unbounded direction")
    if -tableau[-1, -1] > 1e-8 * (1.0 + np.abs(rhs).max()):
        # Dual infeasible: the primal is unbounded or infeasible; a primal
        # phase-1 on the original data settles which.
        return _primal_fallback(c, a, b, bland_after, iter_cap)

    # Pivot leftover artificial basics onto dual columns where possible;
    # rows that offer no pivot correspond to redundant equations.
    for i in np.nonzero(basis >= r)[0]:
        row = np.abs(tableau[i, :r])
        j = int(np.argmax(row))
        if row[j] > _PIVOT_TOL:
            _pivot(tableau, i, j)
            basis[i] = j

    # Phase 2: minimize the (rescaled) dual cost, priced out over the basis.
    tableau[-1, :] = 0.0
    tableau[-1, :r] = cost
    coefs = tableau[-1, basis].copy()
    for i in np.nonzero(coefs != 0.0)[0]:
        tableau[-1, :] -= coefs[i] * tableau[i, :]

    status = _simplex(tableau, basis, bland_after, iter_cap, entering_limit=r)
    if status == UNBOUNDED:
        return _Result(INFEASIBLE)  # unbounded dual certifies primal infeasibility

    # Primal recovery, two candidate routes. The simplex multipliers are the
    # negated reduced costs of the artificial columns (cost 0 in phase 2) and
    # respect whatever degenerate geometry the optimum has; the active-row
    # solve is sharper when the basis is a full, well-conditioned row set.
    multipliers = -tableau[-1, r : r + n]
    y_tab = eq_sign * multipliers / eq_scale
    candidates = [y_tab]
    active = np.sort(basis[basis < r])
    y_act = _primal_from_active(a, b, active)
    if y_act is not None:
        candidates.append(y_act)
    best = min(candidates, key=lambda y: float((a @ y - b).max()))
    return _Result(OPTIMAL, best)


def _primal_from_active(a, b, active):
    """Primal point from the dual-optimal active rows: solve a_B y = b_B."""
    if active.size != a.shape[1]:
        return None
    block = a[active]
    try:
        y = np.linalg.solve(block, b[active])
    except np.linalg.LinAlgError:
        return None
    y += np.linalg.solve(block, b[active] - block @ y)
    return y if np.all(np.isfinite(y)) else None


def _primal_fallback(c, a, b, bland_after, iter_cap) -> _Result:
    """Distinguish infeasible from unbounded primals via a primal phase 1."""
    r, n = a.shape
    a2 = np.hstack([a, -a])  # y = u - v, u,v >= 0
    ncol = 2 * n

    neg = b < 0.0
    neg_rows = np.nonzero(neg)[0]
    n_art = neg_rows.size
    n_real = ncol + r
    tableau = np.zeros((r + 1, n_real + n_art + 1))
    tableau[:r, :ncol] = np.where(neg[:, None], -a2, a2)
    tableau[np.arange(r), ncol + np.arange(r)] = np.where(neg, -1.0, 1.0)
    tableau[neg_rows, n_real + np.arange(n_art)] = 1.0
    tableau[:r, -1] = np.abs(b)
    basis = ncol + np.arange(r)
    if n_art:
        basis[neg_rows] = n_real + np.arange(n_art)
        tableau[-1, n_real:-1] = 1.0
        tableau[-1, :] -= tableau[neg_rows, :].sum(axis=0)
        status = _simplex(tableau, basis, bland_after, iter_cap, entering_limit=n_real)
        if status == UNBOUNDED:
            raise SimplexCyclingError("primal phase-1 claimed an unbounded direction")
        if -tableau[-1, -1] > 1e-8 * (1.0 + np.abs(b).max()):
            return _Result(INFEASIBLE)
    return _Result(UNBOUNDED)


def _pivot(tableau, i, j):
    tableau[i, :] /= tableau[i, j]
    row = tableau[i, :].copy()
    col = tableau[:, j].copy()
    col[i] = 0.0
    # rank-1 update in place: tableau -= outer(col, row), via BLAS on the
    # transposed (Fortran-ordered) view to avoid the temporary
    dger(-1.0, row, col, a=tableau.T, overwrite_a=1)
    tableau[:, j] = 0.0
    tableau[i, j] = 1.0


def _simplex(tableau, basis, bland_after, iter_cap, entering_limit):
    """Simplex loop to optimality; returns OPTIMAL or UNBOUNDED.

    Dantzig pricing with Bland's rule engaged after a run of non-improving
    pivots; among near-tied ratios the largest pivot element wins
    (stability). ``entering_limit`` keeps artificial columns from re-entering.
    """
    r = basis.size
    degenerate = 0
    bland = False
    for _ in range(iter_cap):
        reduced = tableau[-1, :entering_limit]
        negative = np.nonzero(reduced < -_PIVOT_TOL)[0]
        if negative.size == 0:
            return OPTIMAL
        order = negative if bland else negative[np.argsort(reduced[negative], kind="stable")]
        # Entering scan: take the best-priced column whose ratio test offers a
        # healthy pivot element; a column whose only admissible pivot is tiny
        # would corrupt the tableau, so it is passed over while any healthier
        # improving column exists.
        chosen = None
        fallback = None
        fallback_size = 0.0
        for j in order:
            col = tableau[:r, j]
            positive = np.nonzero(col > _PIVOT_TOL)[0]
            if positive.size == 0:
                continue
            ratios = tableau[positive, -1] / col[positive]
            best = ratios.min()
            if bland:
                ties = positive[ratios == best]
                i = int(ties[np.argmin(basis[ties])])
                chosen = (int(j), i, best)
                break
            # Harris-style two-pass ratio test: admit rows whose ratio fits
            # under the tolerance-relaxed minimum, take the largest pivot.
            relaxed = ((tableau[positive, -1] + 1e-9 * (1.0 + np.abs(tableau[positive, -1])))
                       / col[positive]).min()
            window = positive[ratios <= max(best + _RATIO_TIE_REL * (1.0 + abs(best)), relaxed)]
            i = int(window[np.argmax(col[window])])
            if col[i] >= _PIVOT_PREFERRED:
                chosen = (int(j), i, best)
                break
            if col[i] > fallback_size:
                fallback = (int(j), i, best)
                fallback_size = float(col[i])
        if chosen is None:
            if fallback is None:
                return UNBOUNDED
            chosen = fallback
        j, i, best = chosen
        if best * -tableau[-1, j] <= _DEGENERATE_STEP_TOL * (1.0 + abs(tableau[-1, -1])):
            degenerate += 1
            if degenerate > bland_after:
                bland = True
        else:
            degenerate = 0
        _pivot(tableau, i, j)
        basis[i] = j
    raise SimplexCyclingError(f"simplex iteration cap {iter_cap} exceeded")
