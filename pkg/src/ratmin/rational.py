"""Rational approximants in the Chebyshev basis and their diagnostics."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from ratmin.cheb import Domain, clenshaw, map_to_ref

BASIS_TAG = "chebyshev-T"
CONVENTION_TAG = "plain-sum"


class EvaluationDomainWarning(UserWarning):
    """Denominator was not strictly positive at an evaluation point."""


class DegenerateDenominatorError(ArithmeticError):
    """Denominator vanishes on the grid; the change metric is undefined."""


@dataclass(frozen=True)
class BoundSpec:
    """Denominator bounds 0 < lower <= q(x_i) <= upper, plus optional numerator positivity."""

    lower: float = 1.0
    upper: float = 1e6
    positive: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ValueError("bounds must be finite")
        if not 0.0 < self.lower <= self.upper:
            raise ValueError(f"bounds require 0 < lower <= upper, got ({self.lower}, {self.upper})")

    @property
    def cond_bound(self) -> float:
        """Guaranteed bound on cond(q(A)) for normal A with spectrum in the certified set."""
        return self.upper / self.lower


def _frozen_array(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} coefficients must be a nonempty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} coefficients must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class RationalApproximant:
    """p/q with both polynomials as plain-sum Chebyshev coefficients on ``domain``.

    ``bounds`` records the denominator bounds the approximant was fitted
    under, when known; it rides along so matrix-side code can report the
    conditioning guarantee.
    """

    domain: Domain
    num: np.ndarray
    den: np.ndarray
    bounds: BoundSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "num", _frozen_array(self.num, "numerator"))
        object.__setattr__(self, "den", _frozen_array(self.den, "denominator"))

    @property
    def num_degree(self) -> int:
        return self.num.size - 1

    @property
    def den_degree(self) -> int:
        return self.den.size - 1

    def numerator_at(self, x):
        return clenshaw(self.num, map_to_ref(self.domain, x))

    def denominator_at(self, x):
        return clenshaw(self.den, map_to_ref(self.domain, x))

    def __call__(self, x):
        """Evaluate p(x)/q(x). Scalar in, scalar out; arrays vectorize.

        A non-positive denominator means x is outside the certified region;
        that is reported as a warning, not an error, and the ratio is
        returned as computed.
        """
        t = map_to_ref(self.domain, x)
        p = clenshaw(self.num, t)
        q = clenshaw(self.den, t)
        if np.any(np.asarray(q) <= 0.0):
            warnings.warn(
                "denominator is not strictly positive at an evaluation point; "
                "the value is outside the certified region",
                EvaluationDomainWarning,
                stacklevel=2,
            )
        return p / q

    # -- JSON interchange ------------------------------------------------

    def to_dict(self) -> dict:
        doc = {
            "domain": [self.domain.a, self.domain.b],
            "num": self.num.tolist(),
            "den": self.den.tolist(),
            "basis": BASIS_TAG,
            "convention": CONVENTION_TAG,
        }
        if self.bounds is not None:
            doc["bounds"] = {
                "lower": self.bounds.lower,
                "upper": self.bounds.upper,
                "positive": self.bounds.positive,
            }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "RationalApproximant":
        if doc.get("basis", BASIS_TAG) != BASIS_TAG:
            raise ValueError(f"unsupported basis {doc.get('basis')!r}")
        if doc.get("convention", CONVENTION_TAG) != CONVENTION_TAG:
            raise ValueError(f"unsupported coefficient convention {doc.get('convention')!r}")
        bounds = None
        if "bounds" in doc:
            b = doc["bounds"]
            bounds = BoundSpec(b["lower"], b["upper"], bool(b.get("positive", False)))
        a, b_ = doc["domain"]
        return cls(Domain(float(a), float(b_)), doc["num"], doc["den"], bounds)

    @classmethod
    def from_json(cls, text: str) -> "RationalApproximant":
        return cls.from_dict(json.loads(text))


def uniform_error(r: RationalApproximant, target, grid) -> float:
    """max_i |f(x_i) - r(x_i)| over the grid; ``target`` is a callable or sampled values."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    values = np.asarray(target(grid) if callable(target) else target, dtype=float)
    return float(np.max(np.abs(values - r(grid))))


def denominator_change(r: RationalApproximant, grid) -> float:
    """C_r = max_i |q(x_i)| / min_i |q(x_i)| over the grid."""
    q = np.abs(np.asarray(r.denominator_at(grid)))
    low = q.min()
    if low == 0.0:
        raise DegenerateDenominatorError("denominator vanishes on the grid")
    return float(q.max() / low)


@dataclass(frozen=True)
class BoundCheck:
    """Worst constraint violations of an approximant over a grid."""

    lower_violation: float
    upper_violation: float
    positivity_violation: float
    tolerance: float

    @property
    def worst(self) -> float:
        return max(self.lower_violation, self.upper_violation, self.positivity_violation)

    @property
    def ok(self) -> bool:
        return self.worst <= self.tolerance


def verify_bounds(r: RationalApproximant, grid, bounds: BoundSpec) -> BoundCheck:
    """Check lower <= q <= upper (and numerator >= 0 if required) pointwise on the grid."""
    grid = np.asarray(grid, dtype=float)
    q = np.asarray(r.denominator_at(grid))
    lower_violation = float(max(0.0, np.max(bounds.lower - q)))
    upper_violation = float(max(0.0, np.max(q - bounds.upper)))
    positivity_violation = 0.0
    if bounds.positive:
        p = np.asarray(r.numerator_at(grid))
        positivity_violation = float(max(0.0, np.max(-p)))
    return BoundCheck(lower_violation, upper_violation, positivity_violation, 1e-8 * bounds.upper)
