"""Built-in target functions: the scalar test set, spectral filters, ReLU."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf as _erf

from ratmin.cheb import Domain


def erf(x):
    """Gauss error function, accurate to well under 1e-12 everywhere."""
    return _erf(x)


@dataclass(frozen=True)
class FilterParams:
    """Plateau filter shape: center, plateau width (radius), rise rate."""

    center: float = 0.4
    width: float = 0.2
    rise: float = 0.05

    def __post_init__(self):
        if not self.rise > 0:
            raise ValueError("rise rate must be positive")
        if self.width < 0:
            raise ValueError("width must be nonnegative")


def smooth_filter(params: FilterParams = FilterParams()):
    """x/2 * (1 - erf(2(|x-c| - R)/rr)): keeps eigenvalues near the center band.

    The profile is ~x while |x-c| is a rise-rate short of the radius R, drops
    to x/2 at |x-c| = R, and decays to ~0 a rise-rate beyond it. With the
    default shape that preserves the band [0.25, 0.55].
    """

    def f(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * x * (1.0 - erf(2.0 * (np.abs(x - params.center) - params.width) / params.rise))

    return f


def bell_filter(params: FilterParams = FilterParams(width=0.1, rise=0.1)):
    """1/2 * (1 - erf(2(|x-c| - R)/rr)): the sharp bell, no identity factor."""

    def f(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * (1.0 - erf(2.0 * (np.abs(x - params.center) - params.width) / params.rise))

    return f


def _f1(x):
    x = np.asarray(x, dtype=float)
    return np.where(x < 1.0, -(x**3) + 6.0 * x**2 - 6.0 * x + 2.0, x**3)


def _f2(x):
    return np.abs(np.asarray(x, dtype=float)) ** (2.0 / 3.0)


def _f3(x):
    x = np.asarray(x, dtype=float)
    return np.cos(9.0 * x) + np.sin(11.0 * x)


def _f4(x):
    return np.abs(np.asarray(x, dtype=float) - 0.1)


def _relu(x):
    return np.maximum(0.0, np.asarray(x, dtype=float))


_BUILTINS = {
    "f1": (lambda params: _f1, Domain(0.0, 3.0)),
    "f2": (lambda params: _f2, Domain(-1.0, 2.0)),
    "f3": (lambda params: _f3, Domain(-1.0, 1.0)),
    "f4": (lambda params: _f4, Domain(-0.5, 0.5)),
    "filter": (lambda params: smooth_filter(params or FilterParams()), Domain(-1.0, 1.0)),
    "bell": (lambda params: bell_filter(params or FilterParams(width=0.1, rise=0.1)), Domain(-1.0, 1.0)),
    "relu": (lambda params: _relu, Domain(-1.0, 1.0)),
}


def builtin_ids():
    return sorted(_BUILTINS)


def builtin(func_id: str, params: FilterParams | None = None):
    """Look up a built-in target; returns (callable, default domain)."""
    try:
        factory, domain = _BUILTINS[func_id]
    except KeyError:
        raise ValueError(f"unknown builtin function {func_id!r}; know {builtin_ids()}") from None
    return factory(params), domain
