"""Double-exponential quadrature for integrands with endpoint singularities.

Finite intervals use the tanh-sinh map, the half-line uses exp-sinh.  Nodes
are stored as *distances from the nearest endpoint*, so an integrand written
in a coordinate whose singular endpoint sits at 0 sees its abscissae with
full relative precision all the way down to ~1e-300.

Integrands are called with a 1-d float array and must return an array of the
same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["QuadratureConfig", "QuadratureResult", "integrate_singular"]

_HALF_PI = 0.5 * math.pi
# t-ranges chosen so endpoint distances reach ~1e-300 (relative to the
# interval length or scale); beyond that the weights underflow anyway.
_TS_TMAX = 6.1
_ES_TMIN = -6.78
_ES_TMAX = 4.48
_MIN_LEVELS = 3


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_levels: int = 12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_levels < 4:
            raise DomainError("max_levels must be at least 4")


DEFAULT_CONFIG = QuadratureConfig()


class QuadratureResult(NamedTuple):
    value: float
    err_estimate: float
    evaluations: int


def _level_t(level: int, tmin: float, tmax: float) -> np.ndarray:
    # level 0: integer t; level k: odd multiples of 2**-k (the new nodes)
    if level == 0:
        return np.arange(math.ceil(tmin), math.floor(tmax) + 1, dtype=float)
    h = 2.0 ** -level
    j = np.arange(math.ceil((tmin / h - 1) / 2), math.floor((tmax / h - 1) / 2) + 1)
    return (2 * j + 1) * h


@lru_cache(maxsize=64)
def _tanh_sinh_nodes(level: int):
    """Unit-length interval: (distance, from_right, weight) for new nodes."""
    t = _level_t(level, -_TS_TMAX, _TS_TMAX)
    u = _HALF_PI * np.sinh(np.abs(t))
    # sigma = (1 - tanh u)/2 = distance to the nearer endpoint
    sigma = 1.0 / (1.0 + np.exp(2.0 * u))
    w = math.pi * np.cosh(t) * sigma * (1.0 - sigma)
    keep = sigma > 0.0
    return sigma[keep], (t >= 0)[keep], w[keep]


@lru_cache(maxsize=64)
def _exp_sinh_nodes(level: int):
    """Unit scale: (offset from the finite endpoint, weight) for new nodes."""
    t = _level_t(level, _ES_TMIN, _ES_TMAX)
    x = np.exp(_HALF_PI * np.sinh(t))
    w = _HALF_PI * np.cosh(t) * x
    return x, w


def _level_sum_finite(func, a, b, level):
    sigma, from_right, w = _tanh_sinh_nodes(level)
    length = b - a
    d = length * sigma
    x = np.where(from_right, b - d, a + d)
    # a node that rounds onto an endpoint carries no usable information
    inside = (x > a) & (x < b)
    x, w = x[inside], w[inside]
    vals = np.asarray(func(x), dtype=float)
    return length * float(np.dot(w, vals)), x.size, vals


def _level_sum_halfline(func, a, scale, level):
    off, w = _exp_sinh_nodes(level)
    x = a + scale * off
    inside = x > a
    x, w = x[inside], w[inside]
    vals = np.asarray(func(x), dtype=float)
    return scale * float(np.dot(w, vals)), x.size, vals


def integrate_singular(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    scale: float = 1.0,
) -> QuadratureResult:
    """Integrate ``func`` over (a, b); ``b`` may be ``math.inf``.

    Endpoint singularities of power type x**p with p > -1 are fine.  For the
    half-line, ``scale`` is the characteristic length of the integrand.

    The step size is halved level by level until two successive estimates
    differ by at most ``max(abs_tol, rel_tol * |value|)``.

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within ``cfg.max_levels`` levels, or the
        integrand returns non-finite values; ``levels`` carries the last two
        estimates.
    """
    cfg = cfg or DEFAULT_CONFIG
    a = float(a)
    b = float(b)
    if math.isnan(a) or math.isnan(b) or not math.isfinite(a):
        raise DomainError(f"bad integration limits ({a!r}, {b!r})")
    if b == a:
        return QuadratureResult(0.0, 0.0, 0)
    if b < a:
        raise DomainError(f"integration limits out of order ({a!r}, {b!r})")

    if math.isinf(b):
        if not scale > 0:
            raise DomainError("scale must be positive")

        def level_sum(level):
            return _level_sum_halfline(func, a, scale, level)
    else:

        def level_sum(level):
            return _level_sum_finite(func, a, b, level)

    total, evals, vals = level_sum(0)
    prev = math.nan
    estimate = total  # h = 1 at level 0
    for level in range(0, cfg.max_levels + 1):
        if level > 0:
            part, n, vals = level_sum(level)
            evals += n
            total += part
            prev, estimate = estimate, total * 2.0 ** -level
        if not np.all(np.isfinite(vals)):
            raise ConvergenceError(
                f"integrand returned non-finite values at level {level}",
                levels=(prev, estimate),
            )
        if level >= _MIN_LEVELS:
            diff = abs(estimate - prev)
            if diff <= max(cfg.abs_tol, cfg.rel_tol * abs(estimate)):
                return QuadratureResult(estimate, diff, evals)
    raise ConvergenceError(
        f"quadrature did not converge in {cfg.max_levels} levels; "
        f"last two levels gave {prev!r} and {estimate!r}",
        levels=(prev, estimate),
    )
