"""Relative Renyi entropy between shifted copies of a non-regular density.

For the pair (f_theta, f_{theta+eps}) with eps > 0,

    I^s(f_theta || f_{theta+eps}) = -log int f^{1-s}(x) f^s(x + eps) dx.

The affinity integral is 1 - O(eps**kappa), so integrating the product
directly loses the whole signal to rounding for small eps.  Instead the
deficiency

    delta = 1 - int f^{1-s}(x) f^s(x+eps) dx
          = int_overlap [f(x) - f^{1-s}(x) f^s(x+eps)] dx + int_lost f(x) dx

is integrated in endpoint-local coordinates with the difference formed as
-f * expm1(s * log(f(x+eps)/f(x))), and I^s = -log1p(-delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .families import Family, density, density_prime
from .quadrature import QuadratureConfig, QuadratureResult, integrate_singular

__all__ = [
    "RenyiOrder",
    "DivergenceResult",
    "affinity_deficiency",
    "renyi_divergence",
    "kl_divergence",
    "hellinger_sq",
    "endpoint_contribution",
    "integrate_singular",
    "QuadratureConfig",
]

S_MIN = 1e-6


def check_order(s: float) -> float:
    s = float(s)
    if not (S_MIN <= s <= 1.0 - S_MIN):
        raise DomainError(f"Renyi order s must lie in [{S_MIN}, 1-{S_MIN}], got {s!r}")
    return s


@dataclass(frozen=True)
class RenyiOrder:
    s: float

    def __post_init__(self):
        check_order(self.s)


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    err_estimate: float
    evaluations: int


def _difference(lf, r, s):
    """f - f^{1-s} g^s from log f and r = log g - log f, without cancellation."""
    with np.errstate(invalid="ignore", over="ignore"):
        sr = s * r
        f = np.exp(lf)
        small = np.abs(sr) < 0.5
        out = np.where(small, -f * np.expm1(np.where(small, sr, 0.0)),
                       f - np.exp(lf + sr))
    return np.where(f > 0, out, 0.0)


def _left_integrand(family: Family, s: float, eps: float):
    # x = a + u: f(x) = f(a+u), f(x+eps) = f(a+u+eps)
    def fn(u):
        return _difference(family.log_density_left(u), family.log_ratio_left(u, eps), s)
    return fn


def _right_integrand(family: Family, s: float, eps: float):
    # x = b - eps - t: f(x) = f(b-(t+eps)), f(x+eps) = f(b-t)
    def fn(t):
        return _difference(family.log_density_right(t + eps), family.log_ratio_right(t, eps), s)
    return fn


def _lost_tail(family: Family, eps: float, cfg):
    # mass of f on (b - eps, b), where f(x + eps) vanishes
    return integrate_singular(lambda t: np.exp(family.log_density_right(t)), 0.0, eps, cfg)


def _check_shift(family: Family, eps: float):
    if not math.isfinite(eps):
        raise DomainError(f"shift must be finite, got {eps!r}")
    if family.is_interval and abs(eps) >= family.support.width:
        raise DomainError(
            f"|eps|={abs(eps)!r} >= support width of {family}: distributions mutually singular"
        )


def _deficiency(family: Family, eps: float, s: float, cfg) -> QuadratureResult:
    _check_shift(family, eps)
    if eps <= 0:
        raise DomainError("deficiency needs eps > 0")
    if family.is_interval:
        half = 0.5 * (family.support.width - eps)
        parts = (
            integrate_singular(_left_integrand(family, s, eps), 0.0, half, cfg),
            integrate_singular(_right_integrand(family, s, eps), 0.0, half, cfg),
            _lost_tail(family, eps, cfg),
        )
    else:
        parts = (integrate_singular(_left_integrand(family, s, eps), 0.0, math.inf, cfg,
                                    scale=family.scale),)
    return QuadratureResult(
        sum(p.value for p in parts),
        sum(p.err_estimate for p in parts),
        sum(p.evaluations for p in parts),
    )


def affinity_deficiency(family: Family, eps: float, s: float,
                        cfg: QuadratureConfig | None = None) -> float:
    """delta = 1 - int f^{1-s}(x) f^s(x + eps) dx for eps > 0."""
    s = check_order(s)
    if eps == 0:
        return 0.0
    return max(_deficiency(family, float(eps), s, cfg).value, 0.0)


def renyi_divergence(family: Family, theta: float, eps: float, s: float,
                     cfg: QuadratureConfig | None = None) -> DivergenceResult:
    """I^s(f_theta || f_{theta+eps}) for either sign of ``eps``.

    The value does not depend on ``theta``.  A negative shift is evaluated
    through I^s(p||q) = I^{1-s}(q||p), i.e. as the positive shift from
    theta+eps back to theta with order 1-s; the density is never mirrored.
    """
    s = check_order(s)
    eps = float(eps)
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta!r}")
    _check_shift(family, eps)
    if eps == 0:
        return DivergenceResult(0.0, 0.0, 0)
    if eps < 0:
        return renyi_divergence(family, theta + eps, -eps, 1.0 - s, cfg)
    q = _deficiency(family, eps, s, cfg)
    delta = max(q.value, 0.0)
    return DivergenceResult(-math.log1p(-delta), q.err_estimate / (1.0 - delta), q.evaluations)


def kl_divergence(family: Family, eps: float,
                  cfg: QuadratureConfig | None = None) -> DivergenceResult:
    """D(f_{theta+eps} || f_theta) = int f(y) [log f(y) - log f(y+eps)] dy.

    Only half-line families qualify: on an interval the shifted support
    overhangs the original one and the divergence is infinite.  A quadrature
    that fails to settle is reported as an infinite divergence.
    """
    if family.is_interval:
        raise DomainError(f"{family}: support overhang makes KL infinite")
    eps = float(eps)
    _check_shift(family, eps)
    if eps < 0:
        raise DomainError("kl_divergence needs eps >= 0")
    if eps == 0:
        return DivergenceResult(0.0, 0.0, 0)

    def fn(u):
        return -np.exp(family.log_density_left(u)) * family.log_ratio_left(u, eps)

    try:
        q = integrate_singular(fn, 0.0, math.inf, cfg, scale=family.scale)
    except ConvergenceError:
        return DivergenceResult(math.inf, math.inf, 0)
    if not math.isfinite(q.value):
        return DivergenceResult(math.inf, math.inf, q.evaluations)
    return DivergenceResult(q.value, q.err_estimate, q.evaluations)


def hellinger_sq(family: Family, eps: float, cfg: QuadratureConfig | None = None) -> float:
    """Squared Hellinger distance 2 (1 - int sqrt(f_theta f_{theta+eps}))."""
    eps = float(eps)
    _check_shift(family, eps)
    if eps == 0:
        return 0.0
    return 2.0 * max(_deficiency(family, abs(eps), 0.5, cfg).value, 0.0)


def endpoint_contribution(family: Family, side: str, c: float, s: float, eps: float,
                          cfg: QuadratureConfig | None = None) -> float:
    """The endpoint pieces I^-_s(c, f, eps) (left) and I^+_s(c, f, eps) (right).

    left:  int_a^c f^{1-s}(x) f^s(x+eps) dx - int_a^c f - f(c) s eps - (s/2) f'(c) eps^2
    right: int_c^{b-eps} f^{1-s}(x) f^s(x+eps) dx - int_c^b f + f(c) s eps + (s/2) f'(c) eps^2

    with b = inf on a half-line.  The two pieces add up to the affinity
    minus one, whatever c is.
    """
    s = check_order(s)
    eps = float(eps)
    if not eps > 0:
        raise DomainError("endpoint_contribution needs eps > 0")
    _check_shift(family, eps)
    a, b = family.support.lower, family.support.upper
    if not a < c < b:
        raise DomainError(f"c={c!r} must lie strictly inside the support of {family}")
    if family.is_interval and not c + eps < b:
        raise DomainError(f"c + eps must stay below the right endpoint {b!r}")
    correction = density(family, c) * s * eps + 0.5 * s * density_prime(family, c) * eps**2

    if side == "left":
        q = integrate_singular(_left_integrand(family, s, eps), 0.0, c - a, cfg)
        return -q.value - correction
    if side != "right":
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if family.is_interval:
        q = integrate_singular(_right_integrand(family, s, eps), 0.0, b - eps - c, cfg)
        tail = _lost_tail(family, eps, cfg)
        return -(q.value + tail.value) + correction
    q = integrate_singular(_left_integrand(family, s, eps), c - a, math.inf, cfg,
                           scale=family.scale)
    return -q.value + correction
