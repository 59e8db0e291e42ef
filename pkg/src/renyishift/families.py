"""Generator densities for non-regular location-shift families.

Every family has support (a, b) or (a, inf) and power-law endpoint behaviour
f(a + x) ~ A x**(kappa - 1).  Besides the plain density, each family exposes
its log-density and score in *endpoint-local* coordinates: ``u`` measured
from the left endpoint, ``t`` measured back from the right one.  The
quadrature code relies on those to keep full precision next to singular
endpoints.

The shift convention is f_theta(x) = f(x - theta).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, ClassVar

import numpy as np

from .errors import DomainError
from .quadrature import QuadratureConfig, QuadratureResult, integrate_singular
from .specfun import ln_gamma, log_beta

__all__ = [
    "Support",
    "EndpointBehavior",
    "Family",
    "Beta",
    "Gamma",
    "Weibull",
    "LocationShift",
    "uniform",
    "exponential",
    "parse_family",
    "family_from_json",
    "family_to_json",
    "builtin_examples",
    "density",
    "log_density",
    "density_prime",
    "endpoint_behavior",
    "fisher_integral",
    "fisher_integral_tail",
]

NORMALIZATION_TOL = 1e-10
_NORMALIZATION_CFG = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13, max_levels=14)


@dataclass(frozen=True)
class Support:
    """Open interval (lower, upper); ``upper`` is ``inf`` for a half-line."""

    lower: float
    upper: float = math.inf

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError(f"empty support ({self.lower}, {self.upper})")

    @property
    def is_interval(self) -> bool:
        return math.isfinite(self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class EndpointBehavior:
    kappa: float
    amplitude: float

    def __post_init__(self):
        if not (self.kappa > 0 and self.amplitude > 0):
            raise DomainError("endpoint exponent and amplitude must be positive")


def _xlog(c: float, y):
    # c*log(y), with the c == 0 case exact even where log(y) is infinite
    if c == 0.0:
        return np.zeros_like(y, dtype=float)
    return c * np.log(y)


def _xlog1p(c: float, y):
    if c == 0.0:
        return np.zeros_like(y, dtype=float)
    return c * np.log1p(y)


def _check_params(*values):
    for v in values:
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise DomainError(f"family parameters must be finite and positive, got {v!r}")


def _combine(*parts: QuadratureResult) -> QuadratureResult:
    return QuadratureResult(
        sum(p.value for p in parts),
        sum(p.err_estimate for p in parts),
        sum(p.evaluations for p in parts),
    )


@dataclass(frozen=True)
class Family:
    """Base class; concrete families fill in the endpoint-local formulas."""

    name: ClassVar[str] = ""

    # -- per-family formulas (vectorised over numpy arrays) -----------------
    def log_density_left(self, u):
        """log f(a + u) for u > 0."""
        raise NotImplementedError

    def log_density_right(self, t):
        """log f(b - t) for t > 0 (interval families only)."""
        raise DomainError(f"{self} has no right endpoint")

    def uscore_left(self, u):
        """u * (log f)'(a + u); stays bounded as u -> 0."""
        raise NotImplementedError

    def tscore_right(self, t):
        """t * (log f)'(b - t); stays bounded as t -> 0."""
        raise DomainError(f"{self} has no right endpoint")

    def log_ratio_left(self, u, eps):
        """log f(a+u+eps) - log f(a+u); override with a cancellation-free form."""
        return self.log_density_left(u + eps) - self.log_density_left(u)

    def log_ratio_right(self, t, eps):
        """log f(b-t) - log f(b-t-eps)."""
        return self.log_density_right(t) - self.log_density_right(t + eps)

    @property
    def params(self) -> tuple:
        raise NotImplementedError

    @property
    def support(self) -> Support:
        raise NotImplementedError

    @property
    def left(self) -> EndpointBehavior:
        raise NotImplementedError

    @property
    def right(self) -> EndpointBehavior | None:
        return None

    @property
    def scale(self) -> float:
        """Characteristic length used by the half-line quadrature."""
        return 1.0

    # -----------------------------------------------------------------------
    def __post_init__(self):
        _check_params(*self.params)
        total = self.integrate_local(lambda side, d: np.exp(self.log_density_local(side, d)),
                                     _NORMALIZATION_CFG)
        if abs(total.value - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"{self} does not integrate to 1 (got {total.value!r})")

    def __str__(self):
        return f"{self.name}:" + ",".join(repr(float(p)) for p in self.params)

    @property
    def is_interval(self) -> bool:
        return self.right is not None

    @property
    def min_kappa(self) -> float:
        if self.right is None:
            return self.left.kappa
        return min(self.left.kappa, self.right.kappa)

    def log_density_local(self, side: str, d):
        return self.log_density_left(d) if side == "left" else self.log_density_right(d)

    def score_local(self, side: str, d):
        """d/dx log f at the point at local distance d from ``side``."""
        if side == "left":
            return self.uscore_left(d) / d
        return self.tscore_right(d) / d

    def fisher_density_local(self, side: str, d):
        """f^{-1} (f')^2 = f * score^2, evaluated in log space."""
        ds = self.uscore_left(d) if side == "left" else self.tscore_right(d)
        with np.errstate(divide="ignore"):
            logv = self.log_density_local(side, d) + 2.0 * (np.log(np.abs(ds)) - np.log(d))
        return np.exp(logv)

    def to_local(self, x: float) -> tuple[str, float]:
        """Nearest endpoint and distance to it for an interior point x."""
        a, b = self.support.lower, self.support.upper
        if not (a < x < b):
            raise DomainError(f"x={x!r} outside the open support of {self}")
        if self.is_interval and (b - x) < (x - a):
            return "right", b - x
        return "left", x - a

    def integrate_local(
        self,
        integrand: Callable[[str, np.ndarray], np.ndarray],
        cfg: QuadratureConfig | None = None,
    ) -> QuadratureResult:
        """Integrate ``integrand(side, d)`` over the whole support.

        Interval supports are split at the midpoint and each half is
        integrated from its endpoint, so both endpoints are resolved.
        """
        if self.is_interval:
            half = 0.5 * self.support.width
            return _combine(
                integrate_singular(lambda u: integrand("left", u), 0.0, half, cfg),
                integrate_singular(lambda t: integrand("right", t), 0.0, half, cfg),
            )
        return integrate_singular(lambda u: integrand("left", u), 0.0, math.inf, cfg,
                                  scale=self.scale)


@dataclass(frozen=True)
class Beta(Family):
    """f(x) = x**(alpha-1) (1-x)**(beta-1) / B(alpha, beta) on (0, 1)."""

    alpha: float
    beta: float
    name: ClassVar[str] = "beta"

    @property
    def params(self):
        return (self.alpha, self.beta)

    @property
    def support(self):
        return Support(0.0, 1.0)

    @property
    def _log_norm(self):
        return log_beta(self.alpha, self.beta)

    @property
    def left(self):
        return EndpointBehavior(self.alpha, math.exp(-self._log_norm))

    @property
    def right(self):
        return EndpointBehavior(self.beta, math.exp(-self._log_norm))

    def log_density_left(self, u):
        u = np.asarray(u, dtype=float)
        return _xlog(self.alpha - 1, u) + _xlog1p(self.beta - 1, -u) - self._log_norm

    def log_density_right(self, t):
        t = np.asarray(t, dtype=float)
        return _xlog1p(self.alpha - 1, -t) + _xlog(self.beta - 1, t) - self._log_norm

    def uscore_left(self, u):
        u = np.asarray(u, dtype=float)
        return (self.alpha - 1) - (self.beta - 1) * u / (1.0 - u)

    def tscore_right(self, t):
        t = np.asarray(t, dtype=float)
        return (self.alpha - 1) * t / (1.0 - t) - (self.beta - 1)

    def log_ratio_left(self, u, eps):
        u = np.asarray(u, dtype=float)
        return _xlog1p(self.alpha - 1, eps / u) + _xlog1p(self.beta - 1, -eps / (1.0 - u))

    def log_ratio_right(self, t, eps):
        t = np.asarray(t, dtype=float)
        return -_xlog1p(self.alpha - 1, -eps / (1.0 - t)) - _xlog1p(self.beta - 1, eps / t)


@dataclass(frozen=True)
class Gamma(Family):
    """f(x) = beta**alpha x**(alpha-1) exp(-beta x) / Gamma(alpha) on (0, inf)."""

    alpha: float
    beta: float
    name: ClassVar[str] = "gamma"

    @property
    def params(self):
        return (self.alpha, self.beta)

    @property
    def support(self):
        return Support(0.0)

    @property
    def scale(self):
        return max(self.alpha, 1.0) / self.beta

    @property
    def left(self):
        return EndpointBehavior(
            self.alpha, math.exp(self.alpha * math.log(self.beta) - ln_gamma(self.alpha))
        )

    def log_density_left(self, u):
        u = np.asarray(u, dtype=float)
        return (self.alpha * math.log(self.beta) - ln_gamma(self.alpha)
                + _xlog(self.alpha - 1, u) - self.beta * u)

    def uscore_left(self, u):
        u = np.asarray(u, dtype=float)
        return (self.alpha - 1) - self.beta * u

    def log_ratio_left(self, u, eps):
        u = np.asarray(u, dtype=float)
        return _xlog1p(self.alpha - 1, eps / u) - self.beta * eps


@dataclass(frozen=True)
class Weibull(Family):
    """f(x) = alpha beta x**(alpha-1) exp(-beta x**alpha) on (0, inf)."""

    alpha: float
    beta: float
    name: ClassVar[str] = "weibull"

    @property
    def params(self):
        return (self.alpha, self.beta)

    @property
    def support(self):
        return Support(0.0)

    @property
    def scale(self):
        return self.beta ** (-1.0 / self.alpha)

    @property
    def left(self):
        return EndpointBehavior(self.alpha, self.alpha * self.beta)

    def log_density_left(self, u):
        u = np.asarray(u, dtype=float)
        return (math.log(self.alpha * self.beta) + _xlog(self.alpha - 1, u)
                - self.beta * u ** self.alpha)

    def uscore_left(self, u):
        u = np.asarray(u, dtype=float)
        return (self.alpha - 1) - self.alpha * self.beta * u ** self.alpha

    def log_ratio_left(self, u, eps):
        u = np.asarray(u, dtype=float)
        a = self.alpha
        with np.errstate(over="ignore", invalid="ignore"):
            # (u+eps)^a - u^a; the expm1 form avoids cancellation when eps << u
            growth = np.where(eps > u, (u + eps) ** a - u ** a,
                              u ** a * np.expm1(a * np.log1p(eps / u)))
        return _xlog1p(a - 1, eps / u) - self.beta * growth


def uniform() -> Beta:
    return Beta(1.0, 1.0)


def exponential(beta: float) -> Gamma:
    return Gamma(1.0, beta)


@dataclass(frozen=True)
class LocationShift:
    """The shifted density f_theta(x) = f(x - theta)."""

    family: Family
    theta: float

    def density(self, x):
        return density(self.family, np.asarray(x, dtype=float) - self.theta)


# -- operations ---------------------------------------------------------------

def density(family: Family, x):
    """f(x); exactly 0 outside the open support.  Scalar in, scalar out."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    a, b = family.support.lower, family.support.upper
    inside = (x > a) & (x < b)
    if np.any(inside):
        xi = x[inside]
        if family.is_interval:
            mid = 0.5 * (a + b)
            left = xi <= mid
            vals = np.empty_like(xi)
            vals[left] = np.exp(family.log_density_left(xi[left] - a))
            vals[~left] = np.exp(family.log_density_right(b - xi[~left]))
        else:
            vals = np.exp(family.log_density_left(xi - a))
        out[inside] = vals
    return float(out[0]) if scalar else out


def _interior_eval(family: Family, x, fn):
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        side, d = family.to_local(float(xv))
        out[i] = fn(side, np.array([d]))[0]
    return float(out[0]) if scalar else out


def log_density(family: Family, x):
    """log f(x) for x strictly inside the support; DomainError otherwise."""
    return _interior_eval(family, x, family.log_density_local)


def density_prime(family: Family, x):
    """f'(x) for x strictly inside the support; DomainError otherwise."""
    def fn(side, d):
        return np.exp(family.log_density_local(side, d)) * family.score_local(side, d)
    return _interior_eval(family, x, fn)


def endpoint_behavior(family: Family) -> tuple[EndpointBehavior, EndpointBehavior | None]:
    return family.left, family.right


def _fisher_finite_at(e: EndpointBehavior) -> bool:
    # f'^2/f ~ A (kappa-1)^2 x^(kappa-3): integrable iff kappa > 2; kappa = 1
    # has a bounded score and is finite as well
    return e.kappa > 2 or e.kappa == 1


def _fisher_cfg(tol: float) -> QuadratureConfig:
    if not tol > 0:
        raise DomainError("tol must be positive")
    return QuadratureConfig(abs_tol=tol * 1e-6, rel_tol=tol, max_levels=16)


@lru_cache(maxsize=256)
def fisher_integral(family: Family, tol: float = 1e-12) -> float:
    """J_f = int f^{-1} (f')^2 over the support, or ``inf`` when it diverges."""
    ends = [family.left] + ([family.right] if family.right is not None else [])
    if not all(_fisher_finite_at(e) for e in ends):
        return math.inf
    return family.integrate_local(family.fisher_density_local, _fisher_cfg(tol)).value


@lru_cache(maxsize=1024)
def fisher_integral_tail(family: Family, c: float, side: str, tol: float = 1e-12) -> float:
    """One-sided Fisher integral J^-_{f,c} (side='left') or J^+_{f,c} ('right')."""
    a, b = family.support.lower, family.support.upper
    if not a < c < b:
        raise DomainError(f"c={c!r} must lie strictly inside the support of {family}")
    cfg = _fisher_cfg(tol)
    if side == "left":
        if not _fisher_finite_at(family.left):
            return math.inf
        return integrate_singular(lambda u: family.fisher_density_local("left", u),
                                  0.0, c - a, cfg).value
    if side != "right":
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if family.is_interval:
        if not _fisher_finite_at(family.right):
            return math.inf
        return integrate_singular(lambda t: family.fisher_density_local("right", t),
                                  0.0, b - c, cfg).value
    return integrate_singular(lambda u: family.fisher_density_local("left", u),
                              c - a, math.inf, cfg, scale=family.scale).value


# -- construction from text / JSON ----------------------------------------------

_CONSTRUCTORS = {"beta": Beta, "gamma": Gamma, "weibull": Weibull}


def _build(name: str, params) -> Family:
    name = name.strip().lower()
    params = [float(p) for p in params]
    if name == "uniform":
        if params:
            raise DomainError("uniform takes no parameters")
        return uniform()
    if name in ("exp", "exponential"):
        if len(params) != 1:
            raise DomainError("exp takes one parameter: exp:beta")
        _check_params(*params)
        return exponential(params[0])
    if name in _CONSTRUCTORS:
        if len(params) != 2:
            raise DomainError(f"{name} takes two parameters: {name}:alpha,beta")
        _check_params(*params)
        return _CONSTRUCTORS[name](*params)
    raise DomainError(f"unknown family {name!r}")


def parse_family(text: str) -> Family:
    """Parse ``beta:a,b``, ``gamma:a,b``, ``weibull:a,b``, ``uniform``, ``exp:b``.

    A path ending in ``.json`` is read as a family file.
    """
    text = text.strip()
    if text.endswith(".json") and os.path.exists(text):
        with open(text) as fh:
            return family_from_json(json.load(fh))
    name, _, rest = text.partition(":")
    try:
        params = [p for p in rest.split(",") if p.strip()] if rest else []
        return _build(name, params)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse family {text!r}: {exc}") from None


def family_from_json(obj) -> Family:
    """Build a family from ``{"name": "beta", "params": [0.5, 0.5]}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return _build(obj["name"], obj.get("params", []))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"bad family object {obj!r}: {exc}") from None


def family_to_json(family: Family) -> dict:
    return {"name": family.name, "params": [float(p) for p in family.params]}


def builtin_examples() -> list[Family]:
    """One representative per family and kappa-regime, used by studies and docs."""
    return [
        Beta(0.5, 0.5), uniform(), Beta(1.5, 1.5), Beta(2.0, 2.0), Beta(3.0, 3.0),
        exponential(1.0), Gamma(0.5, 1.0), Gamma(1.5, 1.0), Gamma(2.0, 1.0), Gamma(2.5, 1.0),
        Weibull(0.8, 1.0), Weibull(1.5, 1.0), Weibull(2.0, 1.0), Weibull(3.0, 1.0),
    ]
