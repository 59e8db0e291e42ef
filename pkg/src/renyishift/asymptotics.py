"""Closed-form limits of I^s(f_theta || f_{theta+eps}) / g(eps) as eps -> +0.

The normalisation g depends on the smallest endpoint exponent kappa:

    g(eps) = eps**kappa        0 < kappa < 2
    g(eps) = -eps**2 log eps   kappa = 2
    g(eps) = eps**2            kappa > 2

Each endpoint contributes its own limit (``endpoint_limit_constant``); the
family constant is minus their sum once every term is expressed in the same
normalisation, terms of smaller order dropping out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .divergence import check_order
from .errors import DomainError
from .families import EndpointBehavior, Family, fisher_integral_tail
from .specfun import beta_fn

__all__ = [
    "ScalingRegime",
    "LimitConstant",
    "scaling_regime",
    "regime_for_kappa",
    "g_of",
    "limit_constant",
    "endpoint_limit_constant",
    "finsler_metric",
    "default_split",
]

_BOUNDARY_GUARD = 1e-9
FISHER_TOL = 1e-13


@dataclass(frozen=True)
class ScalingRegime:
    kind: Literal["PowerKappa", "EpsSqLog", "EpsSq"]
    kappa: float

    def __post_init__(self):
        k = self.kappa
        ok = {
            "PowerKappa": 0 < k < 2,
            "EpsSqLog": k == 2,
            "EpsSq": k > 2,
        }.get(self.kind)
        if not ok:
            raise DomainError(f"inconsistent regime {self.kind} with kappa={k!r}")

    def __str__(self):
        if self.kind == "PowerKappa":
            return f"PowerKappa({self.kappa:g})"
        return self.kind

    @property
    def order(self) -> tuple[float, int]:
        """Sort key: smaller means g(eps) is larger as eps -> 0."""
        if self.kind == "PowerKappa":
            return (self.kappa, 0)
        if self.kind == "EpsSqLog":
            return (2.0, -1)
        return (2.0, 0)

    def to_json(self) -> dict:
        return {"kind": self.kind, "kappa": self.kappa}


@dataclass(frozen=True)
class LimitConstant:
    value: float
    regime: ScalingRegime
    left_term: float
    right_term: float


def regime_for_kappa(kappa: float) -> ScalingRegime:
    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    for edge in (1.0, 2.0):
        if kappa != edge and abs(kappa - edge) < _BOUNDARY_GUARD:
            raise DomainError(
                f"kappa={kappa!r} is within {_BOUNDARY_GUARD} of {edge} without equalling it; "
                "the regime is ambiguous"
            )
    if kappa < 2:
        return ScalingRegime("PowerKappa", kappa)
    if kappa == 2:
        return ScalingRegime("EpsSqLog", kappa)
    return ScalingRegime("EpsSq", kappa)


def scaling_regime(family: Family) -> ScalingRegime:
    return regime_for_kappa(family.min_kappa)


def g_of(regime: ScalingRegime, eps: float) -> float:
    if not eps > 0:
        raise DomainError(f"g(eps) needs eps > 0, got {eps!r}")
    if regime.kind == "PowerKappa":
        return eps ** regime.kappa
    if regime.kind == "EpsSqLog":
        if not eps < 1:
            raise DomainError("-eps^2 log eps needs eps < 1")
        return -eps * eps * math.log(eps)
    return eps * eps


def default_split(family: Family) -> float:
    """Interior split point c used when none is given."""
    if family.is_interval:
        return 0.5 * (family.support.lower + family.support.upper)
    return family.support.lower + family.scale


def _power_term(e: EndpointBehavior, s: float, sc: float) -> float:
    """Positive limit of -I^-/g for an endpoint with kappa < 2 or kappa = 2.

    ``s`` is the order seen from the endpoint and ``sc`` = 1 - s, passed
    separately so that neither is formed by cancellation; the right endpoint
    uses (1 - s, s).
    """
    k, A = e.kappa, e.amplitude
    if k < 1:
        return (1 - k) / k * A * s * beta_fn(s + k * sc, 1 - k)
    if k == 1:
        return A * s
    if k < 2:
        return A * s * (1 - s * (k - 1)) * beta_fn(s + k * sc, 2 - k) / k
    if k == 2:
        return A * s * sc / 2
    raise AssertionError("kappa > 2 has no power term")


def endpoint_limit_constant(
    family: Family,
    side: str,
    s: float,
    c: float | None = None,
    regime: ScalingRegime | None = None,
) -> float:
    """Limit of I^-_s(c, f, eps) / g(eps) (side='left') or I^+_s (side='right').

    By default ``g`` is the endpoint's own normalisation.  When ``regime`` is
    given the limit is taken against that normalisation instead: it is 0 if
    the endpoint term is of smaller order, and an error if it is larger.

    On a half-line the right piece is the tail beyond ``c``; its limit is
    always -s(1-s)/2 J^+_{f,c} in the eps**2 normalisation.
    """
    s = check_order(s)
    if c is None:
        c = default_split(family)
    if side == "left":
        e = family.left
        order_s, order_sc = s, 1.0 - s
    elif side == "right":
        e = family.right
        order_s, order_sc = 1.0 - s, s
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")

    if e is None:
        own = ScalingRegime("EpsSq", math.inf)
    else:
        own = regime_for_kappa(e.kappa)

    if regime is not None and regime.order != own.order:
        if own.order > regime.order:
            return 0.0
        raise DomainError(
            f"{side} endpoint term of {family} is O({own}) and dominates {regime}; the limit is infinite"
        )

    if own.kind == "EpsSq":
        jt = fisher_integral_tail(family, float(c), "left" if side == "left" else "right",
                                  FISHER_TOL)
        if not math.isfinite(jt):
            raise ArithmeticError(f"tail Fisher integral of {family} is not finite")
        return -s * (1 - s) / 2 * jt
    return -_power_term(e, order_s, order_sc)


def limit_constant(family: Family, s: float, c: float | None = None) -> LimitConstant:
    """The limit of I^s(f_theta || f_{theta+eps}) / g(eps) as eps -> +0.

    The endpoint with the larger exponent drops out (its amplitude is
    effectively zeroed); with kappa > 2 the value equals s(1-s)/2 J_f, split
    at ``c`` into the two one-sided Fisher integrals.
    """
    s = check_order(s)
    regime = scaling_regime(family)
    left = -endpoint_limit_constant(family, "left", s, c, regime)
    right = -endpoint_limit_constant(family, "right", s, c, regime)
    return LimitConstant(left + right, regime, left, right)


def finsler_metric(family: Family) -> float:
    """F = (2 * limit_constant(s=1/2)) ** (1/kappa), read with H as squared Hellinger.

    Only defined in the power regime 0 < kappa < 2.
    """
    regime = scaling_regime(family)
    if regime.kind != "PowerKappa":
        raise DomainError(f"Minkowski metric needs kappa < 2; {family} has {regime}")
    return (2.0 * limit_constant(family, 0.5).value) ** (1.0 / regime.kappa)
