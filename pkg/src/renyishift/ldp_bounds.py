"""Large-deviation upper bounds built from the limit constants C(s).

With kappa the smallest endpoint exponent and C(s) = limit_constant(s):

    alpha1 = 2**kappa sup_s C(s)          0 < kappa < 2
    alpha1 = 4 sup_s C(s)                 kappa >= 2

    alpha2 = sup_s W(s)                   0 < kappa < 1
    alpha2 = 2 C(1/2)                     kappa = 1
    alpha2 = inf_s W(s)                   1 < kappa < 2
    alpha2 = inf_s C(s) / (s (1 - s))     kappa >= 2

where W(s) = C(s) / (s (1 - s)) * (s**p + (1 - s)**p)**(kappa - 1) with
p = 1 / (kappa - 1).  The bounds do not depend on theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .asymptotics import limit_constant, scaling_regime
from .divergence import S_MIN
from .errors import ConvergenceError, DomainError
from .families import Family

__all__ = ["BoundResult", "optimize_over_s", "alpha1_bar", "alpha2_bar", "weighted_objective"]

GRID_POINTS = 1024
# relative spread below which an objective counts as constant in s
PLATEAU_RTOL = 1e-11

Mode = Literal["sup", "inf", "fixed"]


@dataclass(frozen=True)
class BoundResult:
    """Optimal value of an objective over s in (0, 1).

    ``arg_s`` is the optimiser.  When the extremum is only approached at an
    end of the open interval, ``boundary`` is ``"s->0"`` or ``"s->1"``,
    ``arg_s`` is that end (0.0 or 1.0) and ``value`` is the extrapolated
    one-sided limit; ``note`` then says whether the limit is finite.
    """

    value: float
    arg_s: float
    mode: Mode
    boundary: str | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "arg_s": self.arg_s,
            "mode": self.mode,
            "boundary": self.boundary,
            "note": self.note,
        }


def _boundary_limit(objective, side: str) -> tuple[float, str]:
    # Richardson on h, 2h, 4h from the end: exact for quadratics in h
    h = S_MIN
    pts = (h, 2 * h, 4 * h)
    s_vals = pts if side == "s->0" else tuple(1.0 - p for p in pts)
    f1, f2, f4 = (objective(s) for s in s_vals)
    d1, d2 = f1 - f2, f2 - f4
    if abs(d1) > abs(d2) and abs(d1) > 1e-6 * max(abs(f1), 1e-300):
        # increments not shrinking as h halves: no finite limit
        return math.copysign(math.inf, d1), "diverges"
    return (8.0 * f1 - 6.0 * f2 + f4) / 3.0, "finite limit"


def optimize_over_s(objective: Callable[[float], float], mode: Mode, tol: float = 1e-8
                    ) -> BoundResult:
    """Supremum or infimum of ``objective`` over s in (0, 1).

    A 1024-point grid on [1e-6, 1 - 1e-6] locates the extremum, which is
    then refined by bounded golden-section/Brent search to |ds| <= ``tol``.  Constant
    objectives report s = 1/2.  An extremum at an end of the grid is
    reported as a boundary limit.

    Raises
    ------
    ConvergenceError
        If the objective is not finite at some interior grid point.
    """
    if mode not in ("sup", "inf"):
        raise DomainError(f"mode must be 'sup' or 'inf', got {mode!r}")
    sign = 1.0 if mode == "inf" else -1.0
    grid = np.linspace(S_MIN, 1.0 - S_MIN, GRID_POINTS)
    vals = np.array([objective(float(s)) for s in grid])
    bad = ~np.isfinite(vals[1:-1])
    if bad.any():
        s_bad = grid[1:-1][bad][0]
        raise ConvergenceError(f"objective is not finite at interior s={s_bad!r}")

    finite = vals[np.isfinite(vals)]
    scale = np.max(np.abs(finite)) if finite.size else 0.0
    if finite.size == vals.size and np.ptp(vals) <= PLATEAU_RTOL * scale:
        return BoundResult(float(objective(0.5)), 0.5, mode)

    with np.errstate(invalid="ignore"):
        i = int(np.nanargmin(sign * vals))
    if i == 0 or i == GRID_POINTS - 1:
        side = "s->0" if i == 0 else "s->1"
        value, note = _boundary_limit(objective, side)
        return BoundResult(float(value), 0.0 if i == 0 else 1.0, mode, side, note)

    # bounded Brent: golden-section steps with parabolic acceleration; unlike
    # the plain golden method it accepts ties at the bracket ends
    res = minimize_scalar(lambda s: sign * objective(s), method="bounded",
                          bounds=(grid[i - 1], grid[i + 1]),
                          options={"xatol": tol})
    s_best, v_best = float(grid[i]), float(vals[i])
    if grid[i - 1] < res.x < grid[i + 1] and res.fun <= sign * v_best:
        s_best, v_best = float(res.x), float(objective(float(res.x)))
    return BoundResult(v_best, s_best, mode)


def weighted_objective(family: Family) -> Callable[[float], float]:
    """W(s) for 0 < kappa < 2, kappa != 1, evaluated in log space."""
    kappa = scaling_regime(family).kappa
    if not (0 < kappa < 2) or kappa == 1:
        raise DomainError(f"weighted objective needs kappa in (0,1) or (1,2), got {kappa!r}")
    p = 1.0 / (kappa - 1.0)

    def w(s: float) -> float:
        log_weight = (kappa - 1.0) * np.logaddexp(p * math.log(s), p * math.log1p(-s))
        return limit_constant(family, s).value / (s * (1.0 - s)) * math.exp(log_weight)

    return w


def alpha1_bar(family: Family, tol: float = 1e-8) -> BoundResult:
    regime = scaling_regime(family)
    res = optimize_over_s(lambda s: limit_constant(family, s).value, "sup", tol)
    factor = 2.0 ** regime.kappa if regime.kind == "PowerKappa" else 4.0
    return BoundResult(factor * res.value, res.arg_s, res.mode, res.boundary, res.note)


def alpha2_bar(family: Family, tol: float = 1e-8) -> BoundResult:
    regime = scaling_regime(family)
    kappa = regime.kappa
    if regime.kind != "PowerKappa":
        return optimize_over_s(lambda s: limit_constant(family, s).value / (s * (1.0 - s)),
                               "inf", tol)
    if kappa == 1:
        return BoundResult(2.0 * limit_constant(family, 0.5).value, 0.5, "fixed")
    return optimize_over_s(weighted_objective(family), "sup" if kappa < 1 else "inf", tol)
