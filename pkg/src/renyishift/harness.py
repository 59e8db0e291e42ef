"""Numerical convergence studies of I^s(f_theta || f_{theta+eps}) / g(eps).

A study evaluates the divergence on a geometric eps-sweep, forms the ratios
against the regime's normalisation g, and extrapolates them to eps -> 0:

* power and eps**2 regimes: Aitken delta-squared on the last three ratios;
* the -eps**2 log eps regime (kappa = 2): the leading correction is linear
  in v = 1/log(1/eps), so the last two ratios are extrapolated linearly in v.

Grid points are independent, so they are fanned out to a thread pool; the
results are collected in input order and the reports are identical to a
sequential run.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from .asymptotics import (
    ScalingRegime,
    default_split,
    endpoint_limit_constant,
    g_of,
    limit_constant,
    regime_for_kappa,
    scaling_regime,
)
from .divergence import check_order, endpoint_contribution, renyi_divergence
from .errors import ConvergenceError, DomainError
from .families import Family
from .quadrature import QuadratureConfig

__all__ = [
    "STUDY_CONFIG",
    "Row",
    "ConvergenceReport",
    "UniformityReport",
    "default_workers",
    "extrapolate",
    "convergence_study",
    "lemma_study",
    "uniformity_study",
    "emit_report",
]

# Tighter than the library default: the ratios at eps ~ 1e-5 need the
# deficiency to ~12 digits for the extrapolation to be meaningful.
STUDY_CONFIG = QuadratureConfig(abs_tol=1e-20, rel_tol=1e-12, max_levels=14)
NOISE_FRACTION = 0.01
DEFAULT_EPS_SWEEP = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
CSV_HEADER = ("eps", "I_s", "g_eps", "ratio", "closed_form", "rel_err")


class Row(NamedTuple):
    eps: float
    I_s: float
    g_eps: float
    ratio: float
    closed_form: float
    rel_err: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Ratios I/g on an eps-sweep with their extrapolated limit.

    For a lemma study ``side`` and ``c`` are set and the ``I_s`` column holds
    the endpoint piece I-(c) or I+(c) instead of the full divergence.
    """

    family: str
    s: float
    regime: ScalingRegime
    rows: tuple[Row, ...]
    extrapolated: float
    closed_form: float
    converged: bool
    noise_limited: bool = False
    side: str | None = None
    c: float | None = None

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "s": self.s,
            "regime": self.regime.to_json(),
            "rows": [r._asdict() for r in self.rows],
            "extrapolated": self.extrapolated,
            "closed_form": self.closed_form,
            "converged": self.converged,
            "noise_limited": self.noise_limited,
        }
        if self.side is not None:
            out["side"] = self.side
            out["c"] = self.c
        return out


@dataclass(frozen=True)
class UniformityReport:
    family: str
    regime: ScalingRegime
    s_grid: tuple[float, ...]
    eps: tuple[float, ...]
    sup_abs_dev: tuple[float, ...]
    monotone_flag: bool

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "regime": self.regime.to_json(),
            "s_grid": list(self.s_grid),
            "eps": list(self.eps),
            "sup_abs_dev": list(self.sup_abs_dev),
            "monotone_flag": self.monotone_flag,
        }


def default_workers() -> int:
    env = os.environ.get("RENYI_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"RENYI_THREADS must be a positive integer, got {env!r}") from None
        if n < 1:
            raise DomainError(f"RENYI_THREADS must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def _capture(fn, arg):
    try:
        return fn(arg), None
    except ConvergenceError as exc:
        return None, exc


def _ordered_map(fn: Callable, items: Sequence, workers: int | None) -> list:
    """[(value, error)] in input order; numerical failures are captured."""
    workers = default_workers() if workers is None else int(workers)
    if workers <= 1 or len(items) <= 1:
        return [_capture(fn, x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(lambda x: _capture(fn, x), items))


def _aitken(x0: float, x1: float, x2: float) -> float:
    d1, d2 = x2 - x1, x1 - x0
    num = d1 * d1
    den = d1 - d2
    if num == 0.0 or abs(den) < 1e-14 * abs(num) or not math.isfinite(den):
        return x2
    return x2 - num / den


def extrapolate(eps: Sequence[float], ratios: Sequence[float], regime: ScalingRegime) -> float:
    """Limit of the ratio sequence as eps -> 0."""
    if not ratios:
        return math.nan
    if regime.kind == "EpsSqLog":
        if len(ratios) < 2:
            return ratios[-1]
        v1, v2 = (1.0 / math.log(1.0 / e) for e in eps[-2:])
        r1, r2 = ratios[-2:]
        return r2 - (r2 - r1) / (v2 - v1) * v2
    if len(ratios) < 3:
        return ratios[-1]
    return _aitken(*ratios[-3:])


def _sweep(eps0: float, factor: float, steps: int) -> list[float]:
    if not (eps0 > 0 and math.isfinite(eps0)):
        raise DomainError(f"eps0 must be positive, got {eps0!r}")
    if not factor > 1:
        raise DomainError(f"factor must exceed 1, got {factor!r}")
    if steps < 4:
        raise DomainError(f"steps must be at least 4, got {steps!r}")
    return [eps0 * factor ** (-k) for k in range(steps)]


def _rel_err(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x - ref)


def _row(eps: float, value: float, regime: ScalingRegime, closed: float) -> Row:
    g = g_of(regime, eps)
    ratio = value / g
    return Row(eps, value, g, ratio, closed, _rel_err(ratio, closed))


def _assemble(family, s, regime, closed, eps_list, results, rtol, noise_guard, side=None, c=None):
    rows: list[Row] = []
    noise_limited = False

    def report():
        eps = [r.eps for r in rows]
        ratios = [r.ratio for r in rows]
        extr = extrapolate(eps, ratios, regime)
        ok = bool(rows) and _rel_err(extr, closed) <= rtol
        return ConvergenceReport(str(family), s, regime, tuple(rows), extr, closed, ok,
                                 noise_limited, side, c)

    for eps, (res, err) in zip(eps_list, results):
        if err is not None:
            raise ConvergenceError(
                f"quadrature failed at eps={eps!r}: {err}", levels=err.levels, partial=report()
            ) from err
        value, err_estimate = res
        if noise_guard and err_estimate > NOISE_FRACTION * abs(value):
            noise_limited = True
            break
        rows.append(_row(eps, value, regime, closed))
    return report()


def _default_rtol(regime: ScalingRegime) -> float:
    # kappa = 2 converges only logarithmically
    return 0.1 if regime.kind == "EpsSqLog" else 0.01


def convergence_study(
    family: Family,
    s: float,
    eps0: float = 0.05,
    factor: float = 2.0,
    steps: int = 14,
    cfg: QuadratureConfig | None = None,
    rtol: float | None = None,
    workers: int | None = None,
) -> ConvergenceReport:
    """Ratios I^s / g(eps) for eps_k = eps0 * factor**-k, k = 0..steps-1.

    The sweep stops early, flagging ``noise_limited``, once the quadrature
    error estimate exceeds 1% of I^s.  ``converged`` compares the
    extrapolated ratio with the closed form at relative tolerance ``rtol``
    (default 1%, or 10% when kappa = 2).

    Raises
    ------
    ConvergenceError
        If the quadrature fails at some eps; ``partial`` holds the report
        built from the preceding rows.
    """
    s = check_order(s)
    cfg = cfg or STUDY_CONFIG
    regime = scaling_regime(family)
    eps_list = _sweep(eps0, factor, steps)
    if regime.kind == "EpsSqLog" and not eps0 < 1:
        raise DomainError("the -eps^2 log eps normalisation needs eps0 < 1")
    closed = limit_constant(family, s).value

    def point(eps):
        r = renyi_divergence(family, 0.0, eps, s, cfg)
        return r.value, r.err_estimate

    results = _ordered_map(point, eps_list, workers)
    rtol = _default_rtol(regime) if rtol is None else rtol
    return _assemble(family, s, regime, closed, eps_list, results, rtol, noise_guard=True)


def _endpoint_regime(family: Family, side: str) -> ScalingRegime:
    e = family.left if side == "left" else family.right
    if e is None:
        return ScalingRegime("EpsSq", math.inf)
    return regime_for_kappa(e.kappa)


def lemma_study(
    family: Family,
    side: str,
    c: float | None = None,
    s: float = 0.5,
    eps0: float = 0.05,
    factor: float = 2.0,
    steps: int = 14,
    cfg: QuadratureConfig | None = None,
    rtol: float | None = None,
    workers: int | None = None,
) -> ConvergenceReport:
    """Ratios I-(c)/g or I+(c)/g against the endpoint limit constant.

    ``g`` is the endpoint's own normalisation; the right piece of a
    half-line family is the tail beyond ``c`` and uses eps**2.  No noise
    guard is applied since the endpoint pieces may legitimately vanish.
    """
    s = check_order(s)
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    cfg = cfg or STUDY_CONFIG
    c = default_split(family) if c is None else float(c)
    regime = _endpoint_regime(family, side)
    eps_list = _sweep(eps0, factor, steps)
    closed = endpoint_limit_constant(family, side, s, c)

    def point(eps):
        return endpoint_contribution(family, side, c, s, eps, cfg), 0.0

    results = _ordered_map(point, eps_list, workers)
    rtol = _default_rtol(regime) if rtol is None else rtol
    return _assemble(family, s, regime, closed, eps_list, results, rtol, noise_guard=False,
                     side=side, c=c)


def uniformity_study(
    family: Family,
    s_grid: Iterable[float] | None = None,
    eps_sweep: Iterable[float] = DEFAULT_EPS_SWEEP,
    cfg: QuadratureConfig | None = None,
    workers: int | None = None,
) -> UniformityReport:
    """sup over ``s_grid`` of |I^s/g(eps) - C(s)| for each eps in the sweep.

    ``monotone_flag`` is set when the last three sup-deviations do not
    increase.
    """
    grid = tuple(float(s) for s in (np.linspace(0.05, 0.95, 19) if s_grid is None else s_grid))
    if not grid or any(not 0.01 <= s <= 0.99 for s in grid):
        raise DomainError("s_grid must be a non-empty subset of [0.01, 0.99]")
    if list(grid) != sorted(grid):
        raise DomainError("s_grid must be sorted")
    eps_list = tuple(float(e) for e in eps_sweep)
    if not eps_list or any(not e > 0 for e in eps_list):
        raise DomainError("eps sweep must be non-empty and positive")
    cfg = cfg or STUDY_CONFIG
    regime = scaling_regime(family)
    closed = {s: limit_constant(family, s).value for s in grid}
    pairs = [(e, s) for e in eps_list for s in grid]

    def point(pair):
        e, s = pair
        return renyi_divergence(family, 0.0, e, s, cfg).value / g_of(regime, e)

    results = _ordered_map(point, pairs, workers)
    devs = []
    for k, e in enumerate(eps_list):
        worst = 0.0
        for j, s in enumerate(grid):
            ratio, err = results[k * len(grid) + j]
            if err is not None:
                raise ConvergenceError(f"quadrature failed at eps={e!r}, s={s!r}: {err}",
                                       levels=err.levels) from err
            worst = max(worst, abs(ratio - closed[s]))
        devs.append(worst)
    tail = devs[-3:]
    monotone = all(b <= a for a, b in zip(tail, tail[1:]))
    return UniformityReport(str(family), regime, grid, eps_list, tuple(devs), monotone)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _render(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2) + "\n"
    if fmt != "csv":
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(report, UniformityReport):
        writer.writerow(("eps", "sup_abs_dev"))
        for e, d in zip(report.eps, report.sup_abs_dev):
            writer.writerow((_fmt(e), _fmt(d)))
    else:
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow(tuple(_fmt(v) for v in row))
    return buf.getvalue()


def emit_report(report: ConvergenceReport | UniformityReport, fmt: str = "csv",
                destination: str | os.PathLike | TextIO | None = None) -> str:
    """Serialise ``report`` as CSV or JSON and write it to ``destination``.

    ``destination`` may be a path, an open text stream, or None for stdout.
    The rendered text is also returned.
    """
    text = _render(report, fmt)
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {os.fspath(destination)!r}: {exc}") from exc
    return text
