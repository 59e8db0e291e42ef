"""Command-line front end.

    renyishift divergence --family exp:2 --s 0.3 --eps 0.01
    renyishift limit --family uniform --s 0.7
    renyishift converge --family beta:0.5,0.5 --s 0.5 --out r.csv
    renyishift bounds --family gamma:2.5,1

Exit status: 0 success, 2 bad arguments or domain errors, 3 numerical
non-convergence, 1 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import harness
from .asymptotics import limit_constant, scaling_regime
from .divergence import S_MIN, hellinger_sq, kl_divergence, renyi_divergence
from .errors import ConvergenceError, DomainError
from .families import builtin_examples, family_to_json, parse_family
from .ldp_bounds import alpha1_bar, alpha2_bar
from .quadrature import DEFAULT_CONFIG

__all__ = ["build_parser", "parse_args", "run", "main"]

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _num(x: float) -> str:
    """Shortest repr of x rounded to 12 significant digits (0.006, 1.0, inf)."""
    return repr(float(format(float(x), ".12g")))


def _family(text: str):
    try:
        return parse_family(text)
    except (DomainError, OSError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _order(text: str) -> float:
    s = _real(text)
    if not S_MIN <= s <= 1 - S_MIN:
        raise argparse.ArgumentTypeError(f"s must lie strictly inside (0, 1), got {text}")
    return s


def _real(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return x


def _positive(text: str) -> float:
    x = _real(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _count(minimum: int):
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {n}")
        return n
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyishift",
        description="Relative Renyi entropy between shifted non-regular densities.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", type=_family, required=True,
                        help="beta:a,b | gamma:a,b | weibull:a,b | uniform | exp:b | file.json")
    common.add_argument("--tol", type=_positive, default=None,
                        help="quadrature relative tolerance "
                             "(default 1e-10; studies default to 1e-12)")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")

    study = argparse.ArgumentParser(add_help=False)
    study.add_argument("--eps0", type=_positive, default=0.05)
    study.add_argument("--factor", type=_positive, default=2.0)
    study.add_argument("--steps", type=_count(4), default=14)
    study.add_argument("--out", default=None, help="write the report to this path")
    study.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("divergence", parents=[common], help="evaluate one divergence")
    p.add_argument("--s", type=_order, default=0.5)
    p.add_argument("--eps", type=_real, required=True)
    p.add_argument("--theta", type=_real, default=0.0)
    p.add_argument("--measure", choices=("renyi", "kl", "hellinger"), default="renyi")

    p = sub.add_parser("limit", parents=[common], help="closed-form limit constant")
    p.add_argument("--s", type=_order, required=True)

    p = sub.add_parser("converge", parents=[common, study], help="eps-sweep convergence study")
    p.add_argument("--s", type=_order, required=True)

    p = sub.add_parser("lemma", parents=[common, study], help="endpoint-piece study")
    p.add_argument("--s", type=_order, required=True)
    p.add_argument("--side", choices=("left", "right"), required=True)
    p.add_argument("--c", type=_real, default=None, help="split point (default: family-dependent)")

    p = sub.add_parser("uniformity", parents=[common], help="sup over s of |ratio - limit|")
    p.add_argument("--s-grid", type=_count(1), default=19, dest="s_grid",
                   help="number of s values evenly spaced on [0.05, 0.95]")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    sub.add_parser("bounds", parents=[common], help="large-deviation bounds alpha1, alpha2")

    p = sub.add_parser("families", help="list the built-in example families")
    p.add_argument("--json", action="store_true")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    """Parse and validate; exits with status 2 on bad arguments."""
    return build_parser().parse_args(argv)


def _cfg(args, base):
    if args.tol is None:
        return base
    return dataclasses.replace(base, rel_tol=args.tol)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _cmd_divergence(args) -> None:
    cfg = _cfg(args, DEFAULT_CONFIG)
    fam = args.family
    if args.measure == "renyi":
        res = renyi_divergence(fam, args.theta, args.eps, args.s, cfg)
        value, err, n = res.value, res.err_estimate, res.evaluations
    elif args.measure == "kl":
        res = kl_divergence(fam, args.eps, cfg)
        value, err, n = res.value, res.err_estimate, res.evaluations
    else:
        value, err, n = hellinger_sq(fam, args.eps, cfg), None, None
    if args.json:
        _print_json({"family": str(fam), "measure": args.measure, "s": args.s, "eps": args.eps,
                     "value": value, "err_estimate": err, "evaluations": n})
    else:
        print(_num(value))


def _cmd_limit(args) -> None:
    lc = limit_constant(args.family, args.s)
    if args.json:
        _print_json({"family": str(args.family), "s": args.s, "value": lc.value,
                     "regime": lc.regime.to_json(), "left_term": lc.left_term,
                     "right_term": lc.right_term})
    else:
        print(f"{_num(lc.value)} {lc.regime}")


def _emit_study(args, report) -> None:
    if args.out:
        harness.emit_report(report, args.format, args.out)
    if args.json:
        _print_json(report.to_json())
    else:
        flag = " noise-limited" if report.noise_limited else ""
        print(f"extrapolated {_num(report.extrapolated)} closed_form {_num(report.closed_form)} "
              f"{report.regime} converged={report.converged}{flag}")


def _cmd_converge(args) -> None:
    report = harness.convergence_study(args.family, args.s, args.eps0, args.factor, args.steps,
                                       _cfg(args, harness.STUDY_CONFIG))
    _emit_study(args, report)


def _cmd_lemma(args) -> None:
    report = harness.lemma_study(args.family, args.side, args.c, args.s, args.eps0, args.factor,
                                 args.steps, _cfg(args, harness.STUDY_CONFIG))
    _emit_study(args, report)


def _cmd_uniformity(args) -> None:
    grid = np.linspace(0.05, 0.95, args.s_grid) if args.s_grid > 1 else [0.5]
    report = harness.uniformity_study(args.family, grid, cfg=_cfg(args, harness.STUDY_CONFIG))
    if args.out:
        harness.emit_report(report, args.format, args.out)
    if args.json:
        _print_json(report.to_json())
    else:
        for e, d in zip(report.eps, report.sup_abs_dev):
            print(f"{_num(e)} {_num(d)}")
        print(f"monotone={report.monotone_flag}")


def _cmd_bounds(args) -> None:
    a1, a2 = alpha1_bar(args.family), alpha2_bar(args.family)
    if args.json:
        _print_json({"family": str(args.family), "alpha1": a1.to_json(), "alpha2": a2.to_json()})
    else:
        print(f"alpha1 {_num(a1.value)}")
        print(f"alpha2 {_num(a2.value)}")


def _cmd_families(args) -> None:
    rows = []
    for fam in builtin_examples():
        ends = [e for e in (fam.left, fam.right) if e is not None]
        rows.append({
            **family_to_json(fam),
            "spec": str(fam),
            "kappa": [e.kappa for e in ends],
            "amplitude": [e.amplitude for e in ends],
            "regime": str(scaling_regime(fam)),
        })
    if args.json:
        _print_json(rows)
        return
    for r in rows:
        kap = ",".join(_num(k) for k in r["kappa"])
        amp = ",".join(_num(a) for a in r["amplitude"])
        print(f"{r['spec']:<16} kappa={kap:<10} A={amp:<40} {r['regime']}")


_COMMANDS = {
    "divergence": _cmd_divergence,
    "limit": _cmd_limit,
    "converge": _cmd_converge,
    "lemma": _cmd_lemma,
    "uniformity": _cmd_uniformity,
    "bounds": _cmd_bounds,
    "families": _cmd_families,
}


def run(args: argparse.Namespace) -> int:
    try:
        _COMMANDS[args.verb](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        levels = ", ".join(repr(v) for v in exc.levels[-2:])
        print(f"numerical error: {exc} (last two levels: {levels})", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    return run(parse_args(argv))
