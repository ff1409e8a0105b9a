"""Command-line interface.

Exit codes: 0 success, 2 bad flags or parameters, 3 numerical convergence
failure, 4 a validation check failed.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Optional

import numpy as np

from . import validation
from .distance import DistancePairParams, phi
from .errors import ConvergenceError, DomainError
from .montecarlo import SimConfig, simulate_distance, simulate_position
from .quadrature import QuadratureControl
from .specfun import SeriesControl
from .telegraph import TelegraphParams, cdf

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 2, 3, 4

TABLE_DEFAULTS = dict(lambda1=2.0, lambda2=1.0, c1=4.0, c2=2.0, t=3.0)
FIGURE1_DEFAULTS = dict(lambda1=1.5, c1=1.0, t=2.0)


def _fmt(v: float) -> str:
    return "%.6g" % v


def _series_control(args) -> SeriesControl:
    if args.terms is not None:
        return SeriesControl.fixed(args.terms)
    if args.tol is not None:
        return SeriesControl(tol=args.tol)
    return SeriesControl()


def _describe(args, sctrl: SeriesControl, qctrl: QuadratureControl, keys) -> str:
    params = " ".join(f"{k}={_fmt(getattr(args, k))}" for k in keys)
    if sctrl.strict:
        series = f"series=adaptive(max_terms={sctrl.max_terms},tol={sctrl.tol:g})"
    else:
        series = f"series=fixed({sctrl.max_terms})"
    return f"# {args.command} {params} {series} quadrature=gauss-legendre(n={qctrl.n_nodes},tol={qctrl.tol:g})"


def _grid(args, lo: float, hi: float, n: int) -> np.ndarray:
    r_min = lo if args.r_min is None else args.r_min
    r_max = hi if args.r_max is None else args.r_max
    steps = n if args.r_steps is None else args.r_steps
    if steps < 1:
        raise DomainError("--r-steps must be at least 1")
    if steps == 1:
        return np.array([r_min])
    if not r_max > r_min:
        raise DomainError("--r-max must exceed --r-min")
    return np.linspace(r_min, r_max, steps)


def _fill_defaults(args, defaults) -> bool:
    """Set unspecified flags from ``defaults``; True when any flag overrides them."""
    overridden = False
    for k, v in defaults.items():
        if getattr(args, k) is None:
            setattr(args, k, v)
        elif getattr(args, k) != v:
            overridden = True
    return overridden


def cmd_cdf(args, out):
    _fill_defaults(args, FIGURE1_DEFAULTS)
    p = TelegraphParams(args.c1, args.lambda1)
    ct = p.c * args.t
    xs = _grid(args, -1.1 * ct, 1.1 * ct, 101)
    sctrl = _series_control(args)
    out.write(_describe(args, sctrl, QuadratureControl(), ("lambda1", "c1", "t")) + "\n")
    out.write("x,cdf\n")
    for x, v in zip(xs, cdf(p, args.t, xs, sctrl)):
        out.write(f"{_fmt(x)},{_fmt(v)}\n")


def cmd_figure1(args, out):
    non_default = _fill_defaults(args, FIGURE1_DEFAULTS)
    p = TelegraphParams(args.c1, args.lambda1)
    ct = p.c * args.t
    span = 1.1 * ct
    xs = np.union1d(np.linspace(-span, span, 401), [-ct, ct])
    sctrl = _series_control(args)
    out.write(_describe(args, sctrl, QuadratureControl(), ("lambda1", "c1", "t")) + "\n")
    if non_default:
        out.write("# non-default parameters\n")
    out.write("x,cdf\n")
    for x, v in zip(xs, cdf(p, args.t, xs, sctrl)):
        out.write(f"{_fmt(x)},{_fmt(v)}\n")


def _pair(args) -> DistancePairParams:
    return DistancePairParams.from_values(args.lambda1, args.lambda2, args.c1, args.c2)


def cmd_distance_cdf(args, out):
    _fill_defaults(args, TABLE_DEFAULTS)
    d = _pair(args)
    hi = d.support_breaks(args.t)[1]
    rs = _grid(args, 0.0, 1.05 * hi, 106)
    sctrl, qctrl = _series_control(args), QuadratureControl()
    out.write(_describe(args, sctrl, qctrl, TABLE_DEFAULTS) + "\n")
    out.write("r,phi,branch\n")
    for r in rs:
        b = phi(d, args.t, float(r), sctrl, qctrl)
        out.write(f"{_fmt(r)},{_fmt(b.value)},{b.branch}\n")


def run_table(which: int, args, out):
    non_default = _fill_defaults(args, TABLE_DEFAULTS)
    d = _pair(args)
    default_r = validation.TABLE1_R if which == 1 else validation.TABLE2_R
    if args.r_min is None and args.r_max is None and args.r_steps is None:
        rs = np.array(default_r)
    else:
        non_default = True
        rs = _grid(args, default_r[0], default_r[-1], len(default_r))
    sctrl, qctrl = _series_control(args), QuadratureControl()
    out.write(_describe(args, sctrl, qctrl, TABLE_DEFAULTS) + "\n")
    if non_default:
        out.write("# non-default parameters\n")
    out.write("r,G\n" if which == 1 else "r,Q\n")
    for r in rs:
        b = phi(d, args.t, float(r), sctrl, qctrl)
        out.write(f"{_fmt(r)},{b.value:.4f}\n")


def cmd_simulate(args, out):
    if args.process == "single":
        _fill_defaults(args, FIGURE1_DEFAULTS)
        cfg = SimConfig(args.seed, args.n_paths, TelegraphParams(args.c1, args.lambda1), args.t)
        values, name = simulate_position(cfg).position, "x"
    else:
        _fill_defaults(args, TABLE_DEFAULTS)
        cfg = SimConfig(args.seed, args.n_paths, _pair(args), args.t)
        values, name = simulate_distance(cfg).distance, "rho"
    out.write(name + "\n")
    # full precision so that atom samples stay exactly on the atoms
    out.write("".join("%.17g\n" % v for v in values))


def cmd_validate(args, out) -> int:
    results = validation.run_suite(tol=args.tol, n_paths=args.n_paths, seed=args.seed, reference_tables=args.reference_tables)
    for res in results:
        out.write(res.line() + "\n")
    failed = [r for r in results if not r.ok]
    out.write(f"# {len(results) - len(failed)}/{len(results)} checks passed or skipped\n")
    return EXIT_ACCEPTANCE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telegraph-distance",
        description="Distribution functions of the telegraph process and of the distance between two of them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=None, n_paths_default=None):
        sp.add_argument("--lambda1", type=float)
        sp.add_argument("--lambda2", type=float)
        sp.add_argument("--c1", type=float)
        sp.add_argument("--c2", type=float)
        sp.add_argument("--t", type=float)
        sp.add_argument("--r-min", type=float)
        sp.add_argument("--r-max", type=float)
        sp.add_argument("--r-steps", type=int)
        sp.add_argument("--terms", type=int, help="use exactly this many series terms")
        sp.add_argument("--tol", type=float, help="series tail tolerance (validate: check tolerance)")
        sp.add_argument("--seed", type=int, default=seed_default if seed_default is not None else 12345)
        sp.add_argument("--n-paths", type=int, default=n_paths_default or 10**6)
        sp.add_argument("--output", "-o", help="output file; standard output when omitted")
        return sp

    common(sub.add_parser("cdf", help="single-process CDF on a grid (x grid from --r-*)"))
    common(sub.add_parser("distance-cdf", help="distance CDF on an r grid"))
    common(sub.add_parser("table1", help="G(r,3) on r = 0.2 .. 6.0"))
    common(sub.add_parser("table2", help="Q(r,3) on r = 6.2 .. 12.0"))
    common(sub.add_parser("figure1", help="single-process CDF curve for c=1, lambda=1.5, t=2"))
    sim = common(sub.add_parser("simulate", help="Monte Carlo samples as single-column CSV"))
    sim.add_argument("--process", choices=("single", "distance"), default="distance")
    val = common(sub.add_parser("validate", help="run the self-consistency suite"))
    val.add_argument("--reference-tables", action="store_true", help="also check the reference tables and the seven-term truncation")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.terms is not None and args.terms < 1:
        print("error: --terms must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        with contextlib.ExitStack() as stack:
            if args.output:
                out = stack.enter_context(open(args.output, "w", encoding="utf-8", newline="\n"))
            else:
                out = sys.stdout
            if args.command == "validate":
                return cmd_validate(args, out)
            handlers = {
                "cdf": cmd_cdf,
                "distance-cdf": cmd_distance_cdf,
                "figure1": cmd_figure1,
                "simulate": cmd_simulate,
                "table1": lambda a, o: run_table(1, a, o),
                "table2": lambda a, o: run_table(2, a, o),
            }
            handlers[args.command](args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
