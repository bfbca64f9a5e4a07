"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
All randomness is controlled by ``--seed``.
"""
import argparse
import csv
import json
import sys

import numpy as np

from . import bounds_diagnostics as bd
from .bootstrap_ci import CIConfig, ci_bmm
from .core_estimators import EstimatorConfig, Method, estimate
from .dirichlet_mean_analytics import DensitySpec, cdf_y, density_y
from .distributions import DistributionSpec
from .errors import AtomError, BMMError, NumericalError
from .harness import SimulationSpec, run_simulation
from .importance_sampling import Aggregator, fib_oracle, is_estimate_fib

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _read_values(path):
    fh = sys.stdin if path == "-" else open(path)
    try:
        vals = [float(line) for line in fh if line.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad input value: {exc}") from None
    finally:
        if fh is not sys.stdin:
            fh.close()
    return np.array(vals)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(obj, out=None):
    text = json.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_estimate(args):
    x = _read_values(args.input)
    cfg = EstimatorConfig(alpha=args.alpha, J=args.J, seed=args.seed)
    rep = estimate(x, args.method, cfg, g=args.g)
    _emit({"method": rep.method.value, "estimate": rep.estimate, "n": int(x.size)})


def cmd_simulate(args):
    dist = DistributionSpec.parse(args.dist)
    if args.experiment == "bounds":
        ident = bd.mse_identity_experiment(dist, args.n, args.alpha, args.J, args.reps, args.seed, args.workers)
        mm = bd.mm_deviation_experiment(dist, args.n, args.delta, args.reps, args.seed)
        uncond, _ = bd.median_bias_bounds(args.alpha, sigma2=dist.variance(), n=args.n)
        _emit({
            "dist": str(dist),
            "mse_identity": ident.to_dict(),
            "mm_deviation": mm.to_dict(),
            "unconditional_median_bias_bound": uncond,
        }, args.out)
        return
    methods = [Method(m.strip()) for m in args.estimators.split(",") if m.strip()]
    spec = SimulationSpec(dist, args.n, tuple(methods), EstimatorConfig(args.alpha, args.J, args.seed),
                          args.reps, args.seed, args.g)
    report = run_simulation(spec, workers=args.workers)
    text = report.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_ci(args):
    x = _read_values(args.input)
    cfg = CIConfig(1.0 - args.level, args.B, args.J, args.alpha, args.seed, not args.unfixed)
    _emit(ci_bmm(x, cfg).to_dict())


def cmd_fib(args):
    cfg = EstimatorConfig(alpha=args.alpha, seed=args.seed)
    rep = is_estimate_fib(args.m, args.draws, args.aggregator, cfg, args.seed, args.g)
    oracle = fib_oracle(args.m)
    _emit({"estimate": rep.estimate, "oracle": oracle, "relative_error": rep.estimate / oracle - 1.0})


def cmd_density(args):
    spec = DensitySpec(np.array(args.values), args.alpha)
    lo, hi = float(spec.sample.min()), float(spec.sample.max())
    grid = np.linspace(lo, hi, args.grid + 2)[1:-1] if hi > lo else np.array([lo])
    rows = []
    for y in grid:
        try:
            pdf = density_y(spec, y)
        except AtomError:
            pdf = float("nan")
        rows.append((float(y), pdf, cdf_y(spec, y)))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("y", "pdf", "cdf"))
        for r in rows:
            w.writerow([repr(v) for v in r])
    finally:
        if fh is not sys.stdout:
            fh.close()


def build_parser():
    p = _Parser(prog="bmm", description="Bayesian median of means toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, J=True):
        sp.add_argument("--alpha", type=float, default=1.0, help="Dirichlet concentration")
        if J:
            sp.add_argument("--J", type=int, default=None, help="number of Dirichlet draws (default n)")
        sp.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("estimate", help="point estimate from one value per line")
    e.add_argument("--method", required=True, choices=[m.value for m in Method])
    e.add_argument("--g", type=int, default=3, help="blocks for median of means")
    e.add_argument("--input", default="-", help="file path, '-' for stdin")
    common(e)
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("simulate", help="Monte-Carlo estimator comparison")
    s.add_argument("--experiment", choices=["estimators", "bounds"], default="estimators")
    s.add_argument("--dist", required=True, help="e.g. pareto(0,1000,2.5)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--reps", type=int, default=1000)
    s.add_argument("--estimators", default="mean,median,bmm,abmm,mm,hl")
    s.add_argument("--g", type=int, default=3)
    s.add_argument("--delta", type=float, default=0.05, help="confidence for the MM bound")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default=None)
    common(s)
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("ci", help="percentile bootstrap interval for BMM")
    c.add_argument("--level", type=float, default=0.95, help="confidence level")
    c.add_argument("--B", type=int, default=1000)
    c.add_argument("--input", default="-")
    c.add_argument("--unfixed", action="store_true", help="fresh Dirichlet draws per replicate")
    common(c)
    c.set_defaults(func=cmd_ci)

    f = sub.add_parser("fib", help="importance-sampling count of Fibonacci permutations")
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--draws", type=int, default=1000)
    f.add_argument("--aggregator", choices=[a.value for a in Aggregator], default="mean")
    f.add_argument("--g", type=int, default=3)
    common(f, J=False)
    f.set_defaults(func=cmd_fib)

    d = sub.add_parser("density", help="pdf and cdf of the Dirichlet mean on a grid")
    d.add_argument("--values", type=_float_list, required=True, help="comma-separated sample")
    d.add_argument("--alpha", type=float, required=True)
    d.add_argument("--grid", type=int, default=101)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_density)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (BMMError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
