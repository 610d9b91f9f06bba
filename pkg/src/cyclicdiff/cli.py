"""Command line interface: ``cyclicdiff run | verify | predict``."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import export, svg
from .asymptotics import coefficients, ellipse_of
from .core import PointCloud
from .errors import CyclicDiffError, DegenerateEllipse
from .harness import ConfigError, RunConfig, initial_cloud, run
from .verify import format_table, run_checks


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _routes(text):
    return tuple(r.strip() for r in text.split(",") if r.strip())


def _svg_target(text):
    path, sep, when = text.rpartition(":")
    if sep and when.isdigit():
        return path, int(when)
    return text, None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclicdiff",
                     description="Cyclic vector-difference dynamics: runs, checks, predictions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("run", help="evolve a seeded random cloud")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--dim", type=int, default=2, help="spatial dimension (default 2)")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--stride", type=int, default=None,
                   help="snapshot every STRIDE steps (default: only first and last)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--routes", type=_routes, default=None,
                   help="comma list of spectral,iterative,binomial (default: spectral, "
                        "cross-checked by iterative when steps <= 2000)")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--svg", metavar="PATH[:t]", type=_svg_target,
                   help="scatter plot of the snapshot at t (default: last)")

    v = sub.add_parser("verify", help="randomized cross-route and invariant checks")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)

    q = sub.add_parser("predict", help="print the asymptotic model of an initial cloud")
    q.add_argument("--n", type=int, help="number of points (with --seed)")
    q.add_argument("--dim", type=int, default=2)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--initial", metavar="FILE",
                   help="comma-separated file, one point per row (overrides --n/--seed)")
    q.add_argument("--t", type=int, default=0, help="time for the ellipse right-hand side")
    return parser


def _cmd_run(args, out):
    outputs = [k for k in ("csv", "json", "svg") if getattr(args, k)]
    config = RunConfig(n=args.n, d=args.dim, steps=args.steps, snapshot_stride=args.stride,
                       seed=args.seed, routes=args.routes, outputs=tuple(outputs))
    record = run(config)
    if args.csv:
        export.export_csv(record, args.csv)
    if args.json:
        export.export_json(record, args.json)
    if args.svg:
        path, when = args.svg
        svg.emit_svg(record, config.steps if when is None else when, path)
    last = record.snapshots[-1]
    out(f"n={config.n} d={config.d} steps={config.steps} seed={config.seed} "
        f"parity={record.model.parity} snapshots={len(record.snapshots)} "
        f"logmag(t={last.t})={last.logmag:.12g}")
    for name, rows in record.diagnostics.items():
        if rows:
            out(f"{name}: {rows[-1]}")
    return 0


def _cmd_verify(args, out):
    checks = run_checks(seed=args.seed, trials=args.trials)
    format_table(checks, out)
    return 0 if all(c.passed for c in checks) else 1


def _cmd_predict(args, out):
    if args.initial:
        cloud = PointCloud(np.loadtxt(args.initial, delimiter=",", ndmin=2))
    elif args.n is not None:
        cloud = initial_cloud(RunConfig(n=args.n, d=args.dim, steps=1, seed=args.seed))
    else:
        raise UsageError("predict needs --n or --initial")
    model = coefficients(cloud)
    out(f"n={model.n} d={model.d} parity={model.parity}")
    out(f"rate={model.rate:.17g} log_rate={math.log(model.rate):.17g}")
    out(f"degenerate={model.degenerate}")
    for a, row in enumerate(np.atleast_2d(model.coeff_matrix.T).T):
        out(f"axis{a}: " + " ".join(f"{v:.17g}" for v in np.atleast_1d(row)))
    if model.second_order is not None:
        out(f"second_order rate={model.second_order.rate:.17g}")
        for a, row in enumerate(model.second_order.coeff_matrix):
            out(f"  axis{a}: " + " ".join(f"{v:.17g}" for v in row))
    if model.parity == "odd" and model.d == 2:
        try:
            e = ellipse_of(model, args.t)
        except DegenerateEllipse as exc:
            out(f"ellipse: degenerate ({exc})")
        else:
            out(f"ellipse: {e.qxx:.17g} x^2 + 2*({e.qxy:.17g}) x y + {e.qyy:.17g} y^2 "
                f"= exp({e.rhs_log:.17g})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    out = print
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: run, verify or predict")
        handler = {"run": _cmd_run, "verify": _cmd_verify, "predict": _cmd_predict}
        return handler[args.command](args, out)
    except (UsageError, ConfigError) as exc:
        print(f"cyclicdiff: usage error: {exc}", file=sys.stderr)
        return 2
    except (CyclicDiffError, OSError, ValueError) as exc:
        print(f"cyclicdiff: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
