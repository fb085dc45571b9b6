"""Command line entry point: ``szegointerp <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings


from ..lagrange import ExponentOutsideTheory, error_resolution, interp_error, interpolate
from ..measure import MeasureError, integrate
from ..opuc import DegenerateMeasure, build_basis
from ..paraorth import NodeFindingFailure, find_nodes, szego_quadrature
from .catalog import CATALOG, get_function
from .config import ConfigError, ExperimentConfig, WStrategy, parse_config
from .converge import REFERENCE_RESOLUTION, run_convergence
from .grammar import parse_measure_spec
from .verify import run_verify

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for numerical failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _w_point(text: str) -> complex:
    if text == "auto":
        return 1.0 + 0.0j
    theta = float(text)
    return complex(math.cos(theta), math.sin(theta))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _setup(args):
    m = parse_measure_spec(args.measure)
    if args.n < 0:
        raise ValueError("n must be nonnegative")
    b = build_basis(m, args.n + 1)
    ns = find_nodes(b, args.n, _w_point(args.w))
    return m, b, ns


def cmd_nodes(args) -> int:
    _, _, ns = _setup(args)
    if args.json:
        doc = {"n": ns.n, "w": [ns.w.real, ns.w.imag],
               "angles": ns.angles.tolist(), "weights": ns.weights.tolist()}
        print(json.dumps(doc, indent=2))
    else:
        print("j,angle,weight")
        for j, (t, wt) in enumerate(zip(ns.angles, ns.weights)):
            print(f"{j},{float(t)!r},{float(wt)!r}")
    return EXIT_OK


def cmd_quadrature(args) -> int:
    m, _, ns = _setup(args)
    f = get_function(args.f)
    q = szego_quadrature(ns, f)
    exact = integrate(m, f, REFERENCE_RESOLUTION, f.kinks)
    print(f"Q_n(f)     = {q.real!r} {q.imag:+.17g}j")
    print(f"integral   = {exact.real!r} {exact.imag:+.17g}j")
    print(f"abs_error  = {float(abs(q - exact))!r}")
    return EXIT_OK


def cmd_interpolate(args) -> int:
    m, b, ns = _setup(args)
    f = get_function(args.f)
    lag = interpolate(ns, b, f)
    print("p,interp_error")
    with warnings.catch_warnings():
        warnings.simplefilter("always", ExponentOutsideTheory)
        for p in _float_list(args.p):
            if p <= 0:
                raise ValueError("p must be positive")
            err = interp_error(ns, b, m, f, p, error_resolution(args.n), f.kinks, interpolant=lag)
            print(f"{p!r},{float(err)!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.measure, args.nmax, args.seed)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(f"measure={report.measure} n={list(report.n_values)} seed={report.seed}")
        print(report.table())
        print("ALL PASS" if report.passed else "FAILURES PRESENT")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def cmd_converge(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        missing = [k for k in ("measure", "f", "degrees", "p") if getattr(args, k) is None]
        if missing:
            raise ConfigError(f"without --config, need --{' --'.join(missing)}")
        cfg = ExperimentConfig(
            measure=args.measure, f=args.f, w=WStrategy.parse(args.w_strategy),
            degrees=_int_list(args.degrees), p=_float_list(args.p),
            format=args.format, seed=args.seed, resolution=args.resolution,
        )
    report = run_convergence(cfg)
    text = report.render(timing=args.timing)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_NUMERICAL if report.any_failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="szegointerp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def point_args(p):
        p.add_argument("--measure", required=True, help="e.g. lebesgue, arc:1.57, lebesgue+atoms:0:1.0")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--w", default="auto", help="angle of the generating point; auto means w = 1")

    p = sub.add_parser("nodes", help="node angles and weights")
    point_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("quadrature", help="Szego quadrature against direct integration")
    point_args(p)
    p.add_argument("--f", required=True, choices=list(CATALOG))
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser("interpolate", help="L^p errors of the interpolant")
    point_args(p)
    p.add_argument("--f", required=True, choices=list(CATALOG))
    p.add_argument("--p", default="2", help="comma separated exponents")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("verify", help="residual table of the kernel and node identities")
    p.add_argument("--measure", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("converge", help="convergence experiment as CSV or JSON")
    p.add_argument("--config", help="key=value file; overrides the inline flags")
    p.add_argument("--measure")
    p.add_argument("--f", choices=list(CATALOG))
    p.add_argument("--w-strategy", default="fixed:0.0", help="fixed:<theta>, rotate:<step> or pseudorandom")
    p.add_argument("--degrees", help="comma separated, strictly increasing")
    p.add_argument("--p", help="comma separated exponents in (0, 2]")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--resolution", type=int)
    p.add_argument("--timing", action="store_true", help="append a wall_time column")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DegenerateMeasure, NodeFindingFailure, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError, MeasureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
