"""
Command-line front end.

    check     obstruction verdict and divisibility identity for a dual curve F
    verify    exact identity suite on seeded random inputs
    simulate  billiard orbit inside a cone-cut domain, as CSV
    certify   numeric checks of the dual outer-billiard construction

stdout carries only JSON/CSV payloads; logs go to stderr.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction

from dualbilliards.core import logic
from dualbilliards.core.errors import DegenerateInputError, NumericalFailure, PolynomialSyntaxError
from dualbilliards.core.exactpoly import XY, XYZ
from dualbilliards.core.parser import parse_polynomial
from dualbilliards.core.projgeom import Curvature
from dualbilliards.services.identity_suite import SELECTORS
from dualbilliards.services.utils import Colors

CURVATURES = ("sphere", "hyperboloid")


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(logic.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _add_dynamics_flags(parser):
    c = logic.config
    parser.add_argument("--curvature", choices=CURVATURES, default="sphere")
    parser.add_argument("--hit-tol", type=_positive_float, default=c.hit_tol)
    parser.add_argument("--state-tol", type=_positive_float, default=c.state_tol)
    parser.add_argument("--fd-step", type=_positive_float, default=c.fd_step)
    parser.add_argument("--scan-points", type=_positive_int, default=c.scan_points)
    parser.add_argument("--t-max", type=_positive_float, default=None,
                        help="geodesic search horizon (default: pi on the sphere, 12 on the hyperboloid)")


def build_parser():
    c = logic.config
    parser = CliParser(prog="dualbilliards", description="Dual-curve obstructions for billiards on the sphere and hyperbolic plane")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    check = sub.add_parser("check", help="obstruction verdict for a dual curve")
    check.add_argument("--F", required=True, help='homogeneous dual curve, e.g. "x^3+y^3+z^3"')
    check.add_argument("--Q", default="1", help="homogeneous cofactor of Psi = F^k Q")
    check.add_argument("--k", type=_positive_int, default=None, help="default: smallest k with n even")
    check.add_argument("--curvature", choices=CURVATURES, default="sphere")
    check.add_argument("--absolute-tol", type=_positive_float, default=c.absolute_tol)
    check.add_argument("--point-tol", type=_positive_float, default=c.point_tol)

    verify = sub.add_parser("verify", help="exact identity suite")
    verify.add_argument("--which", choices=SELECTORS, required=True)
    verify.add_argument("--cases", type=_positive_int, default=None,
                        help="default: 50 random cases, or one per curvature with --g")
    verify.add_argument("--seed", type=int, default=c.seed)
    verify.add_argument("--g", default=None, help="fixed curve instead of random ones")
    verify.add_argument("--p", default=None, help="rational p (default: formal for mu3, 2 for chain)")
    verify.add_argument("--jobs", type=_positive_int, default=c.jobs)

    simulate = sub.add_parser("simulate", help="billiard orbit as CSV")
    simulate.add_argument("--cone", required=True, help="homogeneous cone cutting the domain")
    simulate.add_argument("--bounces", type=int, default=1000)
    simulate.add_argument("--psi", default=None, help="homogeneous integral to track")
    simulate.add_argument("--out", default=None, help="CSV path (default: stdout)")
    simulate.add_argument("--seed", type=int, default=c.seed)
    simulate.add_argument("--outside", action="store_true", help="take the domain where the cone is positive")
    _add_dynamics_flags(simulate)

    certify = sub.add_parser("certify", help="numeric duality certificates")
    certify.add_argument("--cone", required=True)
    certify.add_argument("--dual", default=None, help="dual curve (default: dual conic of a diagonal cone)")
    certify.add_argument("--psi", default=None, help="integral vanishing on the dual curve (default: the dual curve)")
    certify.add_argument("--eps", type=_positive_float, nargs="+", default=[0.1, 0.01])
    certify.add_argument("--samples", type=_positive_int, default=200)
    certify.add_argument("--midpoint-eps", type=_positive_float, default=1e-3)
    certify.add_argument("--tol", type=_positive_float, default=1e-9)
    _add_dynamics_flags(certify)
    return parser


def _settings(args):
    overrides = {
        "hit_tol": args.hit_tol,
        "state_tol": args.state_tol,
        "fd_step": args.fd_step,
        "scan_points": args.scan_points,
    }
    if args.t_max is not None:
        overrides["t_max_sphere"] = args.t_max
        overrides["t_max_hyperboloid"] = args.t_max
    return logic.config.billiard_settings(**overrides)


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"invalid rational {text!r}") from e


def _emit(payload, stream):
    stream.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def cmd_check(args, out):
    F = parse_polynomial(args.F)
    Q = parse_polynomial(args.Q)
    code, report = logic.run_check(
        F, Q, args.k, Curvature.from_name(args.curvature),
        absolute_tol=args.absolute_tol, point_tol=args.point_tol,
    )
    _emit(report, out)
    return code


def cmd_verify(args, out):
    g = None
    if args.g is not None:
        g = parse_polynomial(args.g, XYZ if args.which == "hf" else XY)
    cases = args.cases or (2 if g is not None else 50)
    p = None if args.p is None else _rational(args.p)
    code, summary = logic.run_verify(args.which, cases, seed=args.seed, g=g, p=p, jobs=args.jobs)
    _emit(summary, out)
    color = Colors.GREEN if code == logic.EXIT_OK else Colors.RED
    line = f"{args.which}: {summary['passed']}/{summary['cases']} cases passed"
    print(Colors.paint(line, color, sys.stderr), file=sys.stderr)
    return code


def cmd_simulate(args, out):
    if args.bounces < 1:
        raise UsageError(f"--bounces must be at least 1, got {args.bounces}")
    C = parse_polynomial(args.cone)
    psi = parse_polynomial(args.psi) if args.psi else None
    code, text, residual = logic.run_simulate(
        C, Curvature.from_name(args.curvature), args.bounces, psi=psi, seed=args.seed,
        settings=_settings(args), interior_sign=-1 if args.outside else 1,
    )
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write(text)
        _emit({"bounces": args.bounces, "max_residual": residual, "out": args.out}, out)
    else:
        out.write(text)
    if residual is not None:
        logging.info(f"max |psi residual| over {args.bounces} bounces: {residual:.3g}")
    return code


def cmd_certify(args, out):
    C = parse_polynomial(args.cone)
    if args.dual is not None:
        F_dual = parse_polynomial(args.dual)
    else:
        F_dual = logic.diagonal_dual(C)
        if F_dual is None:
            raise UsageError("--dual is required unless the cone is a diagonal quadratic form")
    psi = parse_polynomial(args.psi) if args.psi else None
    code, summary = logic.run_certify(
        C, Curvature.from_name(args.curvature), F_dual, psi=psi, epsilons=args.eps,
        samples=args.samples, midpoint_eps=args.midpoint_eps, tol=args.tol,
        settings=_settings(args),
    )
    _emit(summary, out)
    return code


COMMANDS = {
    "check": cmd_check,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "certify": cmd_certify,
}


def main(argv=None, out=None):
    """Runs one command and returns its exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except PolynomialSyntaxError as e:
        logging.error(f"parse error: {e}")
        return logic.EXIT_USAGE
    except DegenerateInputError as e:
        logging.error(f"degenerate input: {e}")
        return logic.EXIT_DEGENERATE
    except (UsageError, ValueError) as e:
        logging.error(str(e))
        return logic.EXIT_USAGE
    except NumericalFailure as e:
        logging.error(f"numerical failure: {e}")
        return logic.EXIT_NUMERIC
