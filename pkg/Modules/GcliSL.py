# GcliSL.py
# V1: Subcommands for constants, trajectories, rates, slope, verification, planning.
"""
Handles CLI commands for ShallitLab.
- `constant`: C to the requested decimals via the cubic series.
- `p0star`: p0* to the requested decimals.
- `trajectory`: the solved n-trajectory, one row per j.
- `cn`: A_n and the four C_n forms over a range of n.
- `rates`: scaled gaps for one of the convergence-rate quantities.
- `slope`: slope of the stable curve at (p0*, 0).
- `verify`: the invariant suite over a range of n.
- `plan`: trajectory length, series terms and working digits for a target.

All numbers go to standard output as truncated decimals; logging goes to
standard error. Exit codes: 0 success, 1 computation error or failed
verification, 2 usage error.
"""
import argparse
import logging
import re
import sys

import GnumericsSL
import GsolverSL
import GconstantsSL
import GanalysisSL
import GverifySL
import GconfigSL
import GexportSL
from GnumericsSL import PrecCtx, ShallitError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


# --- Argument Types ---
def _digits_arg(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"digits must be an integer, got {text!r}")
    if value < GnumericsSL.MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"digits must be >= {GnumericsSL.MIN_DIGITS}, got {value}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _n_arg(text):
    """An integer n or an inclusive range a..b, returned as a list."""
    match = _RANGE.match(text)
    if match:
        a, b = int(match.group(1)), int(match.group(2))
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError(f"range must satisfy 1 <= a <= b, got {text!r}")
        return list(range(a, b + 1))
    return [_positive_int(text)]


# --- Shared helpers ---
def _digits(args):
    return args.digits if args.digits is not None else GconfigSL.get_default_digits()


def _workers(args):
    return args.workers if args.workers is not None else GconfigSL.get_workers()


def _context(digits):
    return PrecCtx(digits, GconfigSL.get_guard_digits())


def _single_n(args):
    if len(args.n) != 1:
        raise argparse.ArgumentTypeError(f"{args.command} takes a single n, not a range")
    return args.n[0]


# --- Command Handlers ---
def handle_constant_command(args):
    digits = _digits(args)
    log.info(f"Handling 'constant' at {digits} digits.")
    report = GconstantsSL.limit_report(digits, margin=GconfigSL.get_planner_margin(),
                                       include_s=args.with_s, guard=GconfigSL.get_guard_digits())
    record = report.as_dict(digits)
    return GexportSL.render_record(record, args.format, headline="C")


def handle_p0star_command(args):
    digits = _digits(args)
    log.info(f"Handling 'p0star' at {digits} digits.")
    margin = GconfigSL.get_planner_margin()
    shot = GsolverSL.solve_limit(digits, margin=margin, guard=GconfigSL.get_guard_digits())
    record = {
        "digits": digits,
        "n": shot.n,
        "p0_star": GnumericsSL.real_to_decimal(shot.p0, digits),
    }
    return GexportSL.render_record(record, args.format, headline="p0_star")


def handle_trajectory_command(args):
    digits = _digits(args)
    n = _single_n(args)
    log.info(f"Handling 'trajectory' n={n} at {digits} digits.")
    traj = GsolverSL.solve_trajectory(n, _context(digits), refine=args.refine)
    if args.format == "json":
        return GexportSL.render_record(traj.as_dict(digits), "json")
    return GexportSL.render_table(traj.to_rows(digits), args.format, columns=["j", "p", "u", "lambda"])


def handle_cn_command(args):
    digits = _digits(args)
    log.info(f"Handling 'cn' over {len(args.n)} values of n at {digits} digits.")
    sols = GsolverSL.solve_sweep(args.n, _context(digits), workers=_workers(args), refine=args.refine)
    rows = [GconstantsSL.constants_report(s.trajectory).as_dict(digits) for s in sols]
    columns = ["n", "digits", "A_n", "C_n", "C_n_traj", "C_n_traj_prime", "C_n_quad"]
    return GexportSL.render_table(rows, args.format, columns=columns)


def handle_rates_command(args):
    digits = _digits(args)
    log.info(f"Handling 'rates' for {args.quantity} at {digits} digits.")
    indices = args.n
    report = GanalysisSL.fit_rate(args.quantity, indices, _context(digits),
                                  refine=True, workers=_workers(args))
    rows = report.to_rows(digits)
    if args.format == "json":
        fmt = GnumericsSL.real_to_decimal
        record = {
            "quantity": report.quantity,
            "digits": digits,
            "band_lo": fmt(report.band_lo, digits),
            "band_hi": fmt(report.band_hi, digits),
            "ratio_estimate": fmt(report.ratio_estimate, digits),
            "expected_ratio": fmt(report.expected_ratio, digits),
            "ratio_step": report.ratio_step,
            "rows": rows,
        }
        return GexportSL.render_record(record, "json")
    return GexportSL.render_table(rows, args.format, columns=["n", "gap", "gap_times_rho_pow"])


def handle_slope_command(args):
    requested = _digits(args)
    guard = GconfigSL.get_guard_digits()
    digits = max(requested, GanalysisSL.slope_digits_needed(args.terms, guard))
    if digits > requested:
        log.info(f"slope with {args.terms} terms runs at {digits} digits.")
    p0_star = GsolverSL.p0_limit(digits, margin=GconfigSL.get_planner_margin(), guard=guard)
    result = GanalysisSL.slope_sigma(p0_star, terms=args.terms, ctx=PrecCtx(digits, guard))
    return GexportSL.render_record(result.as_dict(requested), args.format, headline="sigma")


def handle_verify_command(args):
    digits = _digits(args)
    log.info(f"Handling 'verify' over {len(args.n)} values of n at {digits} digits.")
    report = GverifySL.run_invariant_suite(args.n, _context(digits), workers=_workers(args),
                                          refine=args.refine)
    if args.format == "json":
        text = report.to_json()
    elif args.format == "csv":
        text = GexportSL.render_table(report.to_rows(), "csv",
                                      columns=["n", "name", "ref", "residual", "tolerance", "pass"])
    else:
        text = report.to_text()
    return text, report.passed


def handle_plan_command(args):
    digits = _digits(args)
    budget = GconstantsSL.plan_budget(digits, margin=GconfigSL.get_planner_margin(),
                                      guard=GconfigSL.get_guard_digits())
    return GexportSL.render_record(budget.as_dict(), args.format)


# --- Argument Parser Setup ---
def _common(parser, with_n=False, n_default=None, sweep=False):
    parser.add_argument('--digits', type=_digits_arg, default=None,
                        help='Decimal digits (>= 16). Default from config or SHALLIT_DIGITS.')
    parser.add_argument('--format', choices=GexportSL.FORMATS, default='text', help='Output format.')
    parser.add_argument('--output', metavar='PATH', default=None, help='Write to PATH instead of stdout.')
    if with_n:
        parser.add_argument('--n', type=_n_arg, default=n_default, required=n_default is None,
                            help='n, or an inclusive range a..b.' if sweep else 'Trajectory length n.')
    if sweep:
        parser.add_argument('--workers', type=_positive_int, default=None,
                            help='Concurrent solves. Default from config or SHALLIT_WORKERS.')


def setup_parser():
    """Sets up command line argument parser."""
    parser = argparse.ArgumentParser(
        prog='shallitlab',
        description='ShallitLab - high-precision computation and checks for the Shallit minimization problem',
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='Log INFO messages to stderr.')
    subparsers = parser.add_subparsers(dest='command', help='Available commands', required=True)

    # --- Constant Command ---
    constant_parser = subparsers.add_parser('constant', help='The limit constant C.')
    _common(constant_parser)
    constant_parser.add_argument('--with-s', action='store_true',
                                 help='Also compute the partial sum S_N from a long trajectory.')

    # --- p0* Command ---
    p0_parser = subparsers.add_parser('p0star', help='The limit starting value p0*.')
    _common(p0_parser)

    # --- Trajectory Command ---
    traj_parser = subparsers.add_parser('trajectory', help='Solved n-trajectory.')
    _common(traj_parser, with_n=True)
    traj_parser.add_argument('--refine', action='store_true', help='Secant refinement in the solver.')

    # --- C_n Command ---
    cn_parser = subparsers.add_parser('cn', help='A_n and the four C_n forms.')
    _common(cn_parser, with_n=True, sweep=True)
    cn_parser.add_argument('--refine', action='store_true', help='Secant refinement in the solver.')

    # --- Rates Command ---
    rates_parser = subparsers.add_parser('rates', help='Scaled convergence gaps.')
    _common(rates_parser, with_n=True, n_default=list(range(20, 41)), sweep=True)
    rates_parser.add_argument('--quantity', choices=GanalysisSL.RATE_QUANTITIES, default='C_gap',
                              help='Which gap to measure.')

    # --- Slope Command ---
    slope_parser = subparsers.add_parser('slope', help='Slope of the stable curve at (p0*, 0).')
    _common(slope_parser)
    slope_parser.add_argument('--terms', type=_positive_int, default=GanalysisSL.DEFAULT_SLOPE_TERMS,
                              help='Derivative-sum terms.')

    # --- Verify Command ---
    verify_parser = subparsers.add_parser('verify', help='Run the invariant suite.')
    _common(verify_parser, with_n=True, n_default=list(range(1, 21)), sweep=True)
    verify_parser.add_argument('--refine', action='store_true', help='Secant refinement in the solver.')

    # --- Plan Command ---
    plan_parser = subparsers.add_parser('plan', help='Budget for a target number of digits.')
    _common(plan_parser)

    return parser


# --- Main Execution ---
def _dispatch(args):
    """Returns (text, ok)."""
    if args.command == 'constant': return handle_constant_command(args), True
    elif args.command == 'p0star': return handle_p0star_command(args), True
    elif args.command == 'trajectory': return handle_trajectory_command(args), True
    elif args.command == 'cn': return handle_cn_command(args), True
    elif args.command == 'rates': return handle_rates_command(args), True
    elif args.command == 'slope': return handle_slope_command(args), True
    elif args.command == 'verify': return handle_verify_command(args)
    elif args.command == 'plan': return handle_plan_command(args), True
    raise argparse.ArgumentTypeError(f"unknown command {args.command!r}")


def main(argv=None):
    """Main entry point for CLI; returns the process exit code."""
    parser = setup_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already written usage to stderr
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        import GloggerSL
        GloggerSL.setup_logging("INFO" if args.verbose else None)
        log.info("--- ShallitLab Started ---")
    except Exception as log_e:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        log.error(f"Initial logging setup failed: {log_e}", exc_info=True)

    try:
        text, ok = _dispatch(args)
        GexportSL.emit(text, args.output)
        if not ok:
            log.warning("Verification reported failures.")
            return EXIT_FAILURE
        return EXIT_OK
    except argparse.ArgumentTypeError as e:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {e}\n")
        return EXIT_USAGE
    except ShallitError as e:
        log.debug(f"{type(e).__name__} in '{args.command}'", exc_info=True)
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_FAILURE
    except ValueError as e:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {e}\n")
        return EXIT_USAGE
    except Exception as e:
        log.critical(f"Unhandled error in CLI main: {e}", exc_info=True)
        sys.stderr.write(f"error: unexpected failure: {e}\n")
        return EXIT_FAILURE
    finally:
        log.info("--- ShallitLab Finished ---")


if __name__ == "__main__":
    sys.exit(main())

# === End of GcliSL.py ===
