"""
Command-line front end.

Usage:
    python -m src.cli dsum --k 3 --n 1000 --h 1
    python -m src.cli moment2 --n 1000000 --theta 0.4
    python -m src.cli verify --suite dual-identity --qmax 2000

Every subcommand writes one CSV table (header row first, `\\n` line
endings) to --output or standard output. Logs go to standard error.

Exit codes: 0 success, 1 invalid arguments, 2 computation failure.
"""

import argparse
import csv
import io
import logging
import sys
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf
from pydantic import ValidationError

from src.convolution import dk_shifted_sum, ingham_ratio, moment_report
from src.sieve import iter_segments
from src.singular import (
    MainTermEngine,
    SeriesSaturationError,
    p_polynomial,
    p_star_polynomial,
    singular_series,
)
from src.validation import RunConfig, Subcommand, VerifySuite, validate_run_config

from .suites import run_suite

logger = logging.getLogger(__name__)

DIGITS = 20
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
MOMENT_HEADER = ["N", "H", "q_max", "sum_delta", "sum_delta_sq", "ratio1", "ratio2", "wall_ms"]

CSV_SCHEMAS = {
    Subcommand.SIEVE: "n,d_k",
    Subcommand.DSUM: "k,N,h,D",
    Subcommand.PSERIES: "q,j,b_j  (P(x,q) = sum_j b_j log(x/q)^j)",
    Subcommand.SINGULAR: "x,h,q_max,value,tail_estimate",
    Subcommand.DELTA: "N,h,q_max,D,main_term,delta",
    Subcommand.MOMENT1: ",".join(MOMENT_HEADER),
    Subcommand.MOMENT2: ",".join(MOMENT_HEADER),
    Subcommand.INGHAM: "N,h,ratio",
    Subcommand.VERIFY: "suite-specific; see the suite docstrings",
}

Table = Tuple[List[str], List[list]]


class UsageError(Exception):
    """Unknown flag or malformed argument list."""


class CliComputationError(RuntimeError):
    """A computation finished but reported failure (saturation, failed suite)."""


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises instead of exiting on bad arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def fmt(value) -> str:
    return mpmath.nstr(value, DIGITS)


# ============================================
# Argument parsing
# ============================================

def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--digits", type=int, help="Significant decimal digits (>= 30)")
    common.add_argument("--threads", type=int, help="Worker count for sieve, NTT and tables")
    common.add_argument("--cache-dir", dest="cache_dir", help="Segment cache (overrides D3_CACHE_DIR)")
    common.add_argument("--output", help="CSV path (default: standard output)")
    common.add_argument("--log-level", dest="log_level", help="Logging level")

    series = ArgumentParser(add_help=False, allow_abbrev=False)
    series.add_argument("--qmax", dest="q_max", type=int, help="Fixed truncation q_max")
    series.add_argument("--rel-tol", dest="rel_tol", type=float, help="Auto-mode tail tolerance")

    parser = ArgumentParser(
        prog="d3conv",
        description="Shifted convolutions of d_3 and their singular-series main terms.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=ArgumentParser)
    sub.required = True

    def add(cmd: Subcommand, help_text: str, *parents) -> ArgumentParser:
        return sub.add_parser(
            cmd.value,
            help=help_text,
            parents=[common, *parents],
            allow_abbrev=False,
            epilog=f"CSV columns: {CSV_SCHEMAS[cmd]}",
        )

    p = add(Subcommand.SIEVE, "d_k(n) for n in (lo, hi]")
    p.add_argument("--k", type=int)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)

    p = add(Subcommand.DSUM, "exact D_k(N,h)")
    p.add_argument("--k", type=int)
    p.add_argument("--n", dest="N", type=int)
    p.add_argument("--h", type=int)

    p = add(Subcommand.PSERIES, "coefficients of P(x,q) or its dual P*(x,q)")
    p.add_argument("--q", type=int)
    p.add_argument("--dual", action="store_true", default=None)

    p = add(Subcommand.SINGULAR, "truncated singular series at x", series)
    p.add_argument("--x", type=float)
    p.add_argument("--h", type=int)

    p = add(Subcommand.DELTA, "Delta(N,h) = D(N,h) minus the integrated main term", series)
    p.add_argument("--n", dest="N", type=int)
    p.add_argument("--h", type=int)

    for cmd, text in ((Subcommand.MOMENT1, "first moment of Delta, H = floor(sqrt(N)) by default"),
                      (Subcommand.MOMENT2, "second moment of Delta, H = floor(N^theta)")):
        p = add(cmd, text, series)
        p.add_argument("--n", dest="N", type=int)
        p.add_argument("--H", type=int)
        if cmd == Subcommand.MOMENT2:
            p.add_argument("--theta", type=float)
        p.add_argument("--no-timing", dest="no_timing", action="store_true", default=None,
                       help="Write wall_ms as 0 for byte-identical output")

    p = add(Subcommand.INGHAM, "D_2(N,h) against (6/pi^2) sigma_{-1}(h) N log^2 N")
    p.add_argument("--n", dest="N", type=int)
    p.add_argument("--h", type=int)

    p = add(Subcommand.VERIFY, "run a verification suite", series)
    p.add_argument("--suite", choices=[s.value for s in VerifySuite])
    p.add_argument("--seed", type=int)
    p.add_argument("--n", dest="N", type=int)
    p.add_argument("--H", type=int)
    p.add_argument("--x", type=float)

    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    return validate_run_config(vars(args))


# ============================================
# Subcommands
# ============================================

def cmd_sieve(cfg: RunConfig) -> Table:
    rows = []
    for segment in iter_segments(cfg.k, cfg.lo, cfg.hi, cfg.sieve_config()):
        rows.extend([segment.lo + 1 + i, int(v)] for i, v in enumerate(segment.values))
    return ["n", "d_k"], rows


def cmd_dsum(cfg: RunConfig) -> Table:
    D = dk_shifted_sum(cfg.k, cfg.N, cfg.h, cfg.sieve_config())
    return ["k", "N", "h", "D"], [[cfg.k, cfg.N, cfg.h, D]]


def cmd_pseries(cfg: RunConfig) -> Table:
    prec = cfg.precision()
    poly = (p_star_polynomial if cfg.dual else p_polynomial)(cfg.q, prec)
    with prec.context():
        rows = [[cfg.q, j, fmt(c)] for j, c in enumerate(poly.coeffs)]
    return ["q", "j", "b_j"], rows


def cmd_singular(cfg: RunConfig) -> Table:
    saturated = False
    try:
        sv = singular_series(cfg.x, cfg.h, cfg.series_options())
    except SeriesSaturationError as e:
        sv, saturated = e.partial, True
    table = (["x", "h", "q_max", "value", "tail_estimate"],
             [[fmt(mpf(cfg.x)), cfg.h, sv.q_max, fmt(sv.value), fmt(sv.tail_estimate)]])
    if saturated:
        raise CliComputationError(f"q_max saturated at {sv.q_max}", table)
    return table


def cmd_delta(cfg: RunConfig) -> Table:
    opts = cfg.series_options()
    D = dk_shifted_sum(3, cfg.N, cfg.h, cfg.sieve_config())
    saturated = False
    try:
        main = MainTermEngine(cfg.N, opts).main_term(cfg.h)
    except SeriesSaturationError as e:
        main, saturated = e.partial, True
    with opts.precision.context():
        delta = mpf(D) - main.value
    table = (["N", "h", "q_max", "D", "main_term", "delta"],
             [[cfg.N, cfg.h, main.q_max, D, fmt(main.value), fmt(delta)]])
    if saturated:
        raise CliComputationError(f"q_max saturated at {main.q_max}", table)
    return table


def cmd_moment(cfg: RunConfig) -> Table:
    order = 1 if cfg.subcommand == Subcommand.MOMENT1 else 2
    report = moment_report(cfg.N, cfg.shift_count(), order, cfg.series_options(), cfg.sieve_config())
    row = [report.N, report.H, report.q_max, fmt(report.sum_delta), fmt(report.sum_delta_sq),
           fmt(report.ratio1), fmt(report.ratio2), 0 if cfg.no_timing else report.wall_ms]
    table = (MOMENT_HEADER, [row])
    if report.saturated:
        raise CliComputationError(f"q_max saturated at {report.q_max}", table)
    return table


def cmd_ingham(cfg: RunConfig) -> Table:
    ratio = ingham_ratio(cfg.N, cfg.h, cfg.sieve_config(), cfg.precision())
    return ["N", "h", "ratio"], [[cfg.N, cfg.h, fmt(ratio)]]


def cmd_verify(cfg: RunConfig) -> Table:
    result = run_suite(cfg)
    table = (result.header, result.rows)
    if not result.passed:
        raise CliComputationError(f"suite {result.name} failed", table)
    return table


COMMANDS = {
    Subcommand.SIEVE: cmd_sieve,
    Subcommand.DSUM: cmd_dsum,
    Subcommand.PSERIES: cmd_pseries,
    Subcommand.SINGULAR: cmd_singular,
    Subcommand.DELTA: cmd_delta,
    Subcommand.MOMENT1: cmd_moment,
    Subcommand.MOMENT2: cmd_moment,
    Subcommand.INGHAM: cmd_ingham,
    Subcommand.VERIFY: cmd_verify,
}


# ============================================
# Output and entry point
# ============================================

def render_csv(table: Table) -> str:
    header, rows = table
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one subcommand and write its CSV.

    Args:
        argv: Argument list without the program name (default: sys.argv[1:])

    Returns:
        Exit code: 0 success, 1 invalid arguments, 2 computation failure
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError:
        return 1
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except ValidationError as e:
        sys.stderr.write(f"invalid arguments:\n{e}\n")
        return 1

    logging.basicConfig(level=getattr(logging, cfg.log_level), format=LOG_FORMAT, stream=sys.stderr)
    logger.info(f"Running {cfg.subcommand.value} at {cfg.digits} digits with {cfg.threads} thread(s)")

    try:
        table = COMMANDS[cfg.subcommand](cfg)
    except CliComputationError as e:
        message, table = e.args
        write_output(render_csv(table), cfg.output)
        logger.error(message)
        return 2
    except (ValueError, TypeError) as e:
        logger.error(f"Invalid input: {e}")
        return 1
    except Exception:
        logger.exception(f"{cfg.subcommand.value} failed")
        return 2

    write_output(render_csv(table), cfg.output)
    return 0


def main() -> None:
    sys.exit(run())
