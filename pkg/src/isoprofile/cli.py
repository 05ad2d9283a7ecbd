"""Command-line front end: ``isoprofile <subcommand> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  Tables go to --output (stdout by default); one-line summaries go to
stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from contextlib import contextmanager

from . import bounds, logconcave, montecarlo, needle, uniform
from .bodies import BodySpec, CornerSubcube, KDimSubcube, Norm
from .errors import ConfigurationError, DomainError, InfeasibleCut, UnsupportedCombinationError, UsageError
from .io import FORMATS, format_float, write_table

PROFILE_COLUMNS = ("x", "gamma", "G", "xG", "folded")
UNIFORM_COLUMNS = ("n", "x", "gamma", "G", "xG", "folded")
SWEEP_PROFILE_COLUMNS = ("n", "x", "gamma", "G", "xG", "xG_logconcave", "ratio")
SWEEP_DIMS = "1,2,3,5,10,100"
NEEDLE_TOL = 1e-10


class CliUsageError(Exception):
    """A flag value outside its legal domain."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def fold_x(x: float) -> float:
    """min(x, 1 - x); x must lie strictly inside (0, 1)."""
    try:
        return montecarlo.fold_x(x)
    except UsageError as exc:
        raise CliUsageError("--x", str(exc)) from None


# -- argument parsing --------------------------------------------------------

def _grid_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--grid", nargs=4, metavar=("LO", "HI", "COUNT", "SPACING"),
        help="grid of x values: LO HI COUNT {linear,log}")


def _io_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="csv", help="output format (default csv)")
    parser.add_argument("--output", default="-", help="output path (default: standard output)")


def _point_args(parser: argparse.ArgumentParser) -> None:
    g = parser.add_mutually_exclusive_group()
    g.add_argument("--x", type=float, help="set size in (0, 1); values above 1/2 are folded")
    g.add_argument("--gamma", type=float, help="profile parameter gamma >= 0")
    _grid_arg(parser)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="isoprofile",
        description="Sharp isoperimetric profiles for log-concave measures, closed-form bounds, "
                    "and numerical verification.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="log-concave profile point(s) (x, gamma, G(1/x))")
    _point_args(sp)
    _io_args(sp)

    sp = sub.add_parser("uniform-profile", help="dimension-n uniform-distribution profile")
    sp.add_argument("--n", type=int, required=True, help="dimension n >= 1")
    _point_args(sp)
    _io_args(sp)

    sp = sub.add_parser(
        "bounds", help="every closed-form bound next to the sharp profiles",
        description="Default grid: 2000 log-spaced points on [1e-4, 0.5].")
    _grid_arg(sp)
    sp.add_argument("--n", type=int, default=2, help="dimension for the uniform column (default 2)")
    _io_args(sp)

    sp = sub.add_parser("verify-1d", help="needle-grid suite for the three-set inequality")
    sp.add_argument("--family", choices=[f.value for f in needle.Family], default="exponential")
    sp.add_argument("--n", type=int, default=2, help="cone dimension for --family linear (default 2)")
    _io_args(sp)

    sp = sub.add_parser(
        "verify-mc", help="Monte Carlo theorem checks on convex bodies",
        description="Without --x runs the default verification matrix "
                    "(cube/ball/simplex x L1/L2/Linf x uniform/tilt x 5 cuts x n in {2,3,5}). "
                    "With --x runs one hypercube subcube check in dimension --n.")
    sp.add_argument("--samples", type=int, default=montecarlo.DEFAULT_SAMPLES,
                    help=f"samples per cell (default {montecarlo.DEFAULT_SAMPLES})")
    sp.add_argument("--seed", type=int, default=montecarlo.DEFAULT_SEED,
                    help=f"64-bit seed (default {montecarlo.DEFAULT_SEED})")
    sp.add_argument("--n", type=int, help="dimension for a single subcube check")
    sp.add_argument("--x", type=float, help="subcube volume for a single check")
    sp.add_argument("--k", type=int, help="subcube dimension k <= n (default n)")
    sp.add_argument("--norm", choices=[m.value for m in Norm], default="linf")
    _io_args(sp)

    sp = sub.add_parser("sweep", help="uniform profiles for several n against the log-concave profile")
    _grid_arg(sp)
    sp.add_argument("--dims", default=SWEEP_DIMS, help=f"comma-separated dimensions (default {SWEEP_DIMS})")
    _io_args(sp)
    return p


def _parse_grid(values, *, hi_max: float) -> list[float]:
    lo_s, hi_s, count_s, spacing = values
    try:
        lo, hi = float(lo_s), float(hi_s)
        count = int(count_s)
    except ValueError:
        raise CliUsageError("--grid", "expected LO HI COUNT SPACING with numeric LO, HI and integer COUNT") from None
    if not (0.0 < lo < hi <= hi_max):
        raise CliUsageError("--grid", f"bounds must satisfy 0 < LO < HI <= {hi_max:g}, got {lo:g} {hi:g}")
    try:
        return list(bounds.GridSpec(lo, hi, count, spacing).points())
    except UsageError as exc:
        raise CliUsageError("--grid", str(exc)) from None


def _dimension(n, flag="--n", minimum=1) -> int:
    if n is None or n < minimum:
        raise CliUsageError(flag, f"must be an integer >= {minimum}, got {n!r}")
    return n


# -- subcommands -------------------------------------------------------------

def _point_queries(args):
    """([(folded x, was_folded)], None) from --x / --grid, or (None, gamma) from --gamma."""
    given = [v is not None for v in (args.x, args.gamma, args.grid)]
    if sum(given) != 1:
        raise CliUsageError("--x/--gamma/--grid", "give exactly one of --x, --gamma or --grid")
    if args.grid is not None:
        pts = _parse_grid(args.grid, hi_max=1.0)
        if pts[-1] >= 1.0:
            raise CliUsageError("--grid", "HI must be below 1")
        return [(fold_x(v), v > 0.5) for v in pts], None
    if args.x is not None:
        return [(fold_x(args.x), args.x > 0.5)], None
    if not (math.isfinite(args.gamma) and args.gamma >= 0.0):
        raise CliUsageError("--gamma", f"must be finite and >= 0, got {args.gamma!r}")
    return None, args.gamma


def cmd_profile(args):
    xs, gamma = _point_queries(args)
    rows = []
    if xs is None:
        if gamma == 0.0:
            rows.append({"x": 0.5, "gamma": 0.0, "G": 2.0, "xG": 1.0, "folded": False})
        else:
            x = logconcave.x_of_gamma(gamma)
            rows.append({"x": x, "gamma": gamma, "G": logconcave.g_of_gamma(gamma),
                         "xG": logconcave.xg_of_gamma(gamma), "folded": False})
    else:
        for x, folded in xs:
            p = logconcave.profile_g(x)
            rows.append({"x": p.x, "gamma": p.gamma, "G": p.g, "xG": logconcave.xg_of_x(x), "folded": folded})
    return rows, PROFILE_COLUMNS, None, 0


def cmd_uniform_profile(args):
    n = _dimension(args.n)
    xs, gamma = _point_queries(args)
    rows = []
    if xs is None:
        if n == 1 and gamma != 0.0:
            raise CliUsageError("--gamma", "dimension 1 has only gamma = 0")
        if gamma == 0.0:
            rows.append({"n": n, "x": 0.5, "gamma": 0.0, "G": 2.0, "xG": 1.0, "folded": False})
        else:
            x = uniform.x_of_gamma_n(gamma, n)
            xg = uniform.xg_of_gamma_n(gamma, n)
            rows.append({"n": n, "x": x, "gamma": gamma, "G": xg / x, "xG": xg, "folded": False})
    else:
        for x, folded in xs:
            p = uniform.profile_g_n(x, n)
            rows.append({"n": n, "x": p.x, "gamma": p.gamma, "G": p.g, "xG": uniform.xg_of_x_n(x, n),
                         "folded": folded})
    return rows, UNIFORM_COLUMNS, None, 0


def cmd_bounds(args):
    n = _dimension(args.n)
    grid = bounds.DEFAULT_GRID.points() if args.grid is None else _parse_grid(args.grid, hi_max=0.5)
    rep = bounds.bound_gap_report(grid, n=n)
    slacks = rep.ordering_slacks()
    summary = (f"bounds: points={len(rep.x_grid)} max_abs_err={format_float(rep.max_abs_err)} "
               f"max_rel_err={format_float(rep.max_rel_err)} "
               f"min_ordering_slack={format_float(min(slacks.values()))}")
    return rep.rows(), bounds.REPORT_COLUMNS, summary, 0


def cmd_verify_1d(args):
    family = needle.Family(args.family)
    if family is needle.Family.EXPONENTIAL_TILT:
        axes, n = needle.default_sweep_axes(), 1
    else:
        axes, n = needle.default_linear_axes(), _dimension(args.n, minimum=2)
    rows = [r.as_dict() for r in needle.needle_sweep(*axes, family=family, n=n)]
    worst = min(r["slack"] for r in rows)

    # the brute-force minimum over each family must reproduce the closed-form profile
    probe = (0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.49)
    if family is needle.Family.EXPONENTIAL_TILT:
        oracle_err = max(abs(needle.minimize_exp_family(x) - logconcave.xg_of_x(x)) for x in probe)
    else:
        oracle_err = max(abs(needle.minimize_linear_family(x, n) - uniform.xg_of_x_n(x, n)) for x in probe)
    ok = worst >= -NEEDLE_TOL and oracle_err <= 1e-6
    summary = (f"verify-1d: family={family.value} n={n} instances={len(rows)} "
               f"min_slack={format_float(worst)} oracle_err={format_float(oracle_err)} "
               f"{'PASS' if ok else 'FAIL'}")
    return rows, needle.SWEEP_COLUMNS, summary, 0 if ok else 1


def cmd_verify_mc(args):
    if args.samples < 1:
        raise CliUsageError("--samples", f"must be a positive integer, got {args.samples}")
    if not 0 <= args.seed < 1 << 64:
        raise CliUsageError("--seed", f"must lie in [0, 2^64), got {args.seed}")
    if args.x is None:
        if args.k is not None or args.n is not None:
            raise CliUsageError("--n/--k", "a single subcube check also needs --x")
        cells = montecarlo.default_matrix()
    else:
        n = _dimension(args.n, minimum=2)
        if not 0.0 < args.x < 1.0:
            raise CliUsageError("--x", f"must lie in (0, 1), got {args.x!r}")
        k = n if args.k is None else args.k
        if not 1 <= k <= n:
            raise CliUsageError("--k", f"must satisfy 1 <= k <= n = {n}, got {k}")
        cut = CornerSubcube.of_volume(n, args.x) if k == n else KDimSubcube.of_volume(k, args.x)
        cells = [(BodySpec("cube", n, norm=args.norm), cut)]
    results = montecarlo.run_matrix(cells, samples=args.samples, seed=args.seed)
    rows = [r.row() for r in results]
    failed = sum(not r.passed for r in results)
    summary = f"verify-mc: cells={len(results)} failed={failed} {'PASS' if failed == 0 else 'FAIL'}"
    return rows, montecarlo.MATRIX_COLUMNS, summary, 0 if failed == 0 else 1


def cmd_sweep(args):
    try:
        dims = [int(d) for d in args.dims.split(",") if d.strip()]
    except ValueError:
        raise CliUsageError("--dims", f"expected comma-separated integers, got {args.dims!r}") from None
    if not dims or min(dims) < 1:
        raise CliUsageError("--dims", "dimensions must be integers >= 1")
    grid = bounds.GridSpec(1e-4, 0.5, 200, "log").points() if args.grid is None \
        else _parse_grid(args.grid, hi_max=0.5)
    rows = []
    for x in grid:
        lc = logconcave.xg_of_x(x)
        for n in dims:
            p = uniform.profile_g_n(x, n)
            xg = uniform.xg_of_x_n(x, n)
            rows.append({"n": n, "x": float(x), "gamma": p.gamma, "G": p.g, "xG": xg,
                         "xG_logconcave": lc, "ratio": xg / lc})
    return rows, SWEEP_PROFILE_COLUMNS, None, 0


COMMANDS = {
    "profile": cmd_profile,
    "uniform-profile": cmd_uniform_profile,
    "bounds": cmd_bounds,
    "verify-1d": cmd_verify_1d,
    "verify-mc": cmd_verify_mc,
    "sweep": cmd_sweep,
}


@contextmanager
def _open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def dispatch(args: argparse.Namespace) -> int:
    handler = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        rows, columns, summary, status = handler(args)
    except CliUsageError as exc:
        print(f"isoprofile {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, UsageError, ConfigurationError, UnsupportedCombinationError, InfeasibleCut) as exc:
        print(f"isoprofile {args.command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        with _open_output(args.output) as fh:
            write_table(rows, columns, args.format, fh)
    except OSError as exc:
        print(f"isoprofile {args.command}: error: --output: {exc}", file=sys.stderr)
        return 2
    if summary:
        print(f"{summary} ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with status 2 on malformed flags
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
