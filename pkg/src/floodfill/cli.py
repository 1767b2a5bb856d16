"""Command-line interface over the library on ESRI ASCII grids.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
grids), 3 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import bench_suite, speedup_series, write_csv
from .fill import improved_priority_flood, priority_flood, priority_flood_epsilon
from .flow import flow_to_raster, priority_flood_flowdirs
from .raster import Connectivity, GridFormatError, Raster, load_ascii_grid, save_ascii_grid
from .reference import SYNTH_KINDS, synth_dem, verify_fill
from .watershed import priority_flood_watersheds

__all__ = ["main", "cli_main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3

SEED_ENV = "FLOODFILL_SEED"


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse subclass mapping usage errors onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageExit()


def _connectivity(args) -> Connectivity:
    return Connectivity.FOUR if args.conn == 4 else Connectivity.EIGHT


def _load(path) -> Raster:
    try:
        return load_ascii_grid(path)
    except FileNotFoundError as exc:
        raise GridFormatError(f"{path}: no such file") from exc


def _cmd_fill(args, say) -> int:
    dem = _load(args.input)
    op = priority_flood if args.variant == "original" else improved_priority_flood
    filled, report = op(dem, _connectivity(args), backend=args.backend)
    save_ascii_grid(filled, args.output)
    say(f"filled {args.input} -> {args.output}")
    say(f"backend={report.backend} cells_raised={report.cells_raised} "
        f"volume_added={report.volume_added:.6g} max_raise={report.max_raise:.6g}")
    return EXIT_OK


def _cmd_fill_eps(args, say) -> int:
    dem = _load(args.input)
    filled, report = priority_flood_epsilon(dem, _connectivity(args))
    save_ascii_grid(filled, args.output)
    say(f"filled {args.input} -> {args.output} (gradient-enforcing)")
    say(f"cells_raised={report.cells_raised} volume_added={report.volume_added:.6g} "
        f"max_raise={report.max_raise:.6g}")
    if report.pit_warnings > 0:
        print(
            f"warning: {report.pit_warnings} cell(s) rose above terrain "
            "surrounding their depression (DEM precision limit)",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_flowdirs(args, say) -> int:
    dem = _load(args.input)
    field = priority_flood_flowdirs(dem, _connectivity(args))
    save_ascii_grid(flow_to_raster(field, dem, esri=args.esri_codes), args.output)
    scheme = "esri" if args.esri_codes else "0..8"
    say(f"flow directions ({scheme}) {args.input} -> {args.output}")
    return EXIT_OK


def _cmd_watersheds(args, say) -> int:
    dem = _load(args.input)
    labels, filled = priority_flood_watersheds(
        dem, _connectivity(args), also_fill=args.filled is not None
    )
    save_ascii_grid(labels.to_raster(dem), args.output)
    say(f"labeled {labels.n_watersheds} watersheds {args.input} -> {args.output}")
    if filled is not None:
        save_ascii_grid(filled, args.filled)
        say(f"filled surface -> {args.filled}")
    return EXIT_OK


def _cmd_verify(args, say) -> int:
    z = _load(args.terrain)
    w = _load(args.fill)
    try:
        result = verify_fill(z, w, _connectivity(args), strict=args.strict)
    except ValueError as exc:
        raise GridFormatError(str(exc)) from exc
    checks = [
        ("criterion1 (w >= z)", result.criterion1_ok),
        ("criterion2 (drains to edge)", result.criterion2_ok),
    ]
    if result.criterion3_ok is not None:
        checks.append(("criterion3 (minimal surface)", result.criterion3_ok))
    for name, ok in checks:
        say(f"{name}: {'ok' if ok else 'FAILED'}")
    if result.all_ok:
        say("verification passed")
        return EXIT_OK
    cell, reason = result.first_failure
    print(f"verification failed at cell ({cell.row}, {cell.col}): {reason}",
          file=sys.stderr)
    return EXIT_VERIFY


def _cmd_synth(args, say) -> int:
    seed = args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise GridFormatError(f"{SEED_ENV}={env!r} is not an integer")
    dem = synth_dem(
        args.kind, args.rows, args.cols, seed,
        n_pits=args.pits, integral=args.integral,
    )
    save_ascii_grid(dem, args.output)
    say(f"synthesized {args.kind} {args.rows}x{args.cols} (seed {seed}) -> {args.output}")
    return EXIT_OK


def _cmd_bench(args, say) -> int:
    seed = args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        seed = int(env)
    records = bench_suite(
        sizes=args.sizes,
        depression_fractions=args.fractions,
        repeats=args.repeats,
        seed=seed,
        include_baseline=not args.no_baseline,
        progress=say,
    )
    if args.csv:
        write_csv(records, args.csv)
        say(f"wrote {len(records)} records -> {args.csv}")
    say("speed-up of improved vs generalized by depression fraction:")
    for pct, speedup in speedup_series(records):
        say(f"  {pct:6.2f}% depressions: {speedup:+.2f}%")
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def _build_parser() -> _Parser:
    parser = _Parser(prog="floodfill",
                     description="Depression filling and drainage analysis on ESRI ASCII grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--conn", type=int, choices=(4, 8), default=8,
                       help="grid connectivity (default 8)")
        p.add_argument("--quiet", action="store_true", help="suppress the run report")

    p = sub.add_parser("fill", help="fill depressions to the minimal draining surface")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--backend", choices=("heap", "bucket", "auto"), default="heap",
                   help="queue backend; auto picks bucket for in-range integer rasters")
    p.add_argument("--variant", choices=("improved", "original"), default="improved")
    add_common(p)
    p.set_defaults(func=_cmd_fill)

    p = sub.add_parser("fill-eps", help="fill with an enforced drainage gradient")
    p.add_argument("input")
    p.add_argument("output")
    add_common(p)
    p.set_defaults(func=_cmd_fill_eps)

    p = sub.add_parser("flowdirs", help="assign D8 flow directions by depression carving")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--esri-codes", action="store_true",
                   help="export ESRI power-of-two direction codes")
    add_common(p)
    p.set_defaults(func=_cmd_flowdirs)

    p = sub.add_parser("watersheds", help="label cells by their edge outlet")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--filled", metavar="PATH",
                   help="also write the depression-filled surface")
    add_common(p)
    p.set_defaults(func=_cmd_watersheds)

    p = sub.add_parser("verify", help="check a fill against the defining criteria")
    p.add_argument("terrain")
    p.add_argument("fill")
    p.add_argument("--strict", action="store_true",
                   help="require strictly descending drainage paths")
    add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("synth", help="generate synthetic terrain")
    p.add_argument("kind", choices=SYNTH_KINDS)
    p.add_argument("output")
    p.add_argument("--rows", type=int, default=64)
    p.add_argument("--cols", type=int, default=64)
    p.add_argument("--seed", type=int, default=0,
                   help=f"RNG seed (overridden by ${SEED_ENV})")
    p.add_argument("--pits", type=int, default=None, help="basin count for kind=pits")
    p.add_argument("--integral", action="store_true", help="floor values to whole units")
    add_common(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bench", help="time the algorithm matrix on synthetic terrain")
    p.add_argument("--sizes", type=_int_list, default=[256],
                   help="comma-separated square sides, each >= 64")
    p.add_argument("--fractions", type=_float_list, default=[5.0, 20.0, 40.0, 60.0],
                   help="target depression percentages")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=90125)
    p.add_argument("--csv", metavar="PATH", help="write records as CSV")
    p.add_argument("--no-baseline", action="store_true",
                   help="skip the slow naive-fill baseline")
    add_common(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv=None) -> int:
    """Run the CLI; returns the process exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit:
        return EXIT_USAGE

    quiet = getattr(args, "quiet", False)

    def say(msg: str) -> None:
        if not quiet:
            print(msg)

    try:
        return args.func(args, say)
    except (GridFormatError, OSError, ValueError) as exc:
        print(f"floodfill: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
