"""Command-line entry point.

    scrumsim run --config table2-constants.cfg --seed 7
    scrumsim sweep --design scenario-sweep.cfg --workers 8 --out sweep.csv
    scrumsim scenarios --config table2-constants.cfg --reps 30 --workers 8
    scrumsim report --csv scenarios.csv

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .config import ConfigError, load_config
from .engine import run
from .metrics import read_csv, to_csv_text, write_csv
from .sweep import (
    DesignError,
    ReportError,
    SweepError,
    execute_sweep,
    load_design,
    render_report,
    scenario_design,
    scenario_report,
)

FIXTURES = Path(__file__).with_name("fixtures")


def _existing_path(text: str) -> Path:
    p = Path(text)
    if not p.exists():
        # a bare fixture name resolves to the shipped copy
        shipped = FIXTURES / text
        if shipped.exists():
            return shipped
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return p


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _default_workers() -> int:
    env = os.environ.get("SIM_WORKERS")
    if not env:
        return 1
    try:
        return _positive_int(env)
    except argparse.ArgumentTypeError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrumsim", description="Agile team competence simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation and print its metrics row")
    p.add_argument("--config", type=_existing_path, required=True)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--out", type=Path)

    workers = dict(type=_positive_int, default=None, help="parallel workers (default $SIM_WORKERS or 1)")

    p = sub.add_parser("sweep", help="run a factorial sweep from a design file")
    p.add_argument("--design", type=_existing_path, required=True)
    p.add_argument("--workers", **workers)
    p.add_argument("--seed", type=_seed, help="override master_seed")
    p.add_argument("--reps", type=_positive_int, help="override repetitions")
    p.add_argument("--out", type=Path, default=Path("sweep.csv"))

    p = sub.add_parser("scenarios", help="run the four sociable/curious scenarios")
    p.add_argument("--config", type=_existing_path, required=True)
    p.add_argument("--reps", type=_positive_int, default=30)
    p.add_argument("--workers", **workers)
    p.add_argument("--seed", type=_seed, help="master seed (default: the config's seed)")
    p.add_argument("--out", type=Path, default=Path("scenarios.csv"))

    p = sub.add_parser("report", help="render the scenario report from a results CSV")
    p.add_argument("--csv", type=_existing_path, required=True)
    p.add_argument("--out", type=Path)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) is None:
        args.workers = _default_workers()
    return args


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _write_rows(rows, out: Path) -> None:
    with open(out, "w", newline="") as fh:
        write_csv(rows, fh)


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "run":
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        _emit(to_csv_text([run(config, run_id=1)]), args.out)
    elif args.command == "sweep":
        design = load_design(args.design)
        if args.seed is not None:
            design.master_seed = args.seed
        if args.reps is not None:
            design.repetitions = args.reps
        rows = execute_sweep(design, args.workers)
        _write_rows(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
        try:
            sys.stdout.write(render_report(scenario_report(rows)))
        except ReportError:
            pass  # designs that do not cover all four scenarios have no report
    elif args.command == "scenarios":
        base = load_config(args.config)
        seed = args.seed if args.seed is not None else base.seed
        rows = execute_sweep(scenario_design(base, args.reps, seed), args.workers)
        _write_rows(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
        sys.stdout.write(render_report(scenario_report(rows)))
    elif args.command == "report":
        with open(args.csv, newline="") as fh:
            rows = read_csv(fh)
        if not rows:
            raise ReportError("no rows")
        _emit(render_report(scenario_report(rows)), args.out)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ConfigError, DesignError, ReportError, SweepError, ValueError, OSError) as exc:
        print(f"scrumsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
