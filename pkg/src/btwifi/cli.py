"""Command-line entry point.

    simulate --config scenario.cfg [--out summary.csv] [--trace-dir DIR]
             [--scheme legacy|proposed] [--m INT] [--seed INT]
             [--jobs INT] [--curves-dir DIR]

--scheme/--m/--seed restrict the grid so any single CSV row can be
reproduced in isolation.  Exit codes: 0 success, 1 configuration or output
error, 2 runtime contract violation inside a run.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import ConfigError, ScenarioConfig, parse_config, validate
from .engine import ContractViolation
from .sweep import SweepError, run_sweep, write_curve_files, write_summary_csv


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Run the Wi-Fi busy-tone priority-access simulator over a "
                    "(scheme x M x seed) grid and write a summary CSV.")
    p.add_argument("--config", metavar="FILE",
                   help="scenario file (omit for the default scenario)")
    p.add_argument("--out", metavar="CSV", default="summary.csv",
                   help="summary CSV path (default: %(default)s)")
    p.add_argument("--trace-dir", metavar="DIR",
                   help="write one JSONL event trace per run into DIR")
    p.add_argument("--scheme", choices=("legacy", "proposed"),
                   help="restrict the sweep to one scheme")
    p.add_argument("--m", type=int, metavar="INT",
                   help="restrict the sweep to one URLLC station count")
    p.add_argument("--seed", type=int, metavar="INT",
                   help="restrict the sweep to one seed")
    p.add_argument("--jobs", type=int, default=1, metavar="INT",
                   help="worker processes for independent runs (default: 1)")
    p.add_argument("--curves-dir", metavar="DIR",
                   help="also write gnuplot-ready (M, metric) files into DIR")
    return p


def load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = ScenarioConfig()
    overrides = {}
    if args.scheme is not None:
        overrides["schemes"] = (args.scheme,)
    if args.m is not None:
        overrides["m_list"] = (args.m,)
    if args.seed is not None:
        overrides["seeds"] = (args.seed,)
    if overrides:
        cfg = replace(cfg, **overrides)
        problems = validate(cfg)
        if problems:
            raise ConfigError([(0, p) for p in problems])
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_scenario(args)
    except (ConfigError, OSError) as exc:
        print(f"simulate: config error: {exc}", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print("simulate: --jobs must be >= 1", file=sys.stderr)
        return 1
    try:
        summaries = run_sweep(cfg, jobs=args.jobs, trace_dir=args.trace_dir)
    except SweepError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"simulate: contract violation: {exc}", file=sys.stderr)
        return 2
    try:
        write_summary_csv(summaries, args.out)
        if args.curves_dir is not None:
            write_curve_files(summaries, args.curves_dir)
    except OSError as exc:
        print(f"simulate: cannot write output: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(summaries)} run summaries to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
