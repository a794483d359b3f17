"""Command-line entry point: ``verify run|factors|list-presets``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from . import driver
from .driver import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_BAND = 3

# flag dest -> CaseConfig field
_FLAG_FIELDS = {
    "experiment": "experiment", "a": "a", "grid": "grid_kind", "levels": "n_levels",
    "base_cells": "base_cells", "mu": "mu", "dt": "dt_fixed", "tf": "t_final",
    "tf_multiple": "t_final_multiple", "seed": "seed", "perturb": "perturb_fraction",
    "out": "output_dir", "name": "name",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verify", description="Order-of-accuracy studies for 1D advection.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a refinement study")
    src = run.add_mutually_exclusive_group()
    src.add_argument("--preset", help="named experiment (see list-presets)")
    src.add_argument("--config", type=Path, help="key = value config file")
    run.add_argument("--experiment", choices=driver.EXPERIMENTS)
    run.add_argument("--a", type=float, help="advection speed")
    run.add_argument("--grid", choices=("regular", "irregular", "random", "both"))
    run.add_argument("--levels", type=int)
    run.add_argument("--base-cells", type=int)
    run.add_argument("--mu", type=float, help="CFL number for scaled time steps")
    run.add_argument("--dt", type=float, help="fixed time step")
    run.add_argument("--tf", type=float, help="explicit final time")
    run.add_argument("--tf-multiple", type=float, help="final time in coarsest time steps")
    run.add_argument("--seed", type=int)
    run.add_argument("--perturb", type=float, help="irregular-grid perturbation fraction")
    run.add_argument("--name", help="output file prefix")
    run.add_argument("--out", help="output directory")
    run.add_argument("--check", action="store_true",
                     help="exit 3 if a final-pair order misses its expected band")

    sub.add_parser("factors", help="print the exp(-a T_f / h) factor tables")
    sub.add_parser("list-presets", help="list preset names")
    return parser


def config_from_args(args) -> driver.CaseConfig:
    overrides = {field: getattr(args, dest) for dest, field in _FLAG_FIELDS.items()
                 if getattr(args, dest) is not None}
    if args.preset:
        base = dataclasses.asdict(driver.preset(args.preset))
    elif args.config:
        base = dataclasses.asdict(driver.load_config(args.config))
    else:
        if "experiment" not in overrides:
            raise ConfigError("give --preset, --config, or --experiment")
        base = {}
    # a flag that switches time-step style clears the competing field
    if "t_final" in overrides:
        base["t_final_multiple"] = None
    if "t_final_multiple" in overrides:
        base["t_final"] = None
    return driver.CaseConfig(**{**base, **overrides})


def cmd_run(args) -> int:
    cfg = config_from_args(args)
    if cfg.experiment == "factors":
        text = driver.factor_tables_text()
        print(text, end="")
        if cfg.output_dir:
            out = Path(cfg.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{cfg.name}.txt").write_text(text)
        return EXIT_OK
    tables = driver.run_case(cfg)
    for kind, table in tables.items():
        print(driver.report_text(table, cfg.for_kind(kind)))
    if args.check and not driver.all_bands_pass(tables, cfg):
        return EXIT_BAND
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "factors":
            print(driver.factor_tables_text(), end="")
            return EXIT_OK
        if args.command == "list-presets":
            for name in driver.PRESETS:
                print(f"{name:18s} {driver.PRESET_HELP[name]}")
            return EXIT_OK
        return cmd_run(args)
    except ValueError as exc:
        # ConfigError, divisibility and grid constructor errors are setup mistakes
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
