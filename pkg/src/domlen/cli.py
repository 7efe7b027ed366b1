"""Command-line entry point.

    domlen <mode> --config <path> [--out <dir>] [--seed <u64>] [--noise <percent>]

Modes: forward | invert | multistart | table1 | table2 | oracle-check | scan.
``--config`` takes a file path or the name of a shipped case
(``--list-cases`` prints those). Exit codes: 0 success, 1 config error,
2 solver failure, 3 optimizer non-convergence (results are still written).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import backend
from .config import case_text, list_cases, load_config, parse_config
from .errors import ConfigError, SolverFailure
from .runner import TABLE_CASES, run

_CLI_MODES = ("forward", "invert", "multistart", "table1", "table2",
              "oracle-check", "scan")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domlen",
        description="Recover the spatial interval length of 1D viscous-flow "
                    "models from boundary observations.")
    parser.add_argument("mode", nargs="?", choices=_CLI_MODES,
                        help="experiment mode")
    parser.add_argument("--config", help="experiment file path or shipped case name")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="noise seed (overrides the config)")
    parser.add_argument("--noise", type=float,
                        help="noise percent (overrides the config)")
    parser.add_argument("--list-cases", action="store_true",
                        help="print the shipped case configs and exit")
    return parser


def _load(config_arg: str):
    path = Path(config_arg)
    if path.is_file():
        return load_config(path)
    if config_arg in list_cases():
        return parse_config(case_text(config_arg))
    raise ConfigError([f"config {config_arg!r} is neither a file nor a "
                       f"shipped case (cases: {', '.join(list_cases())})"])


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.list_cases:
        for name in list_cases():
            print(name)
        return 0
    if args.mode is None:
        parser.error("a mode is required unless --list-cases is given")

    try:
        if args.mode in ("table1", "table2"):
            config = (_load(args.config) if args.config
                      else parse_config(case_text(TABLE_CASES[args.mode])))
            config = dataclasses.replace(config, mode="table", table=args.mode)
        else:
            if not args.config:
                parser.error("--config is required for this mode")
            config = _load(args.config)
            mode = args.mode.replace("-", "_")
            config = dataclasses.replace(config, mode=mode)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        if args.noise is not None:
            config = dataclasses.replace(config, noise_percent=args.noise)
    except ConfigError as exc:
        print("config error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return 1

    try:
        report = run(config, args.out)
    except ConfigError as exc:
        print("config error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return 1
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2

    print(f"mode: {report.mode}  backend: {backend.active()}  "
          f"wall: {report.wall_clock:.2f}s")
    for key, value in report.summary.items():
        print(f"{key}: {value}")
    for res in report.results:
        print(f"  L_c = {res.length:.9f}  cost = {res.cost:.3e}  "
              f"iterates = {res.iterations}  converged = {res.converged} "
              f"({res.reason.value})")
    if report.manifest:
        print("files:")
        for path in report.manifest:
            print(f"  {path}")
    return 0 if report.converged else 3


if __name__ == "__main__":
    sys.exit(main())
