"""Command-line entry point.

    wplcsim run <scenario> [--trace OUT] [--seed N]
    wplcsim serve <scenario> [--port P] [--time-scale F]
    wplcsim dump-table
"""

from __future__ import annotations

import argparse
import sys

from . import service
from .scenario import ScenarioError, load_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wplcsim", description="Wireless PLC fieldbus simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file to completion")
    run.add_argument("scenario", help="path to a scenario .toml file")
    run.add_argument("--trace", help="write the run trace to this file")
    run.add_argument("--seed", type=int, help="override the scenario seed")

    serve = sub.add_parser("serve", help="run a live session with the HTTP API")
    serve.add_argument("scenario", help="path to a scenario .toml file")
    serve.add_argument("--port", type=int, default=8471)
    serve.add_argument(
        "--time-scale", type=float, default=1.0,
        help="simulated seconds per wall second (default 1.0)",
    )

    sub.add_parser("dump-table", help="print the fieldbus comparison table")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return service.run_scenario(args.scenario, trace_out=args.trace, seed=args.seed)
    if args.command == "serve":
        from . import server

        try:
            scenario = load_scenario(args.scenario)
        except (ScenarioError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            server.serve(scenario, port=args.port, time_scale=args.time_scale)
        except OSError as exc:  # port in use and friends
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    if args.command == "dump-table":
        sys.stdout.write(service.dump_table_text())
        return 0
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
