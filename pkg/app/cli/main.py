"""Command-line entry point: ``conelie <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from app.cli import commands
from app.cli.schemas import load_document, parse_run_config
from app.config import get_settings
from app.exceptions import ConfigError


def _formats(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _projection(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected two comma-separated coordinates, e.g. X1,X2")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conelie",
        description="Extremals of cone-constrained (sub-)Lorentzian problems on Lie groups.",
    )
    ap.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Integrate extremals from a run config.")
    run.add_argument("--config", required=True, help="Run config (TOML).")
    run.add_argument("--out", default=None, help="Output directory (default: settings.output_dir).")
    run.add_argument("--dt", type=float, default=None, help="Override the sample spacing.")
    run.add_argument("--t1", type=float, default=None, help="Override the horizon.")
    run.add_argument("--nu", type=int, choices=[0, 1], default=None, help="Override the cost multiplier.")
    run.add_argument("--format", type=_formats, default=None, help="Comma-separated subset of csv,record,svg.")

    check = sub.add_parser("check", help="Structural checks of a scenario.")
    check.add_argument("scenario", nargs="?", help="Registered scenario name.")
    check.add_argument("--config", default=None, help="Scenario or run config (TOML) with an inline scenario.")
    check.add_argument("--n", type=int, default=None, help="Space dimension for minkowski_1n.")
    check.add_argument("--samples", type=int, default=500, help="Samples for the antinorm axiom check.")

    plot = sub.add_parser("plot", help="SVG projection of a trajectory file.")
    plot.add_argument("trajectory", help="Trajectory CSV or JSON record.")
    plot.add_argument("--projection", type=_projection, required=True, help="Two chart coordinates, e.g. a,b.")
    plot.add_argument("--out", default=None, help="Output file or directory.")

    sub.add_parser("scenarios", help="List registered scenarios.")

    dual = sub.add_parser("dual", help="Evaluate the dual antinorm at a covector.")
    dual.add_argument("scenario", help="Registered scenario name.")
    dual.add_argument("covector", type=float, nargs="+", help="Covector coordinates.")
    dual.add_argument("--n", type=int, default=None, help="Space dimension for minkowski_1n.")
    dual.add_argument("--r", type=float, default=None, help="Also describe the maximizer set at this level.")

    serve = sub.add_parser("serve", help="Start the HTTP service.")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        if args.command == "run":
            overrides = {"dt": args.dt, "t1": args.t1, "nu": args.nu, "formats": args.format}
            cfg = parse_run_config(load_document(args.config), overrides)
            return commands.cmd_run(cfg, args.out or settings.output_dir, settings)
        if args.command == "check":
            if args.config:
                ref, n = commands.load_check_target(args.config)
            elif args.scenario:
                ref, n = args.scenario, args.n
            else:
                print("error: give a scenario name or --config")
                return commands.EXIT_INPUT
            return commands.cmd_check(ref, settings, n=args.n if args.n is not None else n, samples=args.samples)
        if args.command == "plot":
            return commands.cmd_plot(args.trajectory, args.projection, args.out)
        if args.command == "scenarios":
            return commands.cmd_scenarios(settings)
        if args.command == "dual":
            return commands.cmd_dual(args.scenario, args.covector, settings, n=args.n, r=args.r)
        if args.command == "serve":
            import uvicorn

            uvicorn.run(
                "app.main:app",
                host=args.host or settings.host,
                port=args.port or settings.port,
                reload=settings.debug,
            )
            return commands.EXIT_OK
    except ConfigError as exc:
        commands.report_error(exc)
        return commands.EXIT_INPUT
    return commands.EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
