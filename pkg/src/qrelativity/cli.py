"""
qrel: command-line front end.

    qrel run <config.json | builtin:NAME> [--seed N] [--out DIR]
    qrel verify [--only PREFIX] [--tolerance NAME=VALUE ...]
    qrel transform-table <params.json> [--out DIR]
    qrel serve [--host HOST] [--port PORT]

Exit status: 0 on success, 1 on a violated precondition or a failed
invariant, 2 on an unreadable or invalid config. Logs go to stderr; stdout
carries only the one-line summary (or the per-invariant report).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .exceptions import ConfigError, PreconditionError
from .services import (
    builtin_names,
    load_scenario,
    load_transform_params,
    run_invariants,
    run_scenario,
    transform_table,
    transform_table_report,
    write_outcome,
)
from .settings import get_settings
from .utils.serialization import write_csv, write_json
from .utils.version import get_version

logger = logging.getLogger("qrelativity.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _parse_tolerance(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance for {name!r} is not a number: {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrel", description="Quantum-relativity scenarios and invariant checks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    parser.add_argument("--log-level", default=None, help="Override QREL_LOG_LEVEL (DEBUG, INFO, WARNING, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one scenario config")
    run.add_argument("config", help=f"Path to a JSON scenario, or builtin:NAME ({', '.join(builtin_names())})")
    run.add_argument("--seed", type=int, default=None, help="Override the config's seed")
    run.add_argument("--out", default=None, help="Output directory (default: QREL_OUTPUT_DIR)")

    verify = sub.add_parser("verify", help="Run the invariant suite")
    verify.add_argument("--only", default=None, help="Run only invariants whose name starts with PREFIX")
    verify.add_argument(
        "--tolerance",
        action="append",
        type=_parse_tolerance,
        default=[],
        metavar="NAME=VALUE",
        help="Override one invariant tolerance (repeatable)",
    )

    table = sub.add_parser("transform-table", help="Tabulate dilation, de Broglie, delta and gamma values")
    table.add_argument("config", help="Path to transform-table params (or a transform_table scenario)")
    table.add_argument("--out", default=None, help="Output directory (default: QREL_OUTPUT_DIR)")

    serve = sub.add_parser("serve", help="Start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _out_dir(arg: Optional[str]) -> Path:
    return Path(arg if arg is not None else get_settings().output_dir)


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    outcome = run_scenario(scenario, seed=args.seed, max_workers=get_settings().max_workers)
    paths = write_outcome(outcome, _out_dir(args.out), scenario.output_stem)
    logger.info(f"wrote {len(paths)} files for {scenario.kind}")
    print(outcome.summary(paths[0]))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    overrides: Dict[str, float] = dict(args.tolerance)
    results = run_invariants(overrides, only=args.only)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        measured = "error" if r.measured is None else f"{r.measured:.3e}"
        print(f"{status} {r.name} measured={measured} tolerance={r.tolerance:.3e}")
    failed: List[str] = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} invariants failed: {', '.join(failed)}")
        return EXIT_FAILED
    print(f"all {len(results)} invariants passed")
    return EXIT_OK


def _cmd_transform_table(args: argparse.Namespace) -> int:
    params = load_transform_params(args.config)
    table = transform_table(params.mass_pairs, params.energies, params.t, params.h, params.speed)
    out = _out_dir(args.out)
    write_json(out / "transform_table.json", transform_table_report(table))
    csv_path = write_csv(out / "transform_table.csv", table)
    print(f"transform_table: rows={len(table)} -> {csv_path}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("qrelativity.api:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "verify": _cmd_verify,
    "transform-table": _cmd_transform_table,
    "serve": _cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        level = (args.log_level or get_settings().log_level).upper()
    except ValueError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
