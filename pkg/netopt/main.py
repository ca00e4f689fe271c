import argparse
import logging
import sys
from typing import List, Optional

from netopt.commands.network import (
    cmd_evaluate,
    cmd_export,
    cmd_generate,
    cmd_solve,
    cmd_validate,
    status_for,
)
from netopt.config import get_log_level
from netopt.models import Algorithm

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s:%(levelname)s:%(name)s:%(message)s"


def _add_solve_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("instance", help="instance file")
    parser.add_argument("--algo", choices=[a.value for a in Algorithm], default=Algorithm.EXACT.value)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the solve result here")
    parser.add_argument("--max-transfers", type=int, default=4)
    parser.add_argument("--threads", type=int, help="worker cap, overrides NETOPT_THREADS")
    parser.add_argument("--search-cap", type=int, help="exact search size cap, overrides NETOPT_SEARCH_CAP")

    anneal = parser.add_argument_group("annealing")
    anneal.add_argument("--initial-temp", type=float)
    anneal.add_argument("--cooling", type=float)
    anneal.add_argument("--iters-per-temp", type=int)
    anneal.add_argument("--min-temp", type=float)
    anneal.add_argument("--max-iterations", type=int)
    anneal.add_argument("--restarts", type=int)
    anneal.add_argument("--capacity-weight", type=float)
    anneal.add_argument("--deadline-weight", type=float)
    anneal.add_argument("--cycle-weight", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netopt",
        description="Courier transportation network design: evaluate and optimize next-hop routing tables",
    )
    parser.add_argument("--log-level", help="overrides NETOPT_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="find a minimum-cost feasible routing table")
    _add_solve_arguments(solve)
    solve.set_defaults(handler=cmd_solve)

    evaluate = commands.add_parser("evaluate", help="evaluate a routing table")
    evaluate.add_argument("instance")
    evaluate.add_argument("solution", help="solution or solve-result file")
    evaluate.add_argument("--out", help="write the evaluation report here")
    evaluate.set_defaults(handler=cmd_evaluate)

    validate = commands.add_parser("validate", help="check an instance and optionally a routing table")
    validate.add_argument("instance")
    validate.add_argument("solution", nargs="?")
    validate.set_defaults(handler=cmd_validate)

    generate = commands.add_parser("generate", help="write a random or bundled instance")
    source = generate.add_mutually_exclusive_group()
    source.add_argument("--spec", help="generator-spec file")
    source.add_argument("--fixture", choices=["courier10"], help="bundled example network")
    generate.add_argument("--seed", type=int)
    generate.add_argument("--demands", type=int)
    generate.add_argument("--out")
    generate.set_defaults(handler=cmd_generate)

    export = commands.add_parser("export", help="write the network as DOT text")
    export.add_argument("instance")
    export.add_argument("solution", nargs="?")
    export.add_argument("--out")
    export.set_defaults(handler=cmd_export)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for ``python -m netopt``; returns the process exit status"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or get_log_level()).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    try:
        return int(args.handler(args))
    except Exception as e:
        status = status_for(e)
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return int(status)


if __name__ == "__main__":
    sys.exit(main())
