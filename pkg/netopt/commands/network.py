import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from netopt.exceptions import InfeasibleError, NetoptError, SearchSpaceTooLarge
from netopt.models import AnnealSettings, EvaluationReport, GeneratorSpec, PenaltyWeights, SolveConfig
from netopt.services.cost_time import evaluate
from netopt.services.fixtures import courier10_instance
from netopt.services.generator import generate
from netopt.services.graph_export import export_graph
from netopt.services.instance_io import (
    parse_generator_spec,
    parse_instance,
    parse_routing,
    serialize_instance,
    serialize_report,
    serialize_result,
)
from netopt.services.solver import solve
from netopt.services.validation import validate_solution

logger = logging.getLogger(__name__)


class ExitStatus(IntEnum):
    SUCCESS = 0
    INFEASIBLE = 1
    INPUT_ERROR = 2
    LIMIT_EXCEEDED = 3


def status_for(error: Exception) -> ExitStatus:
    """Exit status for an error escaping a command"""
    if isinstance(error, SearchSpaceTooLarge):
        return ExitStatus.LIMIT_EXCEEDED
    if isinstance(error, InfeasibleError):
        return ExitStatus.INFEASIBLE
    if isinstance(error, (NetoptError, ValidationError, OSError)):
        return ExitStatus.INPUT_ERROR
    raise error


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("Wrote %s", path)


def _emit(path: Optional[str], text: str) -> None:
    if path:
        _write(path, text)
    else:
        sys.stdout.write(text)


def print_summary(report: EvaluationReport) -> None:
    """Objective decomposition, feasibility and any violations on standard output"""
    print(f"objective: {report.objective:.6f}")
    print(f"  accumulation cost:   {report.accumulation_cost:.6f}")
    print(f"  transport cost:      {report.transport_cost:.6f}")
    print(f"  transfer time cost:  {report.transfer_time_cost:.6f}")
    print(f"  transfer op cost:    {report.transfer_op_cost:.6f}")
    print(f"feasible: {'yes' if report.feasible else 'no'}")
    for violation in report.violations:
        print(f"  {violation.entity}: {violation.rule}: {violation.message}")


def _drop_unset(values: Dict[str, Any]) -> Dict[str, Any]:
    return {key: value for key, value in values.items() if value is not None}


def solve_config(args: argparse.Namespace) -> SolveConfig:
    """SolveConfig from command-line flags; unset flags keep their defaults"""
    anneal = AnnealSettings(**_drop_unset({
        "initial_temp": args.initial_temp,
        "cooling": args.cooling,
        "iters_per_temp": args.iters_per_temp,
        "min_temp": args.min_temp,
        "max_iterations": args.max_iterations,
        "restarts": args.restarts,
    }))
    penalty = PenaltyWeights(**_drop_unset({
        "capacity_weight": args.capacity_weight,
        "deadline_weight": args.deadline_weight,
        "cycle_weight": args.cycle_weight,
    }))
    return SolveConfig(**_drop_unset({
        "algorithm": args.algo,
        "seed": args.seed,
        "max_transfers": args.max_transfers,
        "search_cap": args.search_cap,
        "threads": args.threads,
        "anneal": anneal,
        "penalty": penalty,
    }))


def cmd_solve(args: argparse.Namespace) -> ExitStatus:
    """Solve an instance file and write the routing table with its report"""
    instance = parse_instance(_read(args.instance))
    result = solve(instance, solve_config(args))
    if args.out:
        _write(args.out, serialize_result(result))
    print(f"algorithm: {result.algorithm.value}")
    print(f"proven optimal: {'yes' if result.proven_optimal else 'no'}")
    print_summary(result.report)
    return ExitStatus.SUCCESS if result.report.feasible else ExitStatus.INFEASIBLE


def cmd_evaluate(args: argparse.Namespace) -> ExitStatus:
    """Evaluate a routing table against an instance"""
    instance = parse_instance(_read(args.instance))
    routing = parse_routing(_read(args.solution))
    report = evaluate(instance, routing)
    if args.out:
        _write(args.out, serialize_report(report))
    print_summary(report)
    return ExitStatus.SUCCESS if report.feasible else ExitStatus.INFEASIBLE


def cmd_validate(args: argparse.Namespace) -> ExitStatus:
    """Check an instance and, optionally, a routing table for structural violations"""
    instance = parse_instance(_read(args.instance))
    if args.solution:
        violations = validate_solution(instance, parse_routing(_read(args.solution)))
        if violations:
            for violation in violations:
                print(violation)
            return ExitStatus.INPUT_ERROR
    print("valid")
    return ExitStatus.SUCCESS


def cmd_generate(args: argparse.Namespace) -> ExitStatus:
    """Write the bundled example network or a seeded random instance"""
    if args.fixture:
        instance = courier10_instance()
    else:
        if args.spec:
            spec = parse_generator_spec(_read(args.spec))
        else:
            spec = GeneratorSpec(**_drop_unset({"seed": args.seed, "demand_count": args.demands}))
        instance = generate(spec)
    _emit(args.out, serialize_instance(instance))
    if args.out:
        print(f"nodes: {len(instance.nodes)}, arcs: {len(instance.arcs)}, demands: {len(instance.demands)}")
    return ExitStatus.SUCCESS


def cmd_export(args: argparse.Namespace) -> ExitStatus:
    """Write the network, and optionally a solution, as DOT text"""
    instance = parse_instance(_read(args.instance))
    routing = parse_routing(_read(args.solution)) if args.solution else None
    _emit(args.out, export_graph(instance, routing))
    return ExitStatus.SUCCESS
