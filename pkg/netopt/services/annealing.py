"""Simulated annealing over repaired routing tables.

Each restart is an independent Markov chain driven by its own generator spawned from
the configured seed. Restarts may run on worker threads; the reduction only looks at
restart order, so the result does not depend on the thread count.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from netopt.exceptions import InfeasibleError, InstanceValidationError, RepairFailure, RoutingError
from netopt.models import (
    Algorithm,
    AlgorithmTrace,
    EvaluationReport,
    Instance,
    Pair,
    RoutingTable,
    SolveConfig,
    SolveResult,
    TracePoint,
)
from netopt.services.cost_time import evaluate, evaluate_flows
from netopt.services.flow_engine import FlowState, propagate_flows
from netopt.services.routing_repair import DefaultRouter, complete_routing, prune_routing, repair_consistency
from netopt.services.validation import Rule, validate_instance

logger = logging.getLogger(__name__)

INITIAL_TEMP_SHARE = 0.1
MIN_TEMP_SHARE = 1e-4


@dataclass(frozen=True)
class Candidate:
    table: RoutingTable
    flows: FlowState
    report: EvaluationReport
    energy: float

    @property
    def feasible(self) -> bool:
        return self.report.feasible

    @property
    def feasible_key(self) -> Tuple:
        return (self.report.objective, self.table.encode())

    @property
    def energy_key(self) -> Tuple:
        return (self.energy, self.table.encode())


@dataclass
class ChainOutcome:
    best_feasible: Optional[Candidate]
    best_penalized: Candidate
    iterations: int
    trace: List[TracePoint] = field(default_factory=list)

    @property
    def best(self) -> Candidate:
        return self.best_feasible or self.best_penalized


class Annealer:
    """Metropolis search; the energy is the objective plus weighted constraint excess"""

    def __init__(self, instance: Instance, config: SolveConfig):
        self.instance = instance
        self.index = instance.index
        self.config = config
        self.router = DefaultRouter(instance)

    def initial_table(self) -> RoutingTable:
        """Direct where possible, fastest-path hops otherwise, then repaired and pruned"""
        hops = {}
        if not complete_routing(hops, [demand.pair for demand in self.instance.demands], self.router):
            raise InfeasibleError("some demand cannot reach its destination over the service arcs")
        return prune_routing(self.instance, repair_consistency(self.instance, RoutingTable(hops)))

    def score(self, table: RoutingTable) -> Optional[Candidate]:
        try:
            flows = propagate_flows(self.instance, table)
        except RoutingError:
            return None
        report = evaluate_flows(self.instance, table, flows, self.config.max_transfers)
        penalty = self.config.penalty
        capacity_excess = sum(-row.capacity_slack for row in report.per_node if (row.capacity_slack or 0.0) < 0)
        lateness = sum(
            -row.deadline_slack_hours for row in report.per_demand if (row.deadline_slack_hours or 0.0) < 0
        )
        over_limit = sum(1 for v in report.violations if v.rule == Rule.TRANSFER_LIMIT.value)
        energy = (
            report.objective
            + penalty.capacity_weight * capacity_excess
            + penalty.deadline_weight * lateness
            + penalty.cycle_weight * over_limit
        )
        return Candidate(table, flows, report, energy)

    def neighbour(self, current: Candidate, rng: np.random.Generator) -> Optional[RoutingTable]:
        """Reassign one loaded pair to another admissible next hop, then restore consistency"""
        movable: List[Pair] = [
            pair for pair, amount in current.flows.flow.items()
            if amount > 0 and len(self.index.options(*pair)) > 1
        ]
        if not movable:
            return None
        i, j = movable[int(rng.integers(len(movable)))]
        choices = [k for k in self.index.options(i, j) if k != current.table[(i, j)]]
        k = choices[int(rng.integers(len(choices)))]

        hops = dict(current.table)
        hops[(i, j)] = k
        pending = []
        if k != j:
            hops[(i, k)] = k
            pending.append((k, j))
        if not complete_routing(hops, pending, self.router):
            return None
        try:
            table = repair_consistency(self.instance, RoutingTable(hops))
        except RepairFailure:
            return None
        return prune_routing(self.instance, table)

    def run(self, rng: np.random.Generator) -> ChainOutcome:
        settings = self.config.anneal
        current = self.score(self.initial_table())
        if current is None:
            raise InfeasibleError("initial routing table cannot be propagated")
        best_feasible = current if current.feasible else None
        best_penalized = current

        temperature = settings.initial_temp or INITIAL_TEMP_SHARE * current.energy
        if temperature <= 0:
            temperature = 1.0
        min_temp = settings.min_temp or MIN_TEMP_SHARE * temperature
        cap = settings.max_iterations

        iterations = 0
        trace: List[TracePoint] = []
        while temperature > min_temp and (cap is None or iterations < cap):
            for _ in range(settings.iters_per_temp):
                if cap is not None and iterations >= cap:
                    break
                iterations += 1
                table = self.neighbour(current, rng)
                if table is None:
                    continue
                candidate = self.score(table)
                if candidate is None:
                    continue
                delta = candidate.energy - current.energy
                if delta <= 0 or rng.random() < math.exp(-delta / temperature):
                    current = candidate
                    if candidate.energy_key < best_penalized.energy_key:
                        best_penalized = candidate
                    if candidate.feasible and (
                        best_feasible is None or candidate.feasible_key < best_feasible.feasible_key
                    ):
                        best_feasible = candidate
            best = best_feasible or best_penalized
            trace.append(TracePoint(iteration=iterations, objective=best.report.objective))
            temperature *= settings.cooling
        return ChainOutcome(best_feasible, best_penalized, iterations, trace)


def _pick(outcomes: List[ChainOutcome]) -> ChainOutcome:
    feasible = [outcome for outcome in outcomes if outcome.best_feasible is not None]
    if feasible:
        return min(feasible, key=lambda outcome: outcome.best_feasible.feasible_key)
    return min(outcomes, key=lambda outcome: outcome.best_penalized.energy_key)


def solve_anneal(instance: Instance, config: SolveConfig) -> SolveResult:
    """Best feasible table found over all restarts, or the best penalized one flagged infeasible"""
    violations = validate_instance(instance)
    if violations:
        raise InstanceValidationError(violations)

    started = time.perf_counter()
    annealer = Annealer(instance, config)
    restarts = config.anneal.restarts
    generators = [np.random.default_rng(seed) for seed in np.random.SeedSequence(config.seed).spawn(restarts)]
    with ThreadPoolExecutor(max_workers=max(1, min(config.threads, restarts))) as executor:
        outcomes = list(executor.map(annealer.run, generators))

    chosen = _pick(outcomes)
    elapsed = time.perf_counter() - started
    iterations = sum(outcome.iterations for outcome in outcomes)
    logger.info(
        "Annealing ran %s iterations over %s restart(s) in %.3f s; feasible: %s",
        iterations, restarts, elapsed, chosen.best_feasible is not None,
    )

    report = evaluate(instance, chosen.best.table, config.max_transfers)
    return SolveResult(
        algorithm=Algorithm.ANNEAL,
        routing=chosen.best.table,
        report=report,
        trace=AlgorithmTrace(iterations=iterations, best_objective_by_iteration=chosen.trace, wall_time=elapsed),
        proven_optimal=False,
    )
