"""Structural validation of instances and routing tables.

Violations are returned as data, never raised. Lists are sorted by entity so that
re-running a check on unchanged input yields the identical list.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Set, Tuple

from netopt.models import Instance, Pair, RoutingTable, ViolationRecord
from netopt.services.flow_engine import find_cycles, routing_domain

logger = logging.getLogger(__name__)

ACCUM_WARNING_HOURS = 12.0
ACCUM_LIMIT_HOURS = 24.0


class Rule(str, Enum):
    UNKNOWN_NODE = "unknown-node"
    DUPLICATE_NODE = "duplicate-node-id"
    DENSE_NODE_IDS = "dense-node-ids"
    FINITE_VALUE = "finite-value"
    NON_NEGATIVE = "non-negative"
    ACCUM_RANGE = "accumulation-range"
    SELF_LOOP = "self-loop"
    DUPLICATE_ARC = "duplicate-arc"
    POSITIVE_TRAVEL_TIME = "positive-travel-time"
    POSITIVE_CARRIER_SIZE = "positive-carrier-size"
    POSITIVE_VOLUME = "positive-volume"
    POSITIVE_DEADLINE = "positive-deadline"
    DEMAND_SELF_LOOP = "demand-self-loop"
    DUPLICATE_DEMAND = "duplicate-demand"
    DUPLICATE_CANDIDATES = "duplicate-candidates"
    CANDIDATE_ENDPOINT = "candidate-excludes-endpoints"
    SELF_PAIR = "self-pair"
    ARC_EXISTS = "arc-exists"
    CANDIDATE_TRANSFER = "candidate-transfer"
    ROUTING_CONSISTENCY = "routing-consistency"
    ACYCLIC = "acyclic"
    DECISION_COVERAGE = "decision-coverage"
    DECISION_DOMAIN = "decision-domain"
    TRANSFER_CAPACITY = "transfer-capacity"
    DELIVERY_DEADLINE = "delivery-deadline"
    TRANSFER_LIMIT = "transfer-limit"


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: Rule
    message: str
    sort_key: Tuple = field(default=(), compare=False, repr=False)

    def __str__(self) -> str:
        return f"{self.entity}: {self.rule.value}: {self.message}"

    def to_record(self) -> ViolationRecord:
        return ViolationRecord(entity=self.entity, rule=self.rule.value, message=self.message)


def node_violation(node: int, rule: Rule, message: str) -> Violation:
    return Violation(f"node {node}", rule, message, (0, node))


def arc_violation(pair: Pair, rule: Rule, message: str) -> Violation:
    return Violation(f"arc ({pair[0]},{pair[1]})", rule, message, (1,) + tuple(pair))


def demand_violation(pair: Pair, rule: Rule, message: str) -> Violation:
    return Violation(f"demand ({pair[0]},{pair[1]})", rule, message, (2,) + tuple(pair))


def _candidate_violation(pair: Pair, rule: Rule, message: str) -> Violation:
    return Violation(f"candidates ({pair[0]},{pair[1]})", rule, message, (3,) + tuple(pair))


def _pair_violation(pair: Pair, rule: Rule, message: str) -> Violation:
    return Violation(f"pair ({pair[0]},{pair[1]})", rule, message, (4,) + tuple(pair))


def _destination_violation(dest: int, rule: Rule, message: str, extra: Tuple = ()) -> Violation:
    return Violation(f"destination {dest}", rule, message, (5, dest) + extra)


def sort_violations(violations: List[Violation]) -> List[Violation]:
    unique = {(v.sort_key, v.rule.value, v.message): v for v in violations}
    return [unique[key] for key in sorted(unique)]


def _finite(value: Optional[float]) -> bool:
    return value is None or math.isfinite(value)


def _check_nodes(instance: Instance) -> List[Violation]:
    violations: List[Violation] = []
    seen: Set[int] = set()
    for node in instance.nodes:
        if node.id in seen:
            violations.append(node_violation(node.id, Rule.DUPLICATE_NODE, "node id appears twice"))
        seen.add(node.id)
        if not 0 <= node.id < len(instance.nodes):
            violations.append(
                node_violation(node.id, Rule.DENSE_NODE_IDS, f"ids must be dense in 0..{len(instance.nodes) - 1}")
            )
        values = {
            "accum_param": node.accum_param,
            "op_time": node.op_time,
            "op_cost": node.op_cost,
            "transfer_capacity": node.transfer_capacity,
        }
        for name, value in values.items():
            if value is None:
                continue
            if not math.isfinite(value):
                violations.append(node_violation(node.id, Rule.FINITE_VALUE, f"{name} must be finite"))
            elif value < 0:
                violations.append(node_violation(node.id, Rule.NON_NEGATIVE, f"{name} is negative"))
        if math.isfinite(node.accum_param):
            if node.accum_param > ACCUM_LIMIT_HOURS:
                violations.append(
                    node_violation(node.id, Rule.ACCUM_RANGE, f"accum_param {node.accum_param} exceeds 24 hours")
                )
            elif node.accum_param > ACCUM_WARNING_HOURS:
                logger.warning("Node %s accumulation parameter %.2f is above 12 hours", node.id, node.accum_param)
    return violations


def _check_arcs(instance: Instance, known: Set[int]) -> List[Violation]:
    violations: List[Violation] = []
    seen: Set[Pair] = set()
    for arc in instance.arcs:
        pair = arc.pair
        for endpoint in pair:
            if endpoint not in known:
                violations.append(arc_violation(pair, Rule.UNKNOWN_NODE, f"node {endpoint} does not exist"))
        if arc.source == arc.target:
            violations.append(arc_violation(pair, Rule.SELF_LOOP, "arc starts and ends at the same node"))
        if pair in seen:
            violations.append(arc_violation(pair, Rule.DUPLICATE_ARC, "more than one arc for this ordered pair"))
        seen.add(pair)
        if not (math.isfinite(arc.travel_time) and arc.travel_time > 0):
            violations.append(arc_violation(pair, Rule.POSITIVE_TRAVEL_TIME, "travel_time must be positive"))
        if not math.isfinite(arc.unit_trip_cost):
            violations.append(arc_violation(pair, Rule.FINITE_VALUE, "unit_trip_cost must be finite"))
        elif arc.unit_trip_cost < 0:
            violations.append(arc_violation(pair, Rule.NON_NEGATIVE, "unit_trip_cost is negative"))
        if not (math.isfinite(arc.carrier_size) and arc.carrier_size > 0):
            violations.append(arc_violation(pair, Rule.POSITIVE_CARRIER_SIZE, "carrier_size must be positive"))
    return violations


def _check_demands(instance: Instance, known: Set[int]) -> List[Violation]:
    violations: List[Violation] = []
    seen: Set[Pair] = set()
    for demand in instance.demands:
        pair = demand.pair
        for endpoint in pair:
            if endpoint not in known:
                violations.append(demand_violation(pair, Rule.UNKNOWN_NODE, f"node {endpoint} does not exist"))
        if demand.origin == demand.dest:
            violations.append(demand_violation(pair, Rule.DEMAND_SELF_LOOP, "origin equals destination"))
        if pair in seen:
            violations.append(demand_violation(pair, Rule.DUPLICATE_DEMAND, "more than one demand for this pair"))
        seen.add(pair)
        if not (math.isfinite(demand.volume) and demand.volume > 0):
            violations.append(demand_violation(pair, Rule.POSITIVE_VOLUME, "volume must be positive"))
        if demand.deadline is not None and not demand.deadline > 0:
            violations.append(demand_violation(pair, Rule.POSITIVE_DEADLINE, "deadline must be positive"))
    return violations


def _check_candidates(instance: Instance, known: Set[int]) -> List[Violation]:
    violations: List[Violation] = []
    seen: Set[Pair] = set()
    for entry in instance.candidate_transfers or []:
        pair = (entry.origin, entry.dest)
        if pair in seen:
            violations.append(_candidate_violation(pair, Rule.DUPLICATE_CANDIDATES, "pair listed twice"))
        seen.add(pair)
        for node in sorted(set(pair) | set(entry.nodes)):
            if node not in known:
                violations.append(_candidate_violation(pair, Rule.UNKNOWN_NODE, f"node {node} does not exist"))
        if entry.origin in entry.nodes or entry.dest in entry.nodes:
            violations.append(
                _candidate_violation(pair, Rule.CANDIDATE_ENDPOINT, "transfer candidates cannot contain i or j")
            )
    return violations


def validate_instance(instance: Instance) -> List[Violation]:
    """Check every instance invariant; an empty list means the instance is valid"""
    known = {node.id for node in instance.nodes}
    violations = _check_nodes(instance)
    violations += _check_arcs(instance, known)
    violations += _check_demands(instance, known)
    violations += _check_candidates(instance, known)
    if not (math.isfinite(instance.time_value) and instance.time_value >= 0):
        violations.append(
            Violation("instance", Rule.NON_NEGATIVE, "time_value must be finite and non-negative", (-1,))
        )
    return sort_violations(violations)


def validate_solution(instance: Instance, routing: RoutingTable) -> List[Violation]:
    """Check a routing table against the instance.

    Covers arc existence, candidate membership, routing consistency (a transfer at k for
    (i, j) requires next_hop(i, k) = k), per-destination acyclicity and the decision
    domain: exactly the pairs that carry flow plus the direct services they require.
    """
    index = instance.index
    violations: List[Violation] = []
    for (i, j), k in routing.items():
        pair = (i, j)
        unknown = [node for node in (i, j, k) if node not in index.nodes]
        if unknown:
            violations.append(_pair_violation(pair, Rule.UNKNOWN_NODE, f"node {unknown[0]} does not exist"))
            continue
        if i == j:
            violations.append(_pair_violation(pair, Rule.SELF_PAIR, "origin equals destination"))
            continue
        if (i, k) not in index.arcs:
            violations.append(_pair_violation(pair, Rule.ARC_EXISTS, f"no service arc ({i},{k})"))
        if k == j:
            continue
        if k not in index.candidates(i, j):
            violations.append(
                _pair_violation(pair, Rule.CANDIDATE_TRANSFER, f"node {k} is not a transfer candidate")
            )
        direct = routing.next_hop(i, k)
        if direct != k:
            violations.append(
                _pair_violation(
                    pair,
                    Rule.ROUTING_CONSISTENCY,
                    f"transfer at {k} requires direct service ({i},{k}) but next_hop({i},{k}) is {direct}",
                )
            )

    for dest, hops in sorted(routing.by_destination().items()):
        transfers = {i: k for i, k in hops.items() if k != dest}
        for cycle in find_cycles(transfers):
            path = " -> ".join(str(node) for node in cycle + cycle[:1])
            violations.append(_destination_violation(dest, Rule.ACYCLIC, f"cycle {path}", cycle))

    reached, supports, dangling = routing_domain(instance, routing)
    for pair in sorted(dangling):
        violations.append(_pair_violation(pair, Rule.DECISION_COVERAGE, "flow arrives without a routing decision"))
    required = reached | supports
    for pair in routing:
        if pair not in required:
            violations.append(_pair_violation(pair, Rule.DECISION_DOMAIN, "decision on a pair that carries no flow"))
    return sort_violations(violations)
