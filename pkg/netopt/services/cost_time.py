"""Objective, capacity and delivery-time evaluation of a propagated routing table.

Units: volumes in standard courier units per day, times in hours, costs in an
abstract currency per day. The time value λ converts unit-hours into currency.
"""
import logging
import math
from typing import List, Optional

from netopt.exceptions import CycleError, InvalidRoutingError, UnservedArcError
from netopt.models import (
    ArcReport,
    DemandReport,
    EvaluationReport,
    Instance,
    NodeReport,
    RoutingTable,
)
from netopt.services.flow_engine import FlowState, TransferChain, extract_chain, find_cycles, propagate_flows
from netopt.services.validation import (
    Rule,
    Violation,
    demand_violation,
    node_violation,
    sort_violations,
    validate_solution,
)

logger = logging.getLogger(__name__)

HOURS_PER_DAY = 24.0
FEASIBILITY_TOLERANCE = 1e-9


def headway(frequency: float) -> float:
    """Hours between consecutive carrier departures"""
    return HOURS_PER_DAY / frequency


def balanced_delay(headway_hours: float) -> float:
    """Average wait when units arrive evenly between departures"""
    return headway_hours / 2.0


def freq_delay(instance: Instance, flows: FlowState, k: int, v: int) -> float:
    """Average per-unit wait at k for the next carrier toward v.

    Equals C_k * V_kv / F_kv, so that F_kv times the delay is C_k * V_kv. With C_k = 12 it is
    half the headway.
    """
    arc = instance.index.arcs.get((k, v))
    service = flows.service_flow.get((k, v), 0.0)
    if arc is None or service <= 0:
        raise UnservedArcError(k, v)
    return instance.index.nodes[k].accum_param * arc.carrier_size / service


def delivery_time(instance: Instance, flows: FlowState, chain: TransferChain) -> float:
    """Travel time of every hop plus operation time and frequency delay at each intermediate node.

    Waiting at the origin before the first dispatch is not part of the delivery time.
    """
    index = instance.index
    total = 0.0
    for source, target in chain.arcs:
        arc = index.arcs.get((source, target))
        if arc is None:
            raise UnservedArcError(source, target)
        total += arc.travel_time
    for node, following in chain.arcs[1:]:
        total += index.nodes[node].op_time + freq_delay(instance, flows, node, following)
    return total


def constraint_violations(
    instance: Instance, report: EvaluationReport, max_transfers: Optional[int] = None
) -> List[Violation]:
    """Transfer-capacity and delivery-deadline violations found in a report.

    With max_transfers set, chains with more intermediate nodes are flagged as well.
    """
    violations: List[Violation] = []
    for row in report.per_node:
        if row.capacity_slack is not None and row.capacity_slack < -FEASIBILITY_TOLERANCE:
            violations.append(
                node_violation(
                    row.node,
                    Rule.TRANSFER_CAPACITY,
                    f"sorting load {row.sort_load:.6g} exceeds capacity by {-row.capacity_slack:.6g}",
                )
            )
    for row in report.per_demand:
        if row.deadline_slack_hours is not None and row.deadline_slack_hours < -FEASIBILITY_TOLERANCE:
            violations.append(
                demand_violation(
                    (row.origin, row.dest),
                    Rule.DELIVERY_DEADLINE,
                    f"delivery takes {row.delivery_time_hours:.6g} h, {-row.deadline_slack_hours:.6g} h late",
                )
            )
        if max_transfers is not None and len(row.chain) - 2 > max_transfers:
            violations.append(
                demand_violation(
                    (row.origin, row.dest),
                    Rule.TRANSFER_LIMIT,
                    f"chain has {len(row.chain) - 2} transfers, limit is {max_transfers}",
                )
            )
    return sort_violations(violations)


def evaluate_flows(
    instance: Instance, routing: RoutingTable, flows: FlowState, max_transfers: Optional[int] = None
) -> EvaluationReport:
    """Build the report from already propagated flows, without structural checks"""
    index = instance.index
    time_value = instance.time_value

    per_arc: List[ArcReport] = []
    accumulation_cost = 0.0
    transport_cost = 0.0
    for (source, target), service in flows.service_flow.items():
        arc = index.arcs[(source, target)]
        accum = index.nodes[source].accum_param
        frequency = flows.frequency[(source, target)]
        accumulation = time_value * accum * arc.carrier_size
        transport = frequency * arc.unit_trip_cost
        accumulation_cost += accumulation
        transport_cost += transport
        per_arc.append(
            ArcReport(
                source=source,
                target=target,
                service_flow=service,
                frequency=frequency,
                rounded_frequency=math.ceil(frequency),
                headway_hours=headway(frequency),
                freq_delay_hours=accum * arc.carrier_size / service,
                arc_cost=accumulation + transport,
            )
        )

    per_node: List[NodeReport] = []
    transfer_time_cost = 0.0
    transfer_op_cost = 0.0
    for node_id in index.node_ids:
        node = index.nodes[node_id]
        load = flows.sort_load.get(node_id, 0.0)
        transfer_time_cost += load * time_value * node.op_time
        transfer_op_cost += load * node.op_cost
        slack = None if node.transfer_capacity is None else node.transfer_capacity - load
        per_node.append(NodeReport(node=node_id, sort_load=load, capacity_slack=slack))

    per_demand: List[DemandReport] = []
    for demand in instance.demands:
        chain = extract_chain(instance, routing, demand)
        hours = delivery_time(instance, flows, chain)
        slack = None if demand.deadline is None else demand.deadline - hours
        per_demand.append(
            DemandReport(
                origin=demand.origin,
                dest=demand.dest,
                chain=list(chain.nodes),
                delivery_time_hours=hours,
                deadline_slack_hours=slack,
            )
        )

    report = EvaluationReport(
        objective=accumulation_cost + transport_cost + transfer_time_cost + transfer_op_cost,
        accumulation_cost=accumulation_cost,
        transport_cost=transport_cost,
        transfer_time_cost=transfer_time_cost,
        transfer_op_cost=transfer_op_cost,
        per_arc=per_arc,
        per_node=per_node,
        per_demand=per_demand,
        feasible=True,
    )
    violations = constraint_violations(instance, report, max_transfers)
    if not violations:
        return report
    return EvaluationReport(
        **{
            **report.dict(exclude={"violations", "feasible"}),
            "violations": [violation.to_record() for violation in violations],
            "feasible": False,
        }
    )


def evaluate(instance: Instance, routing: RoutingTable, max_transfers: Optional[int] = None) -> EvaluationReport:
    """Check structure, propagate and evaluate.

    Raises CycleError for the first cycle toward any destination, then
    InvalidRoutingError when the table breaks any other structural rule.
    """
    for dest, hops in sorted(routing.by_destination().items()):
        cycles = find_cycles({i: k for i, k in hops.items() if k != dest})
        if cycles:
            raise CycleError(dest, cycles[0])
    structural = validate_solution(instance, routing)
    if structural:
        raise InvalidRoutingError(structural)
    flows = propagate_flows(instance, routing)
    report = evaluate_flows(instance, routing, flows, max_transfers)
    logger.debug("Evaluated routing table: objective %.6f, feasible %s", report.objective, report.feasible)
    return report
