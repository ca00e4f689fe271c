"""Exhaustive search over consistent routing tables.

Pairs are decided depth first from the demand pairs outward. Choosing a transfer at k
for (i, j) fixes the direct service (i, k) in the same step, so any branch whose
direct decisions conflict is cut before its dependent pairs are expanded.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from netopt.exceptions import InfeasibleError, InstanceValidationError, SearchSpaceTooLarge
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
from netopt.services.flow_engine import propagate_flows
from netopt.services.validation import validate_instance

logger = logging.getLogger(__name__)

Branch = Tuple[Dict[Pair, int], Tuple[Pair, ...]]


def candidate_graph(instance: Instance, dest: int) -> nx.DiGraph:
    """Arcs usable toward dest: u -> v whenever v is an admissible next hop of (u, dest)"""
    index = instance.index
    graph = nx.DiGraph()
    graph.add_nodes_from(index.node_ids)
    for node in index.node_ids:
        if node != dest:
            graph.add_edges_from((node, hop) for hop in index.options(node, dest))
    return graph


def estimate_search_space(instance: Instance) -> int:
    """Product of the choice counts of every pair a demand could reach"""
    origins: Dict[int, List[int]] = {}
    for demand in instance.demands:
        origins.setdefault(demand.dest, []).append(demand.origin)

    estimate = 1
    for dest, sources in sorted(origins.items()):
        graph = candidate_graph(instance, dest)
        reachable = set(sources)
        for source in sources:
            reachable |= nx.descendants(graph, source)
        reachable.discard(dest)
        for node in sorted(reachable):
            estimate *= max(1, len(instance.index.options(node, dest)))
    return estimate


@dataclass
class SubtreeSearch:
    """Depth-first enumeration of one branch of the search tree"""
    instance: Instance
    max_transfers: int
    leaves: int = 0
    best_key: Optional[Tuple] = None
    best_table: Optional[RoutingTable] = None
    improvements: List[Tuple[int, float]] = field(default_factory=list)

    def run(self, branch: Branch) -> "SubtreeSearch":
        hops, pending = branch
        self._search(dict(hops), pending)
        return self

    def _search(self, hops: Dict[Pair, int], pending: Tuple[Pair, ...]) -> None:
        while pending and pending[0] in hops:
            pending = pending[1:]
        if not pending:
            self._leaf(hops)
            return
        (i, j), rest = pending[0], pending[1:]
        for k in self.instance.index.options(i, j):
            added = assign(hops, i, j, k)
            if added is None:
                continue
            self._search(hops, rest if k == j else rest + ((k, j),))
            for pair in added:
                del hops[pair]

    def _leaf(self, hops: Dict[Pair, int]) -> None:
        self.leaves += 1
        table = RoutingTable(hops)
        report = evaluate_flows(self.instance, table, propagate_flows(self.instance, table), self.max_transfers)
        if not report.feasible:
            return
        key = (report.objective, table.encode())
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.best_table = table
            self.improvements.append((self.leaves, report.objective))


def _reaches(hops: Dict[Pair, int], start: int, dest: int, target: int) -> bool:
    node: Optional[int] = start
    while node is not None and node != dest:
        if node == target:
            return True
        node = hops.get((node, dest))
    return False


def assign(hops: Dict[Pair, int], i: int, j: int, k: int) -> Optional[List[Pair]]:
    """Decide next_hop(i, j) = k in place, with the direct service a transfer needs.

    Returns the pairs added, or None when the choice conflicts with an earlier direct
    decision or would close a cycle toward j.
    """
    if k == j:
        hops[(i, j)] = j
        return [(i, j)]
    direct = hops.get((i, k))
    if direct is not None and direct != k:
        return None
    if _reaches(hops, k, j, i):
        return None
    hops[(i, j)] = k
    added = [(i, j)]
    if direct is None:
        hops[(i, k)] = k
        added.append((i, k))
    return added


def _root_branches(instance: Instance) -> List[Branch]:
    pending = tuple(sorted(demand.pair for demand in instance.demands))
    if not pending:
        return [({}, ())]
    (i, j), rest = pending[0], pending[1:]
    branches: List[Branch] = []
    for k in instance.index.options(i, j):
        hops: Dict[Pair, int] = {}
        assign(hops, i, j, k)
        branches.append((hops, rest if k == j else rest + ((k, j),)))
    return branches


def solve_exact(instance: Instance, config: SolveConfig) -> SolveResult:
    """Minimum-objective feasible routing table, ties broken by the lexicographic table encoding"""
    violations = validate_instance(instance)
    if violations:
        raise InstanceValidationError(violations)

    estimate = estimate_search_space(instance)
    if estimate > config.search_cap:
        raise SearchSpaceTooLarge(estimate, config.search_cap)
    logger.info("Exact search over at most %s tables", estimate)

    started = time.perf_counter()
    branches = _root_branches(instance)
    workers = max(1, min(config.threads, len(branches)))

    def search(branch: Branch) -> SubtreeSearch:
        return SubtreeSearch(instance, config.max_transfers).run(branch)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        subtrees = list(executor.map(search, branches))

    # Reduce in branch order so serial and threaded runs agree.
    best_key: Optional[Tuple] = None
    best_table: Optional[RoutingTable] = None
    leaves = 0
    points: List[TracePoint] = []
    for subtree in subtrees:
        for leaf, objective in subtree.improvements:
            if not points or objective < points[-1].objective:
                points.append(TracePoint(iteration=leaves + leaf, objective=objective))
        if subtree.best_key is not None and (best_key is None or subtree.best_key < best_key):
            best_key = subtree.best_key
            best_table = subtree.best_table
        leaves += subtree.leaves

    elapsed = time.perf_counter() - started
    logger.info("Exact search evaluated %s tables in %.3f s", leaves, elapsed)
    if best_table is None:
        raise InfeasibleError("no routing table satisfies the capacity, deadline and transfer limits")

    report: EvaluationReport = evaluate(instance, best_table, config.max_transfers)
    return SolveResult(
        algorithm=Algorithm.EXACT,
        routing=best_table,
        report=report,
        trace=AlgorithmTrace(iterations=leaves, best_objective_by_iteration=points, wall_time=elapsed),
        proven_optimal=True,
    )
