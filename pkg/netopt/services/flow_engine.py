"""Solution-dependent flow quantities.

A routing table fixes, for every destination j, a functional graph i -> next_hop(i, j).
Flows are pushed along that graph from the demand origins toward j in topological
order; service flows, carrier frequencies and sorting loads follow from the flows.
"""
import heapq
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Set, Tuple

import networkx as nx

from netopt.exceptions import CycleError, DanglingRouteError, UnservedArcError
from netopt.models import Demand, Instance, Pair, RoutingTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowState:
    """Daily flows f, service flows F, carrier frequencies φ and sorting loads R"""
    flow: Dict[Pair, float]
    service_flow: Dict[Pair, float]
    frequency: Dict[Pair, float]
    sort_load: Dict[int, float]

    def flow_of(self, i: int, j: int) -> float:
        return self.flow.get((i, j), 0.0)


@dataclass(frozen=True)
class TransferChain:
    """Node sequence a demand follows from its origin to its destination"""
    demand: Pair
    nodes: Tuple[int, ...]

    @property
    def arcs(self) -> Tuple[Pair, ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    @property
    def transfers(self) -> Tuple[int, ...]:
        return self.nodes[1:-1]

    @property
    def is_direct(self) -> bool:
        return len(self.nodes) == 2


def find_cycles(hops: Mapping[int, int]) -> List[Tuple[int, ...]]:
    """Cycles of a functional graph (out-degree <= 1), each rotated to start at its smallest node"""
    done: Set[int] = set()
    cycles: List[Tuple[int, ...]] = []
    for start in sorted(hops):
        if start in done:
            continue
        path: List[int] = []
        position: Dict[int, int] = {}
        node = start
        while node in hops and node not in done and node not in position:
            position[node] = len(path)
            path.append(node)
            node = hops[node]
        if node in position:
            cycle = path[position[node]:]
            pivot = cycle.index(min(cycle))
            cycles.append(tuple(cycle[pivot:] + cycle[:pivot]))
        done.update(path)
    return cycles


def _propagate_destination(
    destination: int, hops: Mapping[int, int], origins: Mapping[int, float]
) -> Dict[Pair, float]:
    nodes = set(hops) | set(origins)
    nodes.update(k for k in hops.values() if k != destination)
    indegree = dict.fromkeys(nodes, 0)
    for k in hops.values():
        if k != destination:
            indegree[k] += 1
    inflow = {node: origins.get(node, 0.0) for node in nodes}

    heap = [node for node in nodes if indegree[node] == 0]
    heapq.heapify(heap)
    processed = 0
    flows: Dict[Pair, float] = {}
    while heap:
        node = heapq.heappop(heap)
        processed += 1
        amount = inflow[node]
        hop = hops.get(node)
        if hop is None:
            if amount > 0:
                raise DanglingRouteError(node, destination)
            continue
        flows[(node, destination)] = amount
        if hop != destination:
            inflow[hop] += amount
            indegree[hop] -= 1
            if indegree[hop] == 0:
                heapq.heappush(heap, hop)

    if processed < len(nodes):
        transfers = {i: k for i, k in hops.items() if k != destination}
        raise CycleError(destination, find_cycles(transfers)[0])
    return flows


def propagate_flows(instance: Instance, routing: RoutingTable) -> FlowState:
    """Compute f, F, φ and R for a routing table.

    f_ij = N_ij + sum of f_sj over the nodes s whose next hop toward j is i. The direct
    term of a service flow only counts when i ships its j-bound flow directly.
    """
    index = instance.index
    grouped = routing.by_destination()
    demand_by_dest: Dict[int, Dict[int, float]] = {}
    for demand in instance.demands:
        demand_by_dest.setdefault(demand.dest, {})[demand.origin] = demand.volume

    flow: Dict[Pair, float] = {}
    for destination in sorted(set(grouped) | set(demand_by_dest)):
        flow.update(
            _propagate_destination(
                destination, grouped.get(destination, {}), demand_by_dest.get(destination, {})
            )
        )

    sort_load = dict.fromkeys(index.node_ids, 0.0)
    service_flow: Dict[Pair, float] = {}
    for (i, j), amount in sorted(flow.items()):
        if amount <= 0:
            continue
        hop = routing[(i, j)]
        service_flow[(i, hop)] = service_flow.get((i, hop), 0.0) + amount
        if hop != j:
            sort_load[hop] = sort_load.get(hop, 0.0) + amount

    frequency: Dict[Pair, float] = {}
    for arc, amount in sorted(service_flow.items()):
        service = index.arcs.get(arc)
        if service is None:
            raise UnservedArcError(*arc)
        frequency[arc] = amount / service.carrier_size

    return FlowState(
        flow=dict(sorted(flow.items())),
        service_flow=dict(sorted(service_flow.items())),
        frequency=frequency,
        sort_load=sort_load,
    )


def extract_chain(instance: Instance, routing: RoutingTable, demand: Demand) -> TransferChain:
    """Unroll the next-hop recursion from the demand origin to its destination"""
    origin, dest = demand.pair
    nodes = [origin]
    seen = {origin}
    node = origin
    while node != dest:
        hop = routing.next_hop(node, dest)
        if hop is None:
            raise DanglingRouteError(node, dest)
        if hop in seen:
            raise CycleError(dest, nodes[nodes.index(hop):])
        nodes.append(hop)
        seen.add(hop)
        node = hop
    return TransferChain(demand.pair, tuple(nodes))


def enumerate_chains(instance: Instance, demand: Demand, max_transfers: int = 4) -> List[TransferChain]:
    """All simple arc paths origin -> dest with at most max_transfers intermediate nodes from P(origin, dest)"""
    if max_transfers < 0:
        raise ValueError("max_transfers must be non-negative")
    index = instance.index
    origin, dest = demand.pair
    allowed = (index.candidates(origin, dest) | {origin, dest}) & set(index.node_ids)
    if origin not in allowed or dest not in allowed:
        return []

    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(allowed))
    graph.add_edges_from(
        (source, target)
        for source, target in index.arcs
        if source in allowed and target in allowed
    )
    paths = nx.all_simple_paths(graph, origin, dest, cutoff=max_transfers + 1)
    return [TransferChain(demand.pair, path) for path in sorted(tuple(p) for p in paths)]


def routing_domain(instance: Instance, routing: RoutingTable) -> Tuple[Set[Pair], Set[Pair], Set[Pair]]:
    """Walk every demand along the table.

    Returns the pairs that carry flow, the direct-service pairs required by transfers
    at those pairs, and the pairs where flow arrives without a decision.
    """
    grouped = routing.by_destination()
    reached: Set[Pair] = set()
    supports: Set[Pair] = set()
    dangling: Set[Pair] = set()
    for demand in instance.demands:
        dest = demand.dest
        hops = grouped.get(dest, {})
        node = demand.origin
        while node != dest and (node, dest) not in reached:
            hop = hops.get(node)
            if hop is None:
                dangling.add((node, dest))
                break
            reached.add((node, dest))
            if hop != dest:
                supports.add((node, hop))
            node = hop
    return reached, supports, dangling
