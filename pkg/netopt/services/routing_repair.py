import logging
from collections import deque
from typing import Dict, Iterable, Optional

import networkx as nx

from netopt.exceptions import RepairFailure
from netopt.models import Instance, NetworkIndex, Pair, RoutingTable
from netopt.services.flow_engine import routing_domain

logger = logging.getLogger(__name__)


class DefaultRouter:
    """Fallback next hops: direct where the arc exists, otherwise the next node on the
    fastest (travel time) path toward the destination over candidate-respecting arcs.

    Tree hops strictly decrease the remaining travel time, so following default hops
    always reaches the destination.
    """

    def __init__(self, instance: Instance):
        self.index = instance.index
        self._trees: Dict[int, Dict[int, int]] = {}

    def tree(self, dest: int) -> Dict[int, int]:
        cached = self._trees.get(dest)
        if cached is not None:
            return cached
        # Reversed arcs, so a single-source search from dest reaches every origin.
        graph = nx.DiGraph()
        for (source, target), arc in self.index.arcs.items():
            if source != dest and (target == dest or target in self.index.candidates(source, dest)):
                graph.add_edge(target, source, weight=arc.travel_time)
        tree: Dict[int, int] = {}
        if dest in graph:
            for node, path in nx.single_source_dijkstra_path(graph, dest, weight="weight").items():
                if node != dest:
                    tree[node] = path[-2]
        self._trees[dest] = tree
        return tree

    def hop(self, node: int, dest: int) -> Optional[int]:
        if (node, dest) in self.index.arcs:
            return dest
        return self.tree(dest).get(node)


def complete_routing(hops: Dict[Pair, int], pending: Iterable[Pair], router: DefaultRouter) -> bool:
    """Give every pair reached from pending a decision, in place.

    Transfers pull in their direct service. Returns False when some node cannot reach
    its destination at all.
    """
    queue = deque(pending)
    while queue:
        node, dest = queue.popleft()
        if node == dest or (node, dest) in hops:
            continue
        hop = router.hop(node, dest)
        if hop is None:
            return False
        hops[(node, dest)] = hop
        if hop != dest:
            hops[(node, hop)] = hop
            queue.append((hop, dest))
    return True


def _reroute(index: NetworkIndex, hops: Dict[Pair, int], i: int, j: int) -> Optional[int]:
    if (i, j) in index.arcs:
        return j
    options = [k for k in index.options(i, j) if k != j]
    for k in options:
        if hops.get((i, k)) in (None, k):
            return k
    return options[0] if options else None


def repair_consistency(instance: Instance, routing: RoutingTable) -> RoutingTable:
    """Enforce: a transfer at k for (i, j) needs direct service (i, k).

    If arc (i, k) exists, next_hop(i, k) is forced to k. Otherwise (i, j) is rerouted
    direct, or to the first candidate with an arc. Fixes only ever add direct
    assignments, so the cascade terminates.
    """
    index = instance.index
    hops = dict(routing)
    changed = True
    while changed:
        changed = False
        for i, j in sorted(hops):
            k = hops[(i, j)]
            if k == j:
                continue
            if (i, k) not in index.arcs:
                replacement = _reroute(index, hops, i, j)
                if replacement is None:
                    raise RepairFailure(i, j)
                logger.debug("Rerouting (%s,%s) from %s to %s", i, j, k, replacement)
                hops[(i, j)] = replacement
                k = replacement
                changed = True
                if k == j:
                    continue
            if hops.get((i, k)) != k:
                hops[(i, k)] = k
                changed = True
    return RoutingTable(hops)


def prune_routing(instance: Instance, routing: RoutingTable) -> RoutingTable:
    """Drop decisions on pairs that neither carry flow nor provide a required direct service"""
    reached, supports, _ = routing_domain(instance, routing)
    required = reached | supports
    return RoutingTable({pair: hop for pair, hop in routing.items() if pair in required})
