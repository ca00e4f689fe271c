import logging
import math
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from netopt.exceptions import GenerationFailure
from netopt.models import ArcMode, Demand, GeneratorSpec, Instance, Node, NodeKind, Pair, Range, ServiceArc
from netopt.services.validation import validate_instance

logger = logging.getLogger(__name__)

NAME_PREFIX = {
    NodeKind.LOCAL_DISTRIBUTION_CENTER: "L",
    NodeKind.SORTING_CENTER: "H",
    NodeKind.AIRPORT: "A",
    NodeKind.RAIL_STATION: "R",
    NodeKind.TERMINAL_DISTRIBUTION_CENTER: "T",
}
# Transfer facilities get a finite sorting capacity; the end points do not.
CAPACITATED = {NodeKind.SORTING_CENTER, NodeKind.AIRPORT, NodeKind.RAIL_STATION}


class InstanceGenerator:
    """Seeded random instances that always pass validation and route every demand"""

    def __init__(self, spec: GeneratorSpec):
        self.spec = spec
        self.rng = np.random.default_rng(spec.seed)

    def _uniform(self, bounds: Range) -> float:
        low, high = bounds
        return min(max(round(float(self.rng.uniform(low, high)), 2), low), high)

    def _nodes(self) -> List[Node]:
        nodes: List[Node] = []
        for kind in NodeKind:
            for position in range(self.spec.node_counts.get(kind, 0)):
                nodes.append(
                    Node(
                        id=len(nodes),
                        name=f"{NAME_PREFIX[kind]}{position + 1}",
                        kind=kind,
                        accum_param=self._uniform(self.spec.accum_range),
                        transfer_capacity=self._uniform(self.spec.capacity_range) if kind in CAPACITATED else None,
                        op_time=self._uniform(self.spec.op_time_range),
                        op_cost=self._uniform(self.spec.op_cost_range),
                    )
                )
        return nodes

    @staticmethod
    def arc_mode(source: Node, target: Node) -> ArcMode:
        if source.kind == target.kind == NodeKind.AIRPORT:
            return ArcMode.AIR
        if source.kind == target.kind == NodeKind.RAIL_STATION:
            return ArcMode.RAIL
        return ArcMode.ROAD

    def _arcs(self, nodes: List[Node]) -> List[ServiceArc]:
        arcs: List[ServiceArc] = []
        for source in nodes:
            if source.kind == NodeKind.TERMINAL_DISTRIBUTION_CENTER:
                continue
            for target in nodes:
                if source.id == target.id:
                    continue
                mode = self.arc_mode(source, target)
                if self.rng.random() >= self.spec.arc_density.get(mode, 0.0):
                    continue
                arcs.append(
                    ServiceArc(
                        source=source.id,
                        target=target.id,
                        travel_time=self._uniform(self.spec.travel_time_range),
                        unit_trip_cost=self._uniform(self.spec.trip_cost_range),
                        carrier_size=self._uniform(self.spec.carrier_size_range),
                        mode=mode,
                    )
                )
        return arcs

    def demand_pairs(self, nodes: List[Node]) -> List[Pair]:
        """LDC -> terminal pairs, or any pair out of a non-terminal when there are too few"""
        pairs = [
            (source.id, target.id)
            for source in nodes if source.kind == NodeKind.LOCAL_DISTRIBUTION_CENTER
            for target in nodes if target.kind == NodeKind.TERMINAL_DISTRIBUTION_CENTER
        ]
        if len(pairs) >= self.spec.demand_count:
            return pairs
        return [
            (source.id, target.id)
            for source in nodes if source.kind != NodeKind.TERMINAL_DISTRIBUTION_CENTER
            for target in nodes if target.id != source.id
        ]

    def _volumes(self, pairs: List[Pair]) -> List[Tuple[Pair, float]]:
        chosen = self.rng.choice(len(pairs), size=self.spec.demand_count, replace=False)
        return [(pairs[int(position)], self._uniform(self.spec.volume_range)) for position in sorted(chosen)]

    def _routable(self, arcs: List[ServiceArc], pairs: List[Pair]) -> bool:
        graph = nx.DiGraph()
        graph.add_edges_from(arc.pair for arc in arcs)
        for origin, dest in pairs:
            if origin not in graph:
                return False
            hops = nx.single_source_shortest_path_length(graph, origin, cutoff=self.spec.max_transfers + 1)
            if dest not in hops:
                return False
        return True

    def fastest_bound(self, nodes: List[Node], arcs: List[ServiceArc], pair: Pair, volume: float) -> float:
        """Quickest chain within the transfer limit, with frequency delays at the demand's own volume"""
        origin, dest = pair
        by_id: Dict[int, Node] = {node.id: node for node in nodes}
        best: Dict[int, float] = {origin: 0.0}
        reached: Dict[int, float] = dict(best)
        for _ in range(self.spec.max_transfers + 1):
            layer: Dict[int, float] = {}
            for arc in arcs:
                elapsed = reached.get(arc.source)
                if elapsed is None or arc.source == dest:
                    continue
                step = arc.travel_time
                if arc.source != origin:
                    node = by_id[arc.source]
                    step += node.op_time + node.accum_param * arc.carrier_size / volume
                if elapsed + step < layer.get(arc.target, math.inf):
                    layer[arc.target] = elapsed + step
            reached = layer
            for node, elapsed in layer.items():
                best[node] = min(best.get(node, math.inf), elapsed)
        return best[dest]

    def _deadline(self, nodes: List[Node], arcs: List[ServiceArc], pair: Pair, volume: float) -> Optional[float]:
        if self.spec.deadline_tightness is None:
            return None
        return float(math.ceil(self.spec.deadline_tightness * self.fastest_bound(nodes, arcs, pair, volume)))

    def generate(self) -> Instance:
        nodes = self._nodes()
        pairs = self.demand_pairs(nodes)
        if len(pairs) < self.spec.demand_count:
            raise GenerationFailure(
                f"only {len(pairs)} origin-destination pairs available for {self.spec.demand_count} demands"
            )
        for attempt in range(1, self.spec.max_retries + 1):
            arcs = self._arcs(nodes)
            volumes = self._volumes(pairs) if self.spec.demand_count else []
            if not self._routable(arcs, [pair for pair, _ in volumes]):
                logger.debug("Attempt %s left a demand without a chain, resampling arcs", attempt)
                continue
            demands = [
                Demand(origin=pair[0], dest=pair[1], volume=volume,
                       deadline=self._deadline(nodes, arcs, pair, volume))
                for pair, volume in volumes
            ]
            instance = Instance(nodes=nodes, arcs=arcs, demands=demands, time_value=self.spec.time_value)
            violations = validate_instance(instance)
            if violations:
                raise GenerationFailure(f"generated instance is invalid: {violations[0]}")
            logger.info("Generated instance after %s attempt(s)", attempt)
            return instance
        raise GenerationFailure(f"no routable instance after {self.spec.max_retries} attempts")


def generate(spec: GeneratorSpec) -> Instance:
    """Deterministic random instance for a generator spec"""
    return InstanceGenerator(spec).generate()
