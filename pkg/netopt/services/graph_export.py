import logging
from typing import Dict, List, Optional

import graphviz

from netopt.models import ArcReport, EvaluationReport, Instance, NodeKind, Pair, RoutingTable
from netopt.services.cost_time import evaluate

logger = logging.getLogger(__name__)

NODE_SHAPES = {
    NodeKind.LOCAL_DISTRIBUTION_CENTER: "box",
    NodeKind.SORTING_CENTER: "hexagon",
    NodeKind.AIRPORT: "invtriangle",
    NodeKind.RAIL_STATION: "parallelogram",
    NodeKind.TERMINAL_DISTRIBUTION_CENTER: "box3d",
}
CHAIN_COLOURS = ["blue", "red", "darkgreen", "orange", "purple", "brown", "deeppink", "teal"]


def _chain_colours(report: EvaluationReport) -> Dict[Pair, List[str]]:
    colours: Dict[Pair, List[str]] = {}
    for position, row in enumerate(report.per_demand):
        colour = CHAIN_COLOURS[position % len(CHAIN_COLOURS)]
        for arc in zip(row.chain, row.chain[1:]):
            colours.setdefault(arc, []).append(colour)
    return colours


def export_graph(
    instance: Instance,
    routing: Optional[RoutingTable] = None,
    report: Optional[EvaluationReport] = None,
) -> str:
    """DOT description of the network.

    Nodes are shaped by kind. With a routing table (or a report), served arcs are drawn
    bold with their frequency and service flow, unserved arcs dashed, and the arcs of
    each demand's chain in that demand's colour.
    """
    if routing is not None and report is None:
        report = evaluate(instance, routing)

    dot = graphviz.Digraph(name="courier_network", comment=instance.courier_class)
    dot.attr(rankdir="LR")
    for node in instance.nodes:
        dot.node(
            str(node.id),
            label=f"{node.label}\\n{node.kind.value}",
            shape=NODE_SHAPES[node.kind],
        )

    served: Dict[Pair, ArcReport] = {}
    colours: Dict[Pair, List[str]] = {}
    if report is not None:
        served = {(row.source, row.target): row for row in report.per_arc}
        colours = _chain_colours(report)

    for arc in instance.arcs:
        attributes: Dict[str, str] = {}
        row = served.get(arc.pair)
        if row is not None:
            attributes.update(
                label=f"φ={row.frequency:.2f}\\nF={row.service_flow:.1f}",
                style="bold",
                penwidth="2.5",
            )
        elif report is not None:
            attributes.update(style="dashed", color="gray60")
        if arc.pair in colours:
            attributes["color"] = ":".join(colours[arc.pair])
        dot.edge(str(arc.source), str(arc.target), **attributes)

    logger.debug("Exported %s nodes and %s arcs", len(instance.nodes), len(instance.arcs))
    return dot.source
