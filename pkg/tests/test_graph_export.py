from netopt.models import Instance
from netopt.services.cost_time import evaluate
from netopt.services.graph_export import export_graph
from tests.networks import HUB_ROUTING


def test_instance_only(line):
    """Test nodes are shaped by kind and every arc is drawn plain"""
    source = export_graph(line)

    assert source.startswith("digraph courier_network {")
    assert "rankdir=LR" in source
    assert "shape=box" in source
    assert "shape=hexagon" in source
    assert "shape=box3d" in source
    assert source.count("->") == 3
    assert "style" not in source


def test_solved_routing_highlights_served_arcs(line):
    """Test served arcs are bold with frequency and flow, unserved arcs dashed"""
    source = export_graph(line, HUB_ROUTING)

    # Assertions
    assert "φ=2.67" in source
    assert "F=160.0" in source
    assert "φ=4.00" in source
    assert "F=240.0" in source
    assert source.count("style=bold") == 2
    assert source.count("style=dashed") == 1
    assert '"blue:red"' in source


def test_report_is_used_as_given(line):
    """Test a supplied report is drawn without re-evaluation"""
    report = evaluate(line, HUB_ROUTING)
    assert export_graph(line, HUB_ROUTING, report) == export_graph(line, HUB_ROUTING)


def test_courier_class_comment(courier10):
    """Test the courier class is written as the graph comment"""
    source = export_graph(courier10)

    assert source.startswith("// standard")
    assert "S1\\nLocalDistributionCenter" in source
    assert source.count("->") == 24


def test_empty_instance():
    """Test an empty instance yields only the graph header"""
    source = export_graph(Instance())

    assert "digraph courier_network" in source
    assert "->" not in source
