import pytest

from netopt.exceptions import GenerationFailure
from netopt.models import ArcMode, GeneratorSpec, Node, NodeKind, RoutingTable, ServiceArc
from netopt.services.cost_time import evaluate
from netopt.services.flow_engine import enumerate_chains
from netopt.services.generator import InstanceGenerator, generate
from netopt.services.instance_io import serialize_instance
from netopt.services.validation import validate_instance


def test_same_seed_same_instance():
    """Test generation is deterministic from the seed"""
    spec = GeneratorSpec(seed=1, demand_count=3)

    first = generate(spec)
    second = generate(spec)

    assert first == second
    assert serialize_instance(first) == serialize_instance(second)
    assert len(first.nodes) == 5
    assert len(first.demands) == 3


def test_different_seeds_differ():
    """Test the seed drives the random draws"""
    assert generate(GeneratorSpec(seed=1)) != generate(GeneratorSpec(seed=2))


def test_zero_demands():
    """Test an empty demand set is valid and costs nothing"""
    instance = generate(GeneratorSpec(seed=3, demand_count=0))

    assert instance.demands == []
    assert validate_instance(instance) == []
    assert evaluate(instance, RoutingTable()).objective == 0.0


def test_accumulation_within_default_range():
    """Test default accumulation parameters stay within 10 to 11.5 hours"""
    for seed in range(20):
        instance = generate(GeneratorSpec(seed=seed))
        assert all(10.0 <= node.accum_param <= 11.5 for node in instance.nodes)


@pytest.mark.parametrize("seed", range(100))
def test_generated_instances_validate_and_route(seed):
    """Test every generated instance validates and every demand has a chain"""
    spec = GeneratorSpec(
        seed=seed,
        node_counts={
            NodeKind.LOCAL_DISTRIBUTION_CENTER: 2,
            NodeKind.SORTING_CENTER: 1,
            NodeKind.AIRPORT: 2,
            NodeKind.RAIL_STATION: 2,
            NodeKind.TERMINAL_DISTRIBUTION_CENTER: 2,
        },
        demand_count=4,
    )
    instance = generate(spec)

    assert validate_instance(instance) == []
    for demand in instance.demands:
        assert enumerate_chains(instance, demand, spec.max_transfers)
        assert demand.deadline is not None


def test_node_layout_and_modes():
    """Test names, capacities and arc modes follow the node kinds"""
    spec = GeneratorSpec(
        seed=5,
        node_counts={
            NodeKind.LOCAL_DISTRIBUTION_CENTER: 1,
            NodeKind.AIRPORT: 2,
            NodeKind.RAIL_STATION: 2,
            NodeKind.TERMINAL_DISTRIBUTION_CENTER: 1,
        },
        arc_density={ArcMode.ROAD: 1.0, ArcMode.RAIL: 1.0, ArcMode.AIR: 1.0},
        demand_count=1,
    )
    instance = generate(spec)
    kinds = {node.id: node.kind for node in instance.nodes}

    # Assertions
    assert [node.name for node in instance.nodes] == ["L1", "A1", "A2", "R1", "R2", "T1"]
    assert instance.nodes[0].transfer_capacity is None
    assert instance.nodes[1].transfer_capacity is not None
    assert all(kinds[arc.source] != NodeKind.TERMINAL_DISTRIBUTION_CENTER for arc in instance.arcs)
    for arc in instance.arcs:
        if kinds[arc.source] == kinds[arc.target] == NodeKind.AIRPORT:
            assert arc.mode == ArcMode.AIR
        elif kinds[arc.source] == kinds[arc.target] == NodeKind.RAIL_STATION:
            assert arc.mode == ArcMode.RAIL
        else:
            assert arc.mode == ArcMode.ROAD
    assert instance.demands[0].pair == (0, 5)


def test_no_deadlines_when_tightness_unset():
    """Test deadline_tightness None leaves demands without deadlines"""
    instance = generate(GeneratorSpec(seed=2, deadline_tightness=None))
    assert all(demand.deadline is None for demand in instance.demands)


def test_fastest_bound_includes_transfer_delays():
    """Test the deadline bound adds operation time and frequency delay at transfers"""
    spec = GeneratorSpec(max_transfers=1)
    nodes = [
        Node(id=0),
        Node(id=1, accum_param=12.0, op_time=1.0),
        Node(id=2),
    ]
    generator = InstanceGenerator(spec)
    arcs = [
        ServiceArc(source=0, target=1, travel_time=2.0, carrier_size=60.0),
        ServiceArc(source=1, target=2, travel_time=3.0, carrier_size=60.0),
        ServiceArc(source=0, target=2, travel_time=20.0, carrier_size=60.0),
    ]
    # Through node 1: 2 + 3 + 1 + 12 * 60 / 120 = 12 hours.
    assert generator.fastest_bound(nodes, arcs, (0, 2), 120.0) == pytest.approx(12.0)
    # A small demand waits longer at the transfer, so the direct arc is faster.
    assert generator.fastest_bound(nodes, arcs, (0, 2), 20.0) == pytest.approx(20.0)


def test_too_many_demands():
    """Test asking for more demands than pairs fails"""
    spec = GeneratorSpec(
        node_counts={NodeKind.LOCAL_DISTRIBUTION_CENTER: 1, NodeKind.TERMINAL_DISTRIBUTION_CENTER: 1},
        demand_count=2,
    )
    with pytest.raises(GenerationFailure):
        generate(spec)


def test_unroutable_spec_gives_up():
    """Test generation stops after max_retries when no arcs are drawn"""
    spec = GeneratorSpec(
        arc_density={ArcMode.ROAD: 0.0, ArcMode.RAIL: 0.0, ArcMode.AIR: 0.0},
        max_retries=3,
    )
    with pytest.raises(GenerationFailure, match="3 attempts"):
        generate(spec)
