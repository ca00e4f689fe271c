import pytest

from netopt.exceptions import InfeasibleError, InstanceValidationError, SearchSpaceTooLarge
from netopt.models import Demand, GeneratorSpec, Instance, Node, NodeKind, RoutingTable, ServiceArc, SolveConfig
from netopt.services.exact_solver import assign, estimate_search_space, solve_exact
from netopt.services.fixtures import S1, T1
from netopt.services.generator import generate
from netopt.services.validation import validate_solution
from tests.networks import DIRECT_ROUTING, HUB_ROUTING, brute_force_optimum, line_instance


@pytest.fixture
def config():
    """Fixture for a serial exact configuration"""
    return SolveConfig(threads=1, search_cap=10**6)


def test_single_direct_arc_is_proven_optimal(config):
    """Test one demand over its only arc gives the all-direct table"""
    instance = Instance(
        nodes=[Node(id=0), Node(id=1)],
        arcs=[ServiceArc(source=0, target=1, travel_time=3.0, unit_trip_cost=50.0)],
        demands=[Demand(origin=0, dest=1, volume=30.0)],
    )
    result = solve_exact(instance, config)

    assert result.routing == RoutingTable({(0, 1): 1})
    assert result.proven_optimal
    assert result.report.feasible
    assert result.trace.iterations == 1


def test_hub_beats_direct(line, config):
    """Test consolidating at the hub is chosen when it is cheaper"""
    result = solve_exact(line, config)

    # Assertions
    assert result.routing == HUB_ROUTING
    assert result.report.objective == pytest.approx(2986.6666666667)
    assert result.trace.iterations == 2
    assert result.trace.best_objective_by_iteration[-1].objective == pytest.approx(2986.6666666667)


def test_capacity_forces_direct(config):
    """Test a hub without enough sorting capacity is avoided"""
    result = solve_exact(line_instance(capacity=100.0), config)

    assert result.routing == DIRECT_ROUTING
    assert result.report.objective == pytest.approx(4106.6666666667)


def test_infeasible_when_no_table_fits(config):
    """Test capacity and deadline together leave no feasible table"""
    with pytest.raises(InfeasibleError):
        solve_exact(line_instance(capacity=100.0, deadline=19.0), config)


def test_transfer_limit_excludes_hub(line):
    """Test max_transfers = 0 only admits direct tables"""
    result = solve_exact(line, SolveConfig(threads=1, max_transfers=0))
    assert result.routing == DIRECT_ROUTING


def test_consolidation_routes_everything_through_hub(consolidation, config):
    """Test the exact optimum sends all nine demands through the hub"""
    result = solve_exact(consolidation, config)

    assert result.report.objective == pytest.approx(4620.0)
    assert all(result.routing[demand.pair] == 3 for demand in consolidation.demands)
    assert result.trace.iterations == 512


def test_courier10_single_demand_matches_chain_oracle(courier10, config):
    """Test the S1 -> T1 optimum equals the cheapest of its twelve chains"""
    single = courier10.with_demands([courier10.index.demands[(S1, T1)]])
    result = solve_exact(single, config)
    objective, table = brute_force_optimum(single)

    assert result.trace.iterations == 12
    assert result.report.objective == objective
    assert result.routing == table


@pytest.mark.parametrize("seed", range(30))
def test_oracle_equivalence_on_small_instances(seed, config):
    """Test exact search and the brute-force chain oracle agree on objective and table"""
    spec = GeneratorSpec(
        seed=seed,
        node_counts={
            NodeKind.LOCAL_DISTRIBUTION_CENTER: 2,
            NodeKind.SORTING_CENTER: 1,
            NodeKind.TERMINAL_DISTRIBUTION_CENTER: 2,
        },
        demand_count=2 + seed % 2,
    )
    instance = generate(spec)
    if estimate_search_space(instance) > 5000:
        pytest.skip("search space too large for a unit test")

    expected = brute_force_optimum(instance)
    if expected is None:
        with pytest.raises(InfeasibleError):
            solve_exact(instance, config)
        return

    result = solve_exact(instance, config)
    assert result.report.objective == expected[0]
    assert result.routing == expected[1]
    assert validate_solution(instance, result.routing) == []


def test_search_cap_refuses_with_estimate(line):
    """Test an over-cap search is refused before enumerating"""
    with pytest.raises(SearchSpaceTooLarge) as error:
        solve_exact(line, SolveConfig(search_cap=1))

    assert error.value.estimate == 2
    assert error.value.cap == 1


def test_estimate_search_space(line, consolidation):
    """Test the estimate multiplies option counts over reachable pairs"""
    assert estimate_search_space(line) == 2
    assert estimate_search_space(consolidation) == 512
    assert estimate_search_space(Instance(nodes=[Node(id=0)])) == 1


def test_threads_do_not_change_the_result(consolidation):
    """Test serial and threaded searches return the same table and trace"""
    serial = solve_exact(consolidation, SolveConfig(threads=1))
    threaded = solve_exact(consolidation, SolveConfig(threads=4))

    assert threaded.routing == serial.routing
    assert threaded.report == serial.report
    assert threaded.trace.iterations == serial.trace.iterations
    assert threaded.trace.best_objective_by_iteration == serial.trace.best_objective_by_iteration


def test_invalid_instance_rejected(line, config):
    """Test the solver refuses instances that fail validation"""
    broken = Instance(nodes=line.nodes, arcs=line.arcs + [line.arcs[0]], demands=line.demands)
    with pytest.raises(InstanceValidationError):
        solve_exact(broken, config)


def test_empty_demand_set(config):
    """Test no demands gives the empty table at zero cost"""
    result = solve_exact(Instance(nodes=[Node(id=0), Node(id=1)]), config)

    assert len(result.routing) == 0
    assert result.report.objective == 0.0


def test_assign_conflicts_and_cycles():
    """Test assignments refuse conflicting direct services and cycles"""
    hops = {(0, 1): 2}
    assert assign(hops, 0, 3, 1) is None

    hops = {(1, 3): 0}
    assert assign(hops, 0, 3, 1) is None

    hops = {}
    assert assign(hops, 0, 3, 1) == [(0, 3), (0, 1)]
    assert hops == {(0, 3): 1, (0, 1): 1}
