import numpy as np
import pytest

from netopt.exceptions import InfeasibleError
from netopt.models import (
    Algorithm,
    AnnealSettings,
    Demand,
    GeneratorSpec,
    Instance,
    Node,
    NodeKind,
    RoutingTable,
    ServiceArc,
    SolveConfig,
)
from netopt.services.annealing import Annealer, solve_anneal
from netopt.services.cost_time import evaluate
from netopt.services.exact_solver import estimate_search_space, solve_exact
from netopt.services.fixtures import A1, A2, S1, T2
from netopt.services.generator import generate
from netopt.services.validation import validate_solution
from tests.networks import DIRECT_ROUTING, HUB_ROUTING, line_instance


def anneal_config(seed: int = 0, **settings) -> SolveConfig:
    """Short cooling schedule that still visits every table of the small test networks"""
    values = {"iters_per_temp": 10, "cooling": 0.8, "restarts": 4}
    values.update(settings)
    return SolveConfig(algorithm=Algorithm.ANNEAL, seed=seed, threads=1, anneal=AnnealSettings(**values))


def comparable(result):
    return result.dict(exclude={"trace": {"wall_time"}})


def test_zero_iterations_returns_initial_table(line):
    """Test max_iterations = 0 returns the repaired all-direct start"""
    result = solve_anneal(line, anneal_config(max_iterations=0))

    assert result.routing == DIRECT_ROUTING
    assert result.algorithm == Algorithm.ANNEAL
    assert not result.proven_optimal
    assert result.trace.iterations == 0
    assert result.trace.best_objective_by_iteration == []


def test_initial_table_follows_fastest_path_without_direct_arc(courier10):
    """Test the start uses fastest-path hops and their direct services when no direct arc exists"""
    single = courier10.with_demands([Demand(origin=S1, dest=T2, volume=180.0, deadline=36.0)])
    table = Annealer(single, anneal_config()).initial_table()

    assert table == RoutingTable({(S1, T2): A1, (S1, A1): A1, (A1, T2): A2, (A1, A2): A2, (A2, T2): T2})
    assert validate_solution(single, table) == []


def test_initial_table_unroutable():
    """Test a demand without any chain cannot be started"""
    instance = Instance(
        nodes=[Node(id=0), Node(id=1)],
        arcs=[ServiceArc(source=1, target=0, travel_time=1.0)],
        demands=[Demand(origin=0, dest=1, volume=5.0)],
    )
    with pytest.raises(InfeasibleError):
        Annealer(instance, anneal_config()).initial_table()


def test_score_penalizes_capacity_excess():
    """Test the energy adds the weighted sorting overload"""
    instance = line_instance(capacity=100.0)
    candidate = Annealer(instance, anneal_config()).score(HUB_ROUTING)

    assert not candidate.feasible
    assert candidate.report.objective == pytest.approx(2986.6666666667)
    assert candidate.energy == pytest.approx(2986.6666666667 + 1000.0 * 60.0)


def test_score_rejects_cycles():
    """Test a cyclic table has no energy"""
    instance = line_instance(back_arc=True)
    cyclic = RoutingTable({(0, 2): 1, (0, 1): 1, (1, 2): 0, (1, 0): 0})
    assert Annealer(instance, anneal_config()).score(cyclic) is None


def test_neighbour_without_alternatives():
    """Test no move exists when every loaded pair has a single option"""
    instance = Instance(
        nodes=[Node(id=0), Node(id=1)],
        arcs=[ServiceArc(source=0, target=1, travel_time=1.0)],
        demands=[Demand(origin=0, dest=1, volume=5.0)],
    )
    annealer = Annealer(instance, anneal_config())
    current = annealer.score(annealer.initial_table())

    assert annealer.neighbour(current, np.random.default_rng(0)) is None


def test_neighbour_keeps_tables_consistent(courier10):
    """Test every proposed move is structurally valid"""
    annealer = Annealer(courier10, anneal_config())
    current = annealer.score(annealer.initial_table())
    rng = np.random.default_rng(5)
    for _ in range(50):
        table = annealer.neighbour(current, rng)
        if table is None:
            continue
        candidate = annealer.score(table)
        if candidate is None:
            continue
        assert validate_solution(courier10, table) == []
        current = candidate


@pytest.mark.parametrize("seed", range(5))
def test_finds_hub_on_line(line, seed):
    """Test annealing leaves the direct start for the cheaper hub table"""
    result = solve_anneal(line, anneal_config(seed))

    assert result.routing == HUB_ROUTING
    assert result.report.objective == pytest.approx(2986.6666666667)
    assert result.report.feasible


def test_finds_consolidation(consolidation):
    """Test annealing climbs out of all-direct to the all-hub optimum"""
    config = anneal_config(iters_per_temp=30, cooling=0.9, initial_temp=2000.0, restarts=2)
    result = solve_anneal(consolidation, config)

    assert result.report.objective == pytest.approx(4620.0)


def test_infeasible_instance_is_flagged():
    """Test annealing returns the best penalized table flagged infeasible"""
    result = solve_anneal(line_instance(capacity=100.0, deadline=19.0), anneal_config())

    assert not result.report.feasible
    assert result.report.violations


def test_same_seed_same_result(courier10):
    """Test two runs with the same seed are identical"""
    config = anneal_config(seed=42, max_iterations=200, restarts=2)

    first = solve_anneal(courier10, config)
    second = solve_anneal(courier10, config)

    assert comparable(first) == comparable(second)


def test_thread_count_does_not_change_result(courier10):
    """Test restarts reduce to the same result on one or several threads"""
    serial = solve_anneal(courier10, anneal_config(seed=3, max_iterations=150, restarts=3))
    threaded = solve_anneal(courier10, anneal_config(seed=3, max_iterations=150, restarts=3).copy(update={"threads": 3}))

    assert comparable(serial) == comparable(threaded)


def small_instance(seed: int) -> Instance:
    spec = GeneratorSpec(
        seed=seed,
        node_counts={
            NodeKind.LOCAL_DISTRIBUTION_CENTER: 2,
            NodeKind.SORTING_CENTER: 1,
            NodeKind.TERMINAL_DISTRIBUTION_CENTER: 2,
        },
        demand_count=2 + seed % 2,
    )
    return generate(spec)


@pytest.mark.parametrize("seed", range(20))
def test_feasible_results_are_sound(seed):
    """Test a table reported feasible passes validation and re-evaluation"""
    instance = small_instance(seed)
    config = anneal_config(seed, max_iterations=200)
    result = solve_anneal(instance, config)
    if not result.report.feasible:
        return

    assert validate_solution(instance, result.routing) == []
    assert evaluate(instance, result.routing, config.max_transfers).feasible


@pytest.mark.slow
def test_quality_against_exact():
    """Test the default schedule with eight restarts matches the exact optimum on small instances"""
    compared = matched = 0
    for seed in range(6):
        instance = small_instance(seed)
        if estimate_search_space(instance) > 5000:
            continue
        try:
            exact = solve_exact(instance, SolveConfig(threads=1))
        except InfeasibleError:
            continue
        config = SolveConfig(algorithm=Algorithm.ANNEAL, seed=seed, threads=1, anneal=AnnealSettings(restarts=8))
        heuristic = solve_anneal(instance, config)
        compared += 1

        # Assertions
        assert heuristic.report.feasible
        assert heuristic.report.objective >= exact.report.objective - 1e-6
        assert heuristic.report.objective <= 1.05 * exact.report.objective + 1e-6
        if heuristic.report.objective <= exact.report.objective * (1 + 1e-9) + 1e-9:
            matched += 1

    assert compared > 0
    assert matched >= 0.95 * compared
