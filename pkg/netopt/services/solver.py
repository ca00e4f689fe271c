import logging

from netopt.models import Algorithm, Instance, SolveConfig, SolveResult
from netopt.services.annealing import solve_anneal
from netopt.services.exact_solver import solve_exact

logger = logging.getLogger(__name__)


def solve(instance: Instance, config: SolveConfig) -> SolveResult:
    """Run the solver named by config.algorithm"""
    logger.info("Solving %s demand(s) with %s", len(instance.demands), config.algorithm.value)
    if config.algorithm == Algorithm.EXACT:
        return solve_exact(instance, config)
    return solve_anneal(instance, config)
