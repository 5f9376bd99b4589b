from .bnb import SolveOutcome, branch_and_bound, relative_gap
from .heuristic import heuristic_construct, heuristic_plan, local_search
from .lp import SolverConfig, solve_lp

__all__ = [
    "SolveOutcome", "SolverConfig", "branch_and_bound", "heuristic_construct",
    "heuristic_plan", "local_search", "relative_gap", "solve_lp",
]
