from .solver import ConicProblem, SolveResult
from .seesaw import SeesawResult, optimal_measurements, optimal_states, seesaw_max_success
from .hierarchy import (
    HierarchyResult,
    MomentStructure,
    build_moment_structure,
    hierarchy_max_success,
    hierarchy_min_distinguishability,
)

__all__ = [
    "ConicProblem",
    "SolveResult",
    "SeesawResult",
    "optimal_measurements",
    "optimal_states",
    "seesaw_max_success",
    "HierarchyResult",
    "MomentStructure",
    "build_moment_structure",
    "hierarchy_max_success",
    "hierarchy_min_distinguishability",
]
