"""Shared multi-heuristic A* with stagnation detection and user guidance.

The library plans over discrete lattice domains with one consistent anchor
heuristic plus goal-directed baseline and dynamic heuristics. When the
baseline search stops making progress, the session asks for an intermediate
configuration and mounts a heuristic that routes through it; unhelpful
guidance is discarded automatically, helpful-but-unfinished guidance is kept
for reuse. See README.md for the service, CLI and browser front ends.
"""

from guidedsearch.controller import (
    PlannerSession,
    ScriptedProvider,
    SessionResult,
    run_session,
)
from guidedsearch.detectors import HeuristicDetector, VacillationDetector
from guidedsearch.domains import ArmDomain, GridMap, u_trap_map
from guidedsearch.guidance import (
    DynamicHeuristic,
    GuidanceConfiguration,
    GuidanceError,
    snap_guidance,
)
from guidedsearch.search import (
    Planner,
    PlannerConfig,
    create_planner,
)

__version__ = "0.1.0"

__all__ = [
    "ArmDomain",
    "DynamicHeuristic",
    "GridMap",
    "GuidanceConfiguration",
    "GuidanceError",
    "HeuristicDetector",
    "Planner",
    "PlannerConfig",
    "PlannerSession",
    "ScriptedProvider",
    "SessionResult",
    "VacillationDetector",
    "create_planner",
    "run_session",
    "snap_guidance",
    "u_trap_map",
    "__version__",
]
