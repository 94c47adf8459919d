"""Planning domains: discrete lattices with successors, costs and heuristics.

A domain object is anything providing the surface the search engine uses:

    successors(sid) -> list[(sid, cost)]
    is_free(sid) -> bool
    anchor_heuristic(sid) -> float        # consistent for the cost model
    goal_heuristic(sid) -> float          # goal-directed baseline estimate
    heuristic_between(sid, other) -> float
    snap(raw_config) -> (sid, distance)   # nearest lattice state
    config_of(sid) -> tuple[float, ...]
    goal_predicate(sid) -> bool
    describe() -> dict                    # JSON-safe reconstruction data

State ids are opaque dense ints, bijective with lattice coordinates.
"""

from guidedsearch.domains.grid import GridMap, u_trap_map
from guidedsearch.domains.arm import ArmDomain

__all__ = ["GridMap", "ArmDomain", "u_trap_map"]
