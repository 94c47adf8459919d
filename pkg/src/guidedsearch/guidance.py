"""User guidance: intermediate configurations and the heuristic built from them.

A guidance configuration is snapped onto the lattice, then drives a
*dynamic heuristic* that estimates the cost of reaching the goal by way of
the guidance state: states whose best path already passes through it are
scored straight to the goal, everything else is scored toward the guidance
first. Guidance is a soft bias, never a constraint: discarding it leaves
every cost-to-come untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from guidedsearch.search import Planner


class GuidanceError(ValueError):
    """Base class for rejected guidance submissions."""


class InvalidGuidanceError(GuidanceError):
    """The nearest lattice state is in collision."""


class OutOfToleranceError(GuidanceError):
    """The raw configuration is too far from any lattice state."""


@dataclass
class GuidanceConfiguration:
    raw: tuple[float, ...]
    snapped: int
    distance: float
    created_at: int = 0


def snap_guidance(domain, raw_config: Sequence[float],
                  snap_tolerance: float) -> GuidanceConfiguration:
    """Snap a raw configuration to its nearest valid lattice state."""
    sid, dist = domain.snap(raw_config)
    if not domain.is_free(sid):
        raise InvalidGuidanceError(
            f"guidance snaps into collision at {domain.config_of(sid)}")
    if dist > snap_tolerance:
        raise OutOfToleranceError(
            f"guidance is {dist:.3f} from the lattice, tolerance {snap_tolerance}")
    return GuidanceConfiguration(tuple(float(v) for v in raw_config), sid, dist)


class DynamicHeuristic:
    """Cost-to-goal estimate routed through a guidance state."""

    def __init__(self, domain, guidance: GuidanceConfiguration,
                 h_goal: Callable[[int], float],
                 via_flag: Callable[[int], bool]):
        self.guidance = guidance
        self._domain = domain
        self._h_goal = h_goal
        self._via_flag = via_flag
        self.h_goal_at_guidance = h_goal(guidance.snapped)
        self.reached = False

    def evaluate(self, sid: int) -> float:
        if self._via_flag(sid):
            return self._h_goal(sid)
        return self._domain.heuristic_between(sid, self.guidance.snapped) \
            + self.h_goal_at_guidance


def guidance_reached(dynamic_heuristic: DynamicHeuristic) -> bool:
    """True once some expanded state's path passed through the guidance."""
    return dynamic_heuristic.reached


def attach(planner: Planner, raw_config: Sequence[float]) -> tuple[int, GuidanceConfiguration]:
    """Snap, build the dynamic heuristic, and mount it as a new queue."""
    gc = snap_guidance(planner.domain, raw_config, planner.config.snap_tolerance)
    dh = DynamicHeuristic(planner.domain, gc, planner.baseline_heuristic,
                          lambda sid: planner.states[sid].via_guidance)
    qid = planner.attach_guidance(gc, dh)
    return qid, gc
