"""Shared test utilities: definition oracles, stub domains, constructed traces."""

from __future__ import annotations

import heapq
import math

import numpy as np


class GraphDomain:
    """Explicit-graph domain for tests: nodes keyed by int, edges and
    heuristics supplied as dicts. Coordinates default to (sid, 0)."""

    def __init__(self, edges: dict[int, list[tuple[int, float]]],
                 h_goal: dict[int, float] | None = None,
                 h_anchor: dict[int, float] | None = None,
                 coords: dict[int, tuple[float, float]] | None = None,
                 goal: int | None = None):
        self.edges = edges
        self.h_goal = h_goal or {}
        self.h_anchor = h_anchor or {}
        nodes = set(edges)
        for succ in edges.values():
            nodes.update(s for s, _ in succ)
        self.nodes = nodes
        self.coords = coords or {n: (float(n), 0.0) for n in nodes}
        self.goal = goal

    def successors(self, sid):
        return list(self.edges.get(sid, []))

    def is_free(self, sid):
        return sid in self.nodes

    def anchor_heuristic(self, sid):
        return self.h_anchor.get(sid, 0.0)

    def goal_heuristic(self, sid):
        return self.h_goal.get(sid, 0.0)

    def heuristic_between(self, sid, other):
        (x0, y0), (x1, y1) = self.coords[sid], self.coords[other]
        return math.hypot(x1 - x0, y1 - y0)

    def goal_predicate(self, sid):
        return sid == self.goal

    def snap(self, raw):
        best, dist = None, math.inf
        for n in self.nodes:
            d = math.hypot(self.coords[n][0] - raw[0], self.coords[n][1] - raw[1])
            if d < dist or (d == dist and (best is None or n < best)):
                best, dist = n, d
        return best, dist

    def config_of(self, sid):
        return self.coords[sid]

    def describe(self):
        return {"domain": "test-graph"}


def dijkstra_cost(domain, start, goal_predicate):
    """Uniform-cost oracle, independent of the engine under test."""
    dist = {start: 0.0}
    heap = [(0.0, start)]
    seen = set()
    while heap:
        d, sid = heapq.heappop(heap)
        if sid in seen:
            continue
        seen.add(sid)
        if goal_predicate(sid):
            return d
        for nsid, cost in domain.successors(sid):
            nd = d + cost
            if nd < dist.get(nsid, math.inf):
                dist[nsid] = nd
                heapq.heappush(heap, (nd, nsid))
    return None


def random_grid(rng, size=20, density=0.2):
    from guidedsearch.domains import GridMap
    while True:
        blocked = rng.random((size, size)) < density
        free = np.argwhere(~blocked)
        if len(free) < 2:
            continue
        sy, sx = free[rng.integers(len(free))]
        ty, tx = free[rng.integers(len(free))]
        if (sx, sy) == (tx, ty):
            continue
        return GridMap(size, size, blocked, start=(int(sx), int(sy)),
                       goal=(int(tx), int(ty)))


def run_until_solved(planner, limit=1_000_000):
    records = []
    while not planner.solved:
        records.append(planner.expand_next())
        if len(records) > limit:
            raise AssertionError("expansion limit hit")
    return records


def vacillation_oracle(delays: list[int], omega: int, tau: float) -> list[tuple[str, bool]]:
    """Re-evaluate the delay-based definition directly at every index."""
    out = []
    in_stag = False
    for i in range(1, len(delays) + 1):
        window = delays[max(0, i - omega):i]
        mean = sum(window) / len(window)
        verdict = "unchanged"
        if not in_stag:
            if len(window) == omega and mean >= tau:
                in_stag = True
                verdict = "entered"
        else:
            if all(d == 1 for d in window):
                in_stag = False
                verdict = "exited"
        out.append((verdict, in_stag))
    return out


def heuristic_oracle(hs: list[float], omega1: int, omega2: int,
                     epsilon: float) -> list[tuple[str, bool]]:
    """Re-evaluate the min-progress definition directly at every index."""
    out = []
    in_stag = False
    for i in range(1, len(hs) + 1):
        if i < omega1:
            out.append(("unchanged", False))
            continue
        lo = max(1, i - omega1)
        k_full = min(hs[lo - 1:i])
        k_lagged = min(hs[lo - 1:i - omega2])
        stag = k_full >= k_lagged - epsilon
        verdict = "unchanged"
        if stag != in_stag:
            verdict = "entered" if stag else "exited"
            in_stag = stag
        out.append((verdict, in_stag))
    return out


def ramp(start: float, stop: float, steps: int) -> list[float]:
    if steps <= 0:
        return []
    d = (stop - start) / steps
    return [start + d * (k + 1) for k in range(steps)]


def three_minima_trace() -> list[float]:
    """Heuristic trace with three descents: a deep plateau, a shallow nearby
    dip, and a slow drift whose per-step progress stays tiny.

    Built for the default windows (omega1=200, omega2=50, epsilon=50): the
    shallow second dip stays within epsilon of the first minimum, so it must
    not break the detected stagnation region.
    """
    trace: list[float] = []
    trace += ramp(3000.0, 500.0, 250)    # fast descent into first minimum
    trace += [500.0] * 300               # first plateau: stagnation
    trace += ramp(500.0, 700.0, 80)      # frontier worsens
    trace += ramp(700.0, 490.0, 84)      # second dip: only 10 below the first
    trace += ramp(490.0, 700.0, 84)      # climbs back out
    trace += ramp(700.0, 600.0, 300)     # slow drift: < epsilon per window
    return trace
