"""Shared multi-heuristic A* engine.

One consistent *anchor* queue guards the suboptimality bound while any
number of goal-directed queues (a permanent *baseline* plus optional
*dynamic* ones) drive exploration. All queues share one state table: cost-to-
come values, parent links and closure flags are global, so progress made by
one search is immediately visible to the others.

Expansion alternates round-robin over the non-anchor queues; a candidate
queue may expand only while its best key stays within ``w2`` times the
anchor's best key, which yields solutions within ``w1 * w2`` of optimal.
Each state is expanded at most once by the anchor and at most once by the
union of non-anchor queues.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from guidedsearch.detectors import HeuristicDetector, VacillationDetector, make_detector

ANCHOR = "anchor"
BASELINE = "baseline"
DYNAMIC = "dynamic"

ACTIVE = "active"
SUSPENDED = "suspended"
DISCARDED = "discarded"

INF = math.inf


class ConfigError(ValueError):
    """Planner configuration violates an invariant."""


class InvalidStartError(ValueError):
    """Start state is outside the lattice or in collision."""


class SpaceExhausted(RuntimeError):
    """Every open list is empty: no solution exists within the lattice."""


class BudgetExhausted(RuntimeError):
    """The expansion budget was consumed without certifying a solution."""


@dataclass(frozen=True)
class PlannerConfig:
    w1: float = 10.0
    w2: float = 2.0
    detector_kind: str = "heuristic_based"
    omega: int = 10
    tau: float = 30.0
    omega1: int = 200
    omega2: int = 50
    epsilon: float = 50.0
    expansion_budget: int = 200_000
    snap_tolerance: float = 1.0

    def __post_init__(self) -> None:
        if self.w1 < 1:
            raise ConfigError("w1 must be >= 1")
        if self.w2 < 1:
            raise ConfigError("w2 must be >= 1")
        if self.detector_kind not in ("vacillation", "heuristic_based"):
            raise ConfigError(f"unknown detector_kind: {self.detector_kind!r}")
        if not self.omega1 > self.omega2 > 0:
            raise ConfigError("omega1 must exceed omega2")
        if self.omega <= 0:
            raise ConfigError("omega must be > 0")
        if self.tau <= 1:
            raise ConfigError("tau must be > 1")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be >= 0")
        if self.expansion_budget <= 0:
            raise ConfigError("expansion_budget must be > 0")
        if self.snap_tolerance <= 0:
            raise ConfigError("snap_tolerance must be > 0")

    def make_detector(self) -> VacillationDetector | HeuristicDetector:
        return make_detector(self.detector_kind, omega=self.omega, tau=self.tau,
                             omega1=self.omega1, omega2=self.omega2,
                             epsilon=self.epsilon)


@dataclass
class SearchState:
    g: float
    parent: Optional[int]
    stamp: int
    via_guidance: bool = False
    closed_anchor: bool = False
    closed_inadmissible: bool = False


@dataclass
class ExpansionRecord:
    queue_id: int
    role: str
    state: int
    g: float
    h: float
    delta_e: int
    generated: list[int]
    verdict: Optional[str]       # detector transition, None for the anchor
    in_stagnation: Optional[bool]


class HeuristicQueue:
    """One prioritized open list bound to a heuristic and a lifecycle role."""

    def __init__(self, queue_id: int, role: str, heuristic: Callable[[int], float],
                 detector=None):
        self.queue_id = queue_id
        self.role = role
        self.heuristic = heuristic
        self.status = ACTIVE
        self.detector = detector
        self.expansions_from_queue = 0
        self._heap: list[tuple[float, float, int]] = []
        self._keys: dict[int, tuple[float, float]] = {}

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, sid: int) -> bool:
        return sid in self._keys

    def push(self, sid: int, f: float, g: float) -> None:
        # ties broken by larger g, then smaller id, for reproducible traces
        key = (f, -g)
        self._keys[sid] = key
        heapq.heappush(self._heap, (f, -g, sid))

    def remove(self, sid: int) -> None:
        self._keys.pop(sid, None)

    def clear(self) -> None:
        self._heap.clear()
        self._keys.clear()

    def _purge(self) -> None:
        heap = self._heap
        keys = self._keys
        while heap:
            f, ng, sid = heap[0]
            if keys.get(sid) == (f, ng):
                return
            heapq.heappop(heap)

    def min_key(self) -> float:
        self._purge()
        return self._heap[0][0] if self._heap else INF

    def pop(self) -> int:
        self._purge()
        if not self._heap:
            raise IndexError("pop from empty queue")
        _, _, sid = heapq.heappop(self._heap)
        del self._keys[sid]
        return sid

    def open_ids(self) -> list[int]:
        return list(self._keys)


@dataclass
class _DynamicSlot:
    queue_id: int
    heuristic: object            # guidance.DynamicHeuristic
    guidance: object             # guidance.GuidanceConfiguration


class Planner:
    """Search session over one domain. Single-threaded; drive via expand_next."""

    def __init__(self, domain, start: int, goal_predicate: Callable[[int], bool],
                 config: PlannerConfig, baseline: Callable[[int], float]):
        if not isinstance(config, PlannerConfig):
            config = PlannerConfig(**config)
        if not domain.is_free(start):
            raise InvalidStartError(
                f"start state {domain.config_of(start)} is blocked or invalid")
        self.domain = domain
        self.config = config
        self.goal_predicate = goal_predicate
        self.baseline_heuristic = baseline
        self.e_curr = 0
        self.states: dict[int, SearchState] = {}
        self._children: dict[int, set[int]] = {}
        self.queues: list[HeuristicQueue] = []
        self._rr = 0
        self._goal_sid: Optional[int] = None
        self.dynamic: Optional[_DynamicSlot] = None
        self._guidance_sid: Optional[int] = None

        self.anchor = HeuristicQueue(0, ANCHOR, domain.anchor_heuristic)
        self.baseline = HeuristicQueue(1, BASELINE, baseline,
                                       detector=config.make_detector())
        self.queues = [self.anchor, self.baseline]

        st = SearchState(g=0.0, parent=None, stamp=0)
        self.states[start] = st
        for q in self.queues:
            q.push(start, self._key(q, start, 0.0), 0.0)

    # -------------------------------------------------------------- keys

    def _key(self, queue: HeuristicQueue, sid: int, g: float) -> float:
        return g + self.config.w1 * queue.heuristic(sid)

    def queue_by_id(self, queue_id: int) -> HeuristicQueue:
        for q in self.queues:
            if q.queue_id == queue_id:
                return q
        raise KeyError(f"no queue {queue_id}")

    # --------------------------------------------------------- expansion

    def _select_queue(self) -> HeuristicQueue:
        active = [q for q in self.queues[1:] if q.status == ACTIVE]
        if not active:
            if self.anchor.min_key() < INF:
                return self.anchor
            raise SpaceExhausted("all open lists are empty")
        for _ in range(len(active)):
            cand = active[self._rr % len(active)]
            self._rr += 1
            ki = cand.min_key()
            ka = self.anchor.min_key()
            if ki == INF and ka == INF:
                continue
            if ki <= self.config.w2 * ka:
                return cand
            return self.anchor
        raise SpaceExhausted("all open lists are empty")

    def expand_next(self) -> ExpansionRecord:
        if self._goal_sid is not None:
            raise RuntimeError("solution already certified")
        if self.e_curr >= self.config.expansion_budget:
            raise BudgetExhausted(f"expansion budget {self.config.expansion_budget} consumed")
        queue = self._select_queue()
        sid = queue.pop()
        for other in self.queues:
            # suspended opens stay frozen; they are re-seeded on resume
            if other is not queue and other.status == ACTIVE:
                other.remove(sid)
        state = self.states[sid]
        if queue.role == ANCHOR:
            state.closed_anchor = True
        else:
            state.closed_inadmissible = True
        self.e_curr += 1
        queue.expansions_from_queue += 1
        delta_e = self.e_curr - state.stamp
        h_val = queue.heuristic(sid)

        verdict = None
        in_stag = None
        if queue.detector is not None:
            obs = delta_e if isinstance(queue.detector, VacillationDetector) else h_val
            verdict = queue.detector.observe(obs)
            in_stag = queue.detector.in_stagnation

        if state.via_guidance and self.dynamic is not None:
            self.dynamic.heuristic.reached = True

        if self._goal_sid is None and self.goal_predicate(sid):
            self._goal_sid = sid

        generated = []
        for nsid, cost in self.domain.successors(sid):
            ng = state.g + cost
            nstate = self.states.get(nsid)
            if nstate is None:
                nstate = SearchState(g=ng, parent=sid, stamp=self.e_curr)
                nstate.via_guidance = state.via_guidance or nsid == self._guidance_sid
                self.states[nsid] = nstate
                self._children.setdefault(sid, set()).add(nsid)
                self._insert(nsid, nstate)
                generated.append(nsid)
            elif ng < nstate.g:
                if nstate.parent is not None:
                    self._children.get(nstate.parent, set()).discard(nsid)
                nstate.g = ng
                nstate.parent = sid
                nstate.stamp = self.e_curr
                self._children.setdefault(sid, set()).add(nsid)
                self._set_flag(nsid, state.via_guidance or nsid == self._guidance_sid)
                self._insert(nsid, nstate)
                generated.append(nsid)

        return ExpansionRecord(queue.queue_id, queue.role, sid, state.g, h_val,
                               delta_e, generated, verdict, in_stag)

    def _insert(self, sid: int, state: SearchState) -> None:
        # closure gates: anchor-closed states never re-enter any open,
        # inadmissibly-closed states may only re-enter the anchor's
        if state.closed_anchor:
            return
        self.anchor.push(sid, self._key(self.anchor, sid, state.g), state.g)
        if state.closed_inadmissible:
            return
        for q in self.queues[1:]:
            if q.status == ACTIVE:
                q.push(sid, self._key(q, sid, state.g), state.g)

    # ---------------------------------------------------- guidance flags

    def _set_flag(self, sid: int, value: bool) -> None:
        state = self.states[sid]
        if state.via_guidance == value:
            return
        state.via_guidance = value
        self._refresh_dynamic_key(sid, state)
        # children keep their parent pointer, so their flag derives from ours
        stack = [sid]
        while stack:
            cur = stack.pop()
            cur_flag = self.states[cur].via_guidance
            for child in self._children.get(cur, ()):  # children via parent links
                cstate = self.states[child]
                want = cur_flag or child == self._guidance_sid
                if cstate.via_guidance != want:
                    cstate.via_guidance = want
                    self._refresh_dynamic_key(child, cstate)
                    stack.append(child)

    def _refresh_dynamic_key(self, sid: int, state: SearchState) -> None:
        if self.dynamic is None:
            return
        q = self.queue_by_id(self.dynamic.queue_id)
        if q.status == ACTIVE and sid in q:
            q.push(sid, self._key(q, sid, state.g), state.g)

    def _recompute_all_flags(self) -> None:
        gsid = self._guidance_sid
        memo: dict[int, bool] = {}
        for sid in self.states:
            path = []
            cur: Optional[int] = sid
            val = False
            while cur is not None:
                if cur in memo:
                    val = memo[cur]
                    break
                if cur == gsid:
                    memo[cur] = True
                    val = True
                    break
                path.append(cur)
                cur = self.states[cur].parent
            for s in path:
                memo[s] = val
        for sid, state in self.states.items():
            state.via_guidance = memo[sid]

    def brute_force_flags(self) -> dict[int, bool]:
        """Recompute every flag by walking parent chains; test oracle surface."""
        gsid = self._guidance_sid
        out = {}
        for sid in self.states:
            cur: Optional[int] = sid
            val = False
            while cur is not None:
                if cur == gsid:
                    val = True
                    break
                cur = self.states[cur].parent
            out[sid] = val
        return out

    # ------------------------------------------------------- queue admin

    def add_dynamic_queue(self, heuristic: Callable[[int], float]) -> int:
        if self.dynamic is not None:
            raise ValueError("a dynamic queue is already present")
        qid = len(self.queues)
        q = HeuristicQueue(qid, DYNAMIC, heuristic, detector=self.config.make_detector())
        self.queues.append(q)
        self._seed(q)
        self.dynamic = _DynamicSlot(qid, None, None)
        return qid

    def attach_guidance(self, guidance, dynamic_heuristic) -> int:
        """Activate a guidance configuration: flags, dynamic queue, seeding."""
        if self.dynamic is not None:
            raise ValueError("a dynamic queue is already present")
        self._guidance_sid = guidance.snapped
        guidance.created_at = self.e_curr
        self._recompute_all_flags()
        qid = self.add_dynamic_queue(dynamic_heuristic.evaluate)
        self.dynamic = _DynamicSlot(qid, dynamic_heuristic, guidance)
        return qid

    def _seed(self, queue: HeuristicQueue) -> None:
        seeds: set[int] = set()
        for q in self.queues:
            if q is not queue and q.status == ACTIVE:
                seeds.update(q.open_ids())
        for sid in seeds:
            state = self.states[sid]
            if state.closed_inadmissible:
                continue
            queue.push(sid, self._key(queue, sid, state.g), state.g)

    def set_queue_status(self, queue_id: int, status: str) -> None:
        q = self.queue_by_id(queue_id)
        if q.role != DYNAMIC:
            raise ValueError(f"cannot change status of the {q.role} queue")
        if q.status == DISCARDED:
            raise ValueError("discarded is terminal")
        if status == q.status:
            return
        if status == SUSPENDED:
            q.status = SUSPENDED  # open list and detector stay frozen
        elif status == ACTIVE:
            q.status = ACTIVE
            q.clear()
            q.detector = self.config.make_detector()
            self._seed(q)
        elif status == DISCARDED:
            q.status = DISCARDED
            q.clear()
            if self.dynamic is not None and self.dynamic.queue_id == queue_id:
                self.dynamic = None
                self._guidance_sid = None
                for state in self.states.values():
                    state.via_guidance = False
        else:
            raise ValueError(f"unknown queue status: {status!r}")

    # ----------------------------------------------------------- results

    def solution(self) -> Optional[tuple[list[int], float]]:
        if self._goal_sid is None:
            return None
        path = []
        cur: Optional[int] = self._goal_sid
        while cur is not None:
            path.append(cur)
            cur = self.states[cur].parent
        path.reverse()
        return path, self.states[self._goal_sid].g

    @property
    def solved(self) -> bool:
        return self._goal_sid is not None

    @property
    def guidance_state(self) -> Optional[int]:
        return self._guidance_sid

    def g_table(self) -> dict[int, float]:
        return {sid: st.g for sid, st in self.states.items()}


def create_planner(domain, start: int, goal_predicate: Callable[[int], bool],
                   config: PlannerConfig, baseline: Callable[[int], float]) -> Planner:
    return Planner(domain, start, goal_predicate, config, baseline)
