"""Outer guidance loop: expand, detect stagnation, ask, re-plan.

The session runs the planner until its baseline queue reports stagnation,
then brings guidance into play: a previously suspended dynamic queue is
resumed if one exists, otherwise the session parks and asks its provider
for a fresh configuration. While guided, the session expands until the
baseline recovers or the dynamic queue itself stagnates, then applies the
removal rule:

* dynamic queue stagnating  -> discard (the guidance is not useful),
* guidance passed through   -> discard (it cannot help again),
* otherwise                 -> suspend (it may be useful in the future).

Stagnation is judged independently per queue. Guidance never blocks the
underlying search: a solvable instance solves within budget no matter what
configurations are supplied.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from guidedsearch import events as ev
from guidedsearch import guidance as guidance_mod
from guidedsearch.search import (
    ACTIVE,
    SUSPENDED,
    BudgetExhausted,
    Planner,
    SpaceExhausted,
)

REASON_UNHELPFUL = "guidance is not useful"
REASON_PASSED_THROUGH = "will not be useful in future"
REASON_MAY_HELP_LATER = "may be useful in future"

PHASE_PLAIN = "plain"
PHASE_AWAITING = "awaiting_guidance"
PHASE_GUIDED = "guided"

OUTCOME_SOLVED = "solved"
OUTCOME_BUDGET = "budget_exhausted"
OUTCOME_SPACE = "space_exhausted"
OUTCOME_DECLINED = "declined"


@dataclass
class SessionResult:
    outcome: str
    path: Optional[list[tuple[float, ...]]]
    cost: Optional[float]
    expansions: int
    guidance_requests: int
    guidances_used: int
    guidances_discarded_unhelpful: int
    events: list[ev.SessionEvent] = field(repr=False, default_factory=list)


class ScriptedProvider:
    """Answers the i-th guidance request with the i-th scripted entry;
    an exhausted script declines."""

    def __init__(self, entries: Sequence[Sequence[float]]):
        self.entries = [tuple(float(v) for v in e) for e in entries]
        self.cursor = 0

    def request(self, prompt: dict) -> Optional[tuple[float, ...]]:
        if self.cursor >= len(self.entries):
            return None
        entry = self.entries[self.cursor]
        self.cursor += 1
        return entry


class PlannerSession:
    """Incremental driver around one planner; emits the event stream."""

    def __init__(self, planner: Planner, *, no_guidance: bool = False,
                 recent_window: int = 25,
                 sink: Optional[Callable[[ev.SessionEvent], None]] = None):
        self.planner = planner
        self.no_guidance = no_guidance
        self.recent_window = recent_window
        self.events: list[ev.SessionEvent] = []
        self._sink = sink
        self.phase = PHASE_PLAIN
        self.outcome: Optional[str] = None
        self.guidance_requests = 0
        self.guidances_used = 0
        self.guidances_discarded_unhelpful = 0
        cfg = planner.config
        track = max(recent_window,
                    cfg.omega1 if cfg.detector_kind == "heuristic_based" else cfg.omega)
        self._recent: dict[int, deque[tuple[int, float]]] = {}
        self._track_len = track

    # ------------------------------------------------------------- events

    def _emit(self, kind: str, **payload) -> ev.SessionEvent:
        event = ev.SessionEvent(len(self.events), kind, payload)
        self.events.append(event)
        if self._sink is not None:
            self._sink(event)
        return event

    # ------------------------------------------------------------- status

    @property
    def finished(self) -> bool:
        return self.outcome is not None

    @property
    def awaiting_guidance(self) -> bool:
        return self.phase == PHASE_AWAITING

    def _baseline_stagnating(self) -> bool:
        det = self.planner.baseline.detector
        return det is not None and det.in_stagnation

    def _dynamic_queue(self):
        slot = self.planner.dynamic
        return None if slot is None else self.planner.queue_by_id(slot.queue_id)

    def _dynamic_stagnating(self) -> bool:
        q = self._dynamic_queue()
        return q is not None and q.detector is not None and q.detector.in_stagnation

    def guidance_prompt(self) -> dict:
        """Where the planner is stuck: the stagnating queue's recent best
        state plus its latest expansions."""
        planner = self.planner
        qid = planner.baseline.queue_id
        recent = self._recent.get(qid, deque())
        min_state = None
        min_h = None
        if recent:
            sid, h = min(recent, key=lambda t: (t[1], t[0]))
            min_state = list(planner.domain.config_of(sid))
            min_h = h
        tail = list(recent)[-self.recent_window:]
        return {
            "queue": qid,
            "min_h_state": min_state,
            "min_h": min_h,
            "recent": [list(planner.domain.config_of(sid)) for sid, _ in tail],
            "expansion": planner.e_curr,
        }

    # -------------------------------------------------------------- steps

    def step(self) -> list[ev.SessionEvent]:
        """One expansion plus any controller transitions it triggers."""
        if self.finished:
            raise RuntimeError("session finished")
        if self.phase == PHASE_AWAITING:
            raise RuntimeError("session is awaiting guidance")
        mark = len(self.events)

        if not self.no_guidance:
            self._control_transitions()
            if self.phase == PHASE_AWAITING:
                return self.events[mark:]

        try:
            rec = self.planner.expand_next()
        except BudgetExhausted:
            self._finish(OUTCOME_BUDGET)
            return self.events[mark:]
        except SpaceExhausted:
            self._finish(OUTCOME_SPACE)
            return self.events[mark:]

        dom = self.planner.domain
        self._recent.setdefault(rec.queue_id, deque(maxlen=self._track_len)) \
            .append((rec.state, rec.h))
        self._emit(ev.EXPANSION, queue=rec.queue_id, role=rec.role,
                   state=list(dom.config_of(rec.state)), g=rec.g, h=rec.h,
                   delta_e=rec.delta_e,
                   generated=[list(dom.config_of(s)) for s in rec.generated],
                   stagnating=rec.in_stagnation,
                   expansion=self.planner.e_curr)
        if rec.verdict == "entered":
            self._emit(ev.STAGNATION_ENTERED, queue=rec.queue_id,
                       metric=self._metric(rec), expansion=self.planner.e_curr)
        elif rec.verdict == "exited":
            self._emit(ev.STAGNATION_EXITED, queue=rec.queue_id,
                       metric=self._metric(rec), expansion=self.planner.e_curr)

        if self.planner.solved:
            path, cost = self.planner.solution()
            self._emit(ev.SOLUTION,
                       path=[list(dom.config_of(s)) for s in path],
                       cost=cost, expansions=self.planner.e_curr)
            self.outcome = OUTCOME_SOLVED
        return self.events[mark:]

    def _metric(self, rec) -> float:
        det = self.planner.queue_by_id(rec.queue_id).detector
        if det is None:
            return 0.0
        if hasattr(det, "mean_delay"):
            return det.mean_delay
        return det.last_min if det.last_min is not None else rec.h

    def _control_transitions(self) -> None:
        planner = self.planner
        if self.phase == PHASE_GUIDED:
            dyn = self._dynamic_queue()
            if dyn is None:
                self.phase = PHASE_PLAIN
            elif self._dynamic_stagnating():
                self._remove_dynamic(dyn)
            elif not self._baseline_stagnating():
                self._remove_dynamic(dyn)
        if self.phase == PHASE_PLAIN and self._baseline_stagnating():
            slot = planner.dynamic
            if slot is not None:
                q = planner.queue_by_id(slot.queue_id)
                if q.status == SUSPENDED:
                    planner.set_queue_status(q.queue_id, ACTIVE)
                    self._emit(ev.QUEUE_RESUMED, queue=q.queue_id,
                               expansion=planner.e_curr)
                    self.phase = PHASE_GUIDED
                return
            self.guidance_requests += 1
            self._emit(ev.GUIDANCE_REQUESTED, **self.guidance_prompt())
            self.phase = PHASE_AWAITING

    def _remove_dynamic(self, queue) -> None:
        if self._dynamic_stagnating():
            reason = REASON_UNHELPFUL
            self.guidances_discarded_unhelpful += 1
            status = "discarded"
        elif guidance_mod.guidance_reached(self.planner.dynamic.heuristic):
            reason = REASON_PASSED_THROUGH
            status = "discarded"
        else:
            reason = REASON_MAY_HELP_LATER
            status = "suspended"
        self.planner.set_queue_status(queue.queue_id, status)
        kind = ev.QUEUE_DISCARDED if status == "discarded" else ev.QUEUE_SUSPENDED
        self._emit(kind, queue=queue.queue_id, reason=reason,
                   expansion=self.planner.e_curr)
        self.phase = PHASE_PLAIN

    # ----------------------------------------------------------- guidance

    def submit_guidance(self, raw: Optional[Sequence[float]]) -> list[ev.SessionEvent]:
        if self.finished:
            raise RuntimeError("session finished")
        if self.phase != PHASE_AWAITING:
            raise RuntimeError("session is not awaiting guidance")
        mark = len(self.events)
        if raw is None:
            self._emit(ev.TERMINATED, outcome=OUTCOME_DECLINED,
                       expansion=self.planner.e_curr)
            self.outcome = OUTCOME_DECLINED
            return self.events[mark:]
        try:
            qid, gc = guidance_mod.attach(self.planner, raw)
        except guidance_mod.GuidanceError as exc:
            self._emit(ev.GUIDANCE_REJECTED, raw=[float(v) for v in raw],
                       reason=str(exc),
                       error=("invalid" if isinstance(exc, guidance_mod.InvalidGuidanceError)
                              else "out_of_tolerance"))
            return self.events[mark:]
        dom = self.planner.domain
        self.guidances_used += 1
        self._emit(ev.GUIDANCE_ADDED, queue=qid, raw=list(gc.raw),
                   snapped=list(dom.config_of(gc.snapped)), distance=gc.distance,
                   expansion=self.planner.e_curr)
        self.phase = PHASE_GUIDED
        return self.events[mark:]

    # ------------------------------------------------------------- finish

    def _finish(self, outcome: str) -> None:
        self._emit(ev.TERMINATED, outcome=outcome, expansion=self.planner.e_curr)
        self.outcome = outcome

    def result(self) -> SessionResult:
        if not self.finished:
            raise RuntimeError("session still running")
        path = cost = None
        if self.outcome == OUTCOME_SOLVED:
            sids, cost = self.planner.solution()
            path = [tuple(self.planner.domain.config_of(s)) for s in sids]
        return SessionResult(
            outcome=self.outcome, path=path, cost=cost,
            expansions=self.planner.e_curr,
            guidance_requests=self.guidance_requests,
            guidances_used=self.guidances_used,
            guidances_discarded_unhelpful=self.guidances_discarded_unhelpful,
            events=list(self.events),
        )


def run_session(planner: Planner, provider, *, no_guidance: bool = False,
                sink: Optional[Callable[[ev.SessionEvent], None]] = None) -> SessionResult:
    """Drive a session to completion with a blocking guidance provider."""
    session = PlannerSession(planner, no_guidance=no_guidance, sink=sink)
    while not session.finished:
        if session.awaiting_guidance:
            session.submit_guidance(provider.request(session.guidance_prompt()))
        else:
            session.step()
    return session.result()
