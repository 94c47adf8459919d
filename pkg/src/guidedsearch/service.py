"""HTTP session service: plan interactively over a server-push event stream.

Endpoints::

    POST /sessions                  create a session from a scenario document
    POST /sessions/{id}/advance     run up to N expansions (parks on guidance)
    POST /sessions/{id}/guidance    answer / decline / preview a guidance ask
    GET  /sessions/{id}             session status snapshot
    GET  /sessions/{id}/events      SSE stream, replay from ?from= then live
    GET  /healthz                   liveness probe

Each session is a single-threaded actor guarded by a lock: one in-flight
advance at a time, never interleaved. Events are persisted per session as
newline-delimited JSON (one header line, then one line per event), flushed
as they happen, so a crashed or finished session can be replayed exactly.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Iterator, Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles

from guidedsearch import events as ev
from guidedsearch import guidance as guidance_mod
from guidedsearch import scenarios
from guidedsearch.controller import PlannerSession
from guidedsearch.search import ConfigError, InvalidStartError

STREAM_BATCH = 50           # expansion events coalesced per SSE message
TAIL_POLL_SECONDS = 0.5


class SessionRuntime:
    """One live session: planner, event log, persistence, and its lock."""

    def __init__(self, session_id: str, built: scenarios.BuiltScenario,
                 log_path: Path, header: dict, stream_batch: int = STREAM_BATCH):
        self.session_id = session_id
        self.built = built
        self.log_path = log_path
        self.stream_batch = stream_batch
        self.lock = threading.Lock()
        self.cond = threading.Condition()
        self._log_fh = open(log_path, "w")
        self._log_fh.write(ev.header_line(header) + "\n")
        self._log_fh.flush()
        self.session = PlannerSession(built.make_planner(), sink=self._persist)
        self.started = False

    def _persist(self, event: ev.SessionEvent) -> None:
        self._log_fh.write(event.to_json() + "\n")
        self._log_fh.flush()
        with self.cond:
            self.cond.notify_all()

    # ------------------------------------------------------------ queries

    @property
    def events(self) -> list[ev.SessionEvent]:
        return self.session.events

    def state(self) -> str:
        s = self.session
        if s.outcome == "solved":
            return "solved"
        if s.outcome in ("budget_exhausted", "space_exhausted"):
            return "exhausted"
        if s.outcome == "declined":
            return "declined"
        if s.awaiting_guidance:
            return "awaiting_guidance"
        return "running" if self.started else "idle"

    def snapshot(self) -> dict:
        out = {
            "session_id": self.session_id,
            "state": self.state(),
            "expansions": self.session.planner.e_curr,
            "head_seq": len(self.events),
            "scenario": self.built.doc,
            "outcome": self.session.outcome,
        }
        if self.session.awaiting_guidance:
            out["prompt"] = self.session.guidance_prompt()
        return out

    # ------------------------------------------------------------ actions

    def advance(self, max_expansions: int) -> dict:
        if not self.lock.acquire(blocking=False):
            raise HTTPException(409, "an advance is already in flight")
        try:
            if self.session.finished:
                raise HTTPException(409, f"session is {self.state()}")
            if self.session.awaiting_guidance:
                raise HTTPException(409, "session awaits guidance; answer it first")
            self.started = True
            for _ in range(max_expansions):
                if self.session.finished or self.session.awaiting_guidance:
                    break
                self.session.step()
            return {"status": self.state(),
                    "expansions": self.session.planner.e_curr,
                    "head_seq": len(self.events)}
        finally:
            self.lock.release()

    def submit(self, body: dict) -> dict:
        with self.lock:
            if self.session.finished:
                raise HTTPException(409, f"session is {self.state()}")
            if not self.session.awaiting_guidance:
                raise HTTPException(409, "session is not awaiting guidance")
            if body.get("decline"):
                self.session.submit_guidance(None)
                return {"accepted": True, "status": self.state()}
            raw = body.get("configuration")
            if not isinstance(raw, (list, tuple)) or not raw:
                raise HTTPException(400, "body needs 'configuration' or 'decline'")
            if body.get("preview"):
                return self._preview(raw)
            new = self.session.submit_guidance(raw)
            rejected = [e for e in new if e.kind == ev.GUIDANCE_REJECTED]
            if rejected:
                return {"accepted": False,
                        "reason": rejected[-1].payload["reason"],
                        "status": self.state()}
            return {"accepted": True, "status": self.state()}

    def _preview(self, raw) -> dict:
        domain = self.built.domain
        try:
            gc = guidance_mod.snap_guidance(domain, raw,
                                            self.built.config.snap_tolerance)
        except guidance_mod.GuidanceError as exc:
            return {"accepted": False, "preview": True, "reason": str(exc)}
        return {"accepted": True, "preview": True,
                "snapped": list(domain.config_of(gc.snapped)),
                "distance": gc.distance}

    # ------------------------------------------------------------- stream

    def stream(self, from_seq: int) -> Iterator[str]:
        cursor = max(0, from_seq)
        batch_size = self.stream_batch
        pending: list[ev.SessionEvent] = []

        def flush():
            nonlocal pending
            while pending:
                batch, pending = pending[:batch_size], pending[batch_size:]
                if len(batch) == 1:
                    yield f"data: {batch[0].to_json()}\n\n"
                else:
                    payload = ",".join(e.to_json() for e in batch)
                    yield f'data: {{"batch":[{payload}]}}\n\n'

        while True:
            head = len(self.events)
            while cursor < head:
                event = self.events[cursor]
                cursor += 1
                if event.kind == ev.EXPANSION:
                    pending.append(event)
                    if len(pending) >= batch_size:
                        yield from flush()
                else:
                    pending.append(event)
                    yield from flush()
                if event.kind in ev.TERMINAL_KINDS:
                    return
            yield from flush()
            if self.session.finished:
                return
            with self.cond:
                self.cond.wait(TAIL_POLL_SECONDS)
            if len(self.events) == cursor:
                yield ": keep-alive\n\n"


def replay_answers(events: list[ev.SessionEvent]) -> list[Optional[tuple[float, ...]]]:
    """Reconstruct the guidance answer stream a logged session consumed."""
    answers: list[Optional[tuple[float, ...]]] = []
    for e in events:
        if e.kind in (ev.GUIDANCE_ADDED, ev.GUIDANCE_REJECTED):
            answers.append(tuple(e.payload["raw"]))
        elif e.kind == ev.TERMINATED and e.payload.get("outcome") == "declined":
            answers.append(None)
    return answers


def replay_log(path: str | Path) -> tuple[list[ev.SessionEvent], list[ev.SessionEvent]]:
    """Re-execute a persisted log; returns (logged, replayed) event lists."""
    header, logged = ev.read_log(path)
    if header is None or "scenario" not in header:
        raise ValueError(f"{path} has no scenario header")
    built = scenarios.build(header["scenario"], header.get("config_overrides"))
    session = PlannerSession(built.make_planner(),
                             no_guidance=bool(header.get("no_guidance")))
    answers = replay_answers(logged)
    cursor = 0
    while not session.finished and len(session.events) < len(logged):
        if session.awaiting_guidance:
            if cursor >= len(answers):
                break
            session.submit_guidance(answers[cursor])
            cursor += 1
        else:
            session.step()
    return logged, session.events


def create_app(sessions_dir: str | Path | None = None,
               default_config: dict | None = None,
               ui_dir: str | Path | None = None,
               stream_batch: int = STREAM_BATCH) -> FastAPI:
    app = FastAPI(title="guidedsearch session service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    root = Path(sessions_dir) if sessions_dir else Path("sessions")
    root.mkdir(parents=True, exist_ok=True)
    registry: dict[str, SessionRuntime] = {}
    app.state.sessions_dir = root
    app.state.registry = registry

    def get_runtime(session_id: str) -> SessionRuntime:
        runtime = registry.get(session_id)
        if runtime is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return runtime

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True, "sessions": len(registry)}

    @app.post("/sessions")
    def create_session(body: dict) -> dict:
        doc = body.get("scenario")
        overrides = dict(default_config or {})
        overrides.update(body.get("config") or {})
        if doc is None:
            raise HTTPException(400, "body needs a 'scenario' document")
        try:
            built = scenarios.build(doc, overrides or None)
            built.make_planner()  # fail fast on bad start states
        except (scenarios.ScenarioError, ConfigError, InvalidStartError, ValueError) as exc:
            raise HTTPException(400, str(exc)) from exc
        session_id = uuid.uuid4().hex[:12]
        header = {"scenario": doc, "config_overrides": overrides or None,
                  "session_id": session_id}
        runtime = SessionRuntime(session_id, built,
                                 root / f"{session_id}.ndjson", header,
                                 stream_batch=stream_batch)
        registry[session_id] = runtime
        return {"session_id": session_id, "state": runtime.state()}

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str) -> dict:
        return get_runtime(session_id).snapshot()

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: dict | None = None) -> dict:
        max_expansions = int((body or {}).get("max_expansions", 1000))
        if max_expansions <= 0:
            raise HTTPException(400, "max_expansions must be positive")
        return get_runtime(session_id).advance(max_expansions)

    @app.post("/sessions/{session_id}/guidance")
    def submit_guidance(session_id: str, body: dict) -> dict:
        return get_runtime(session_id).submit(body)

    @app.get("/sessions/{session_id}/events")
    def stream_events(session_id: str, request: Request,
                      from_seq: int = Query(0, alias="from")) -> StreamingResponse:
        runtime = get_runtime(session_id)
        return StreamingResponse(runtime.stream(from_seq),
                                 media_type="text/event-stream",
                                 headers={"Cache-Control": "no-cache"})

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
