"""Append-only session events with canonical serialization.

Every observable session transition becomes one event with a gap-free,
per-session sequence number. Serialization is canonical JSON (sorted keys,
no whitespace), so identical sessions produce byte-identical logs and a
persisted log can be replayed and diffed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

EXPANSION = "expansion"
STAGNATION_ENTERED = "stagnation_entered"
STAGNATION_EXITED = "stagnation_exited"
GUIDANCE_REQUESTED = "guidance_requested"
GUIDANCE_ADDED = "guidance_added"
GUIDANCE_REJECTED = "guidance_rejected"
QUEUE_SUSPENDED = "queue_suspended"
QUEUE_RESUMED = "queue_resumed"
QUEUE_DISCARDED = "queue_discarded"
SOLUTION = "solution"
TERMINATED = "terminated"

KINDS = frozenset({
    EXPANSION, STAGNATION_ENTERED, STAGNATION_EXITED, GUIDANCE_REQUESTED,
    GUIDANCE_ADDED, GUIDANCE_REJECTED, QUEUE_SUSPENDED, QUEUE_RESUMED,
    QUEUE_DISCARDED, SOLUTION, TERMINATED,
})

TERMINAL_KINDS = frozenset({SOLUTION, TERMINATED})


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps({"seq": self.seq, "kind": self.kind, "payload": self.payload},
                          sort_keys=True, separators=(",", ":"))


def event_from_json(line: str) -> SessionEvent:
    obj = json.loads(line)
    return SessionEvent(seq=obj["seq"], kind=obj["kind"], payload=obj["payload"])


def header_line(header: dict) -> str:
    return json.dumps({"header": header}, sort_keys=True, separators=(",", ":"))


def write_log(path: str | Path, header: dict, events: Iterable[SessionEvent]) -> None:
    with open(path, "w") as fh:
        fh.write(header_line(header) + "\n")
        for ev in events:
            fh.write(ev.to_json() + "\n")


def read_log(path: str | Path) -> tuple[Optional[dict], list[SessionEvent]]:
    header = None
    events = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            if i == 0 and '"header"' in line:
                obj = json.loads(line)
                if "header" in obj:
                    header = obj["header"]
                    continue
            events.append(event_from_json(line))
    return header, events
