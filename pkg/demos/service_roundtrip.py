"""Drive a session over HTTP: create, advance, answer guidance, stream events.

Starts the service in-process, then plays the human: advances until the
session parks, previews a click on an obstacle (rejected), then submits the
helpful configuration and tails the event stream to the solution.

    python demos/service_roundtrip.py
"""

import json
import threading
import time

import httpx
import uvicorn

from guidedsearch import scenarios
from guidedsearch.service import create_app

PORT = 8893
app = create_app(sessions_dir="/tmp/guidedsearch-demo-sessions")
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=PORT,
                                       log_level="error"))
threading.Thread(target=server.run, daemon=True).start()
base = f"http://127.0.0.1:{PORT}"
while True:
    try:
        httpx.get(f"{base}/healthz", timeout=0.2)
        break
    except httpx.TransportError:
        time.sleep(0.05)

client = httpx.Client(base_url=base, timeout=30.0)
doc = scenarios.builtin("u_trap")
sid = client.post("/sessions", json={"scenario": doc}).json()["session_id"]
print(f"session {sid} created")

status = client.post(f"/sessions/{sid}/advance", json={"max_expansions": 100000}).json()
print(f"advance -> {status['status']} after {status['expansions']} expansions")

prompt = client.get(f"/sessions/{sid}").json()["prompt"]
print(f"planner is stuck near {prompt['min_h_state']} (h={prompt['min_h']:.1f})")

bad = client.post(f"/sessions/{sid}/guidance",
                  json={"configuration": [60.0, 14.0], "preview": True}).json()
print(f"preview click on the wall -> accepted={bad['accepted']} ({bad['reason']})")

good = client.post(f"/sessions/{sid}/guidance",
                   json={"configuration": [10.0, 8.0]}).json()
print(f"submit (10, 8) -> accepted={good['accepted']}")

status = client.post(f"/sessions/{sid}/advance", json={"max_expansions": 100000}).json()
print(f"advance -> {status['status']}")

kinds = {}
solution = None
with client.stream("GET", f"/sessions/{sid}/events", params={"from": 0}) as resp:
    for line in resp.iter_lines():
        if not line.startswith("data: "):
            continue
        obj = json.loads(line[len("data: "):])
        batch = obj["batch"] if "batch" in obj else [obj]
        for event in batch:
            kinds[event["kind"]] = kinds.get(event["kind"], 0) + 1
            if event["kind"] == "solution":
                solution = event["payload"]

print(f"\nstreamed events by kind: {kinds}")
print(f"solution cost {solution['cost']:.2f}, path length {len(solution['path'])}")
server.should_exit = True
