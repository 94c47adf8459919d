"""Storyboard demo: a greedy search trapped in a cavity escapes via guidance.

The map has a U-shaped obstacle whose mouth opens away from the goal, so a
goal-distance greedy floods the cavity. The session notices the stalled
baseline, asks for guidance, and a single configuration placed past the
mouth corner routes the search around the wall. Watch the lifecycle:
request -> mount -> pass-through -> discard -> solved.

    python demos/escape_with_guidance.py
"""

from guidedsearch import scenarios
from guidedsearch.controller import ScriptedProvider, run_session

built = scenarios.build(scenarios.builtin("u_trap"))
gmap = built.domain
print(f"map {gmap.width}x{gmap.height}, start {gmap.start}, goal {gmap.goal}")
print(f"scripted guidance: {built.script}")

result = run_session(built.make_planner(), ScriptedProvider(built.script))

print(f"\noutcome: {result.outcome}, cost {result.cost:.2f}, "
      f"{result.expansions} expansions, {result.guidance_requests} request(s)")
print("\nlifecycle:")
for e in result.events:
    if e.kind == "expansion":
        continue
    detail = {k: v for k, v in e.payload.items() if k in ("queue", "reason", "snapped", "cost")}
    print(f"  [{e.payload.get('expansion', '-'):>5}] {e.kind:<20} {detail}")

# thumbnail: 3x3 blocks, path and walls win over empty space
path_cells = {(int(x), int(y)) for x, y in result.path}
guide = next(e for e in result.events if e.kind == "guidance_added")
gx, gy = (int(v) for v in guide.payload["snapped"])
print("\nmap thumbnail (3x3 blocks: * path, # wall, g guidance):")
for y0 in range(0, gmap.height, 3):
    row = []
    for x0 in range(0, gmap.width, 3):
        block = [(x, y) for x in range(x0, min(x0 + 3, gmap.width))
                 for y in range(y0, min(y0 + 3, gmap.height))]
        if (gx, gy) in block:
            row.append("g")
        elif any(c in path_cells for c in block):
            row.append("*")
        elif any(gmap.blocked[y, x] for x, y in block):
            row.append("#")
        else:
            row.append(".")
    print("".join(row))
