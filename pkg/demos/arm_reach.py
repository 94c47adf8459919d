"""Planar arm threading a two-disc gate with one guidance configuration.

A three-link arm must bring its end effector to a pose between two discs.
The end-effector-distance greedy walks into the gate and stalls; a single
elbow-up intermediate configuration frees it.

    python demos/arm_reach.py
"""

import math

from guidedsearch import scenarios
from guidedsearch.controller import ScriptedProvider, run_session


def ascii_pose(arm, angles, width=41, height=21, scale=7.0):
    """Crude workspace sketch: # obstacle, o joints, EE at X, + goal."""
    grid = [[" "] * width for _ in range(height)]

    def put(x, y, ch):
        cx = int(width // 2 + x * scale / 2)
        cy = int(height // 2 - y * scale / 2)
        if 0 <= cx < width and 0 <= cy < height:
            grid[cy][cx] = ch

    for cx, cy, r in arm.obstacles:
        steps = 24
        for k in range(steps):
            a = 2 * math.pi * k / steps
            put(cx + r * math.cos(a), cy + r * math.sin(a), "#")
    pts = arm.forward_kinematics(angles)
    for i in range(len(pts) - 1):
        for t in range(8):
            p = pts[i] + (pts[i + 1] - pts[i]) * t / 7
            put(p[0], p[1], "o" if t == 0 else "-")
    put(pts[-1][0], pts[-1][1], "X")
    put(arm.goal_pose[0], arm.goal_pose[1], "+")
    return "\n".join("".join(row) for row in grid)


built = scenarios.build(scenarios.builtin("arm_demo"))
arm = built.domain
deg = [round(math.degrees(a), 1) for a in arm.angles_of(built.start)]
print(f"{arm.k}-link arm, step {math.degrees(arm.joint_step):.0f} deg, "
      f"start joints {deg}, goal pose {arm.goal_pose}")
print(ascii_pose(arm, arm.angles_of(built.start)))

result = run_session(built.make_planner(), ScriptedProvider(built.script))
print(f"\noutcome: {result.outcome}, joint-space cost {result.cost:.3f} rad, "
      f"{result.expansions} expansions, {result.guidance_requests} request(s)")

for e in result.events:
    if e.kind in ("stagnation_entered", "guidance_requested", "guidance_added",
                  "queue_discarded", "queue_suspended", "solution"):
        brief = {k: v for k, v in e.payload.items() if k in ("queue", "reason")}
        print(f"  [{e.payload.get('expansion', '-'):>6}] {e.kind} {brief}")

final = [math.radians(math.degrees(v)) for v in result.path[-1]]
print("\nfinal pose:")
print(ascii_pose(arm, final))
