"""Guided vs. unguided from the same stuck planner state.

Runs the trap scenario until the baseline first reports stagnation, then
forks the planner state: one copy continues with no guidance, the other
receives the scripted configuration. Both arms resume from the identical
frontier, so the difference in progress is attributable to the guidance.

    python demos/ablation_compare.py
"""

import copy

from guidedsearch import scenarios
from guidedsearch.controller import PlannerSession, ScriptedProvider
from guidedsearch.search import BudgetExhausted

BUDGET = 6000

doc = scenarios.builtin("u_trap")
doc["config"]["expansion_budget"] = BUDGET
built = scenarios.build(doc)

session = PlannerSession(built.make_planner())
while not session.awaiting_guidance:
    session.step()
stuck_at = session.planner.e_curr
print(f"baseline stagnated after {stuck_at} expansions; forking the planner\n")

# arm A: no guidance, keep grinding
arm_a = copy.deepcopy(session.planner)
a_progress = []
try:
    while not arm_a.solved:
        rec = arm_a.expand_next()
        if rec.queue_id == 1:
            a_progress.append(rec.h)
except BudgetExhausted:
    pass

# arm B: answer the request with the scripted configuration
arm_b_session = session  # continue the original session
arm_b_session.submit_guidance(built.script[0])
b_progress = []
while not arm_b_session.finished:
    for e in arm_b_session.step():
        if e.kind == "expansion" and e.payload["queue"] == 1:
            b_progress.append(e.payload["h"])

fmt = "{:>24}  {:>16}  {:>16}"
print(fmt.format("", "no guidance", "with guidance"))
print(fmt.format("outcome",
                 "solved" if arm_a.solved else f"budget ({BUDGET})",
                 arm_b_session.outcome))
print(fmt.format("total expansions", arm_a.e_curr, arm_b_session.planner.e_curr))
print(fmt.format("best baseline h seen",
                 f"{min(a_progress):.2f}", f"{min(b_progress):.2f}"))

print("\nbaseline h over its expansions after the fork (sampled):")
print(f"{'step':>6}  {'no guidance':>12}  {'with guidance':>14}")
for i in range(0, max(len(a_progress), len(b_progress)), 40):
    a = f"{a_progress[i]:.1f}" if i < len(a_progress) else "-"
    b = f"{b_progress[i]:.1f}" if i < len(b_progress) else "(solved)"
    print(f"{i:>6}  {a:>12}  {b:>14}")
