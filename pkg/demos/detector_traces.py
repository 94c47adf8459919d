"""How the two stagnation detectors read the same search history.

Feeds constructed observation streams to both detectors: a delay jump for
the vacillation detector, then a heuristic trace with a deep plateau, a
shallow dip and a slow drift for the min-progress detector. The shallow dip
shows the hysteresis: with a wide memory window and a tolerance margin it
never splits the detected region, but with epsilon = 0 it does.

    python demos/detector_traces.py
"""

from guidedsearch.detectors import HeuristicDetector, VacillationDetector


def ramp(a, b, n):
    return [a + (b - a) * (k + 1) / n for k in range(n)]


print("vacillation detector (omega=10, tau=30): delays jump 1 -> 45 at i=40")
det = VacillationDetector(omega=10, tau=30)
delays = [1] * 39 + [45] * 40 + [1] * 15
for i, d in enumerate(delays, start=1):
    verdict = det.observe(d)
    if verdict != "unchanged":
        print(f"  i={i:<3} delay={d:<3} mean={det.mean_delay:5.1f}  -> {verdict}")

trace = (ramp(3000, 500, 250) + [500] * 300 + ramp(500, 700, 80)
         + ramp(700, 490, 84) + ramp(490, 700, 84) + ramp(700, 600, 300))

for eps in (50.0, 0.0):
    det = HeuristicDetector(omega1=200, omega2=50, epsilon=eps)
    transitions = []
    for i, h in enumerate(trace, start=1):
        verdict = det.observe(h)
        if verdict != "unchanged":
            transitions.append((i, verdict, h))
    print(f"\nmin-progress detector (omega1=200, omega2=50, epsilon={eps:g}):")
    for i, verdict, h in transitions:
        print(f"  i={i:<4} h={h:7.1f}  -> {verdict}")
    if eps > 0:
        print("  (the 490 dip stays inside one region: hysteresis)")
    else:
        print("  (without the margin the dip splits the region)")
