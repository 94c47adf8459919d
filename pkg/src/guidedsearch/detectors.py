"""Per-queue stagnation detectors.

Two interchangeable detectors decide when a search queue has stopped making
progress toward the goal:

* :class:`VacillationDetector` watches the moving average of expansion
  delays (how long generated states sit around before being expanded).
* :class:`HeuristicDetector` watches whether the minimum heuristic value
  seen recently has improved by more than a threshold.

Both are pure sequential state machines: feed them one observation per
expansion of their queue and they answer ``entered`` / ``exited`` /
``unchanged``.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Sequence

ENTERED = "entered"
EXITED = "exited"
UNCHANGED = "unchanged"


def kappa(history: Sequence[float], i: int, omega: int) -> float:
    """Minimum value over the window ``history[i-omega .. i]`` (1-based, inclusive).

    ``history`` holds one value per expansion, ``history[0]`` being expansion 1.
    Raises ``ValueError`` when the window reaches before the first expansion.
    """
    if omega < 0:
        raise ValueError("omega must be >= 0")
    lo = i - omega
    if lo < 1 or i > len(history):
        raise ValueError(f"insufficient history for kappa({i}, {omega})")
    return min(history[lo - 1 : i])


class VacillationDetector:
    """Expansion-delay detector.

    Enters a stagnation region when the mean delay over a full window of the
    last ``omega`` expansions reaches ``tau``; exits when every delay in the
    window equals one.
    """

    def __init__(self, omega: int, tau: float):
        if omega <= 0:
            raise ValueError("omega must be > 0")
        if tau <= 1:
            raise ValueError("tau must be > 1")
        self.omega = omega
        self.tau = tau
        self.window: deque[int] = deque(maxlen=omega)
        self._sum = 0
        self.in_stagnation = False

    @property
    def mean_delay(self) -> float:
        if not self.window:
            return 0.0
        return self._sum / len(self.window)

    def observe(self, delta_e: int) -> str:
        if delta_e < 1:
            raise ValueError(f"expansion delay must be >= 1, got {delta_e}")
        if len(self.window) == self.window.maxlen:
            self._sum -= self.window[0]
        self.window.append(delta_e)
        self._sum += delta_e
        n = len(self.window)
        if not self.in_stagnation:
            # entry requires a full window so session start cannot trigger
            if n == self.omega and self._sum >= self.tau * n:
                self.in_stagnation = True
                return ENTERED
        else:
            if self._sum == n:  # all delays exactly 1
                self.in_stagnation = False
                return EXITED
        return UNCHANGED


class _WindowMin:
    """Lazy min-heap over a sliding index window; amortized O(log n) per op."""

    def __init__(self) -> None:
        self._heap: list[tuple[float, int]] = []

    def push(self, value: float, index: int) -> None:
        heapq.heappush(self._heap, (value, index))

    def min_since(self, lo: int) -> float:
        while self._heap and self._heap[0][1] < lo:
            heapq.heappop(self._heap)
        if not self._heap:
            raise ValueError("window is empty")
        return self._heap[0][0]


class HeuristicDetector:
    """Minimum-heuristic-progress detector.

    In stagnation whenever the minimum h seen over the last ``omega1``
    expansions is no more than ``epsilon`` below the minimum over the same
    window excluding the most recent ``omega2`` expansions. Verdicts start
    once ``omega1`` observations have arrived.
    """

    def __init__(self, omega1: int, omega2: int, epsilon: float):
        if not omega1 > omega2 > 0:
            raise ValueError("omega1 must exceed omega2")
        if epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        self.omega1 = omega1
        self.omega2 = omega2
        self.epsilon = epsilon
        self.count = 0
        self.in_stagnation = False
        self._recent: _WindowMin = _WindowMin()
        self._older: _WindowMin = _WindowMin()
        self._pending: deque[tuple[float, int]] = deque()
        self.last_min: float | None = None

    def observe(self, h_value: float) -> str:
        if h_value < 0:
            raise ValueError(f"heuristic value must be >= 0, got {h_value}")
        self.count += 1
        i = self.count
        self._recent.push(h_value, i)
        self._pending.append((h_value, i))
        # values older than omega2 observations feed the lagged window
        while self._pending and self._pending[0][1] <= i - self.omega2:
            v, j = self._pending.popleft()
            self._older.push(v, j)
        if i < self.omega1:
            return UNCHANGED
        lo = max(1, i - self.omega1)
        k_full = self._recent.min_since(lo)
        k_lagged = self._older.min_since(lo)
        self.last_min = k_full
        stagnating = k_full >= k_lagged - self.epsilon
        if stagnating != self.in_stagnation:
            self.in_stagnation = stagnating
            return ENTERED if stagnating else EXITED
        return UNCHANGED


def make_detector(kind: str, *, omega: int, tau: float, omega1: int, omega2: int,
                  epsilon: float) -> VacillationDetector | HeuristicDetector:
    if kind == "vacillation":
        return VacillationDetector(omega, tau)
    if kind == "heuristic_based":
        return HeuristicDetector(omega1, omega2, epsilon)
    raise ValueError(f"unknown detector kind: {kind!r}")
