"""8-connected occupancy grid with unit/diagonal move costs."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)

# straights first, then diagonals; fixed order keeps traces reproducible
_MOVES = (
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2),
)


class GridMap:
    """Occupancy grid domain. Cells are (x, y), ids are y * width + x."""

    def __init__(self, width: int, height: int, blocked: np.ndarray | None = None,
                 start: tuple[int, int] = (0, 0), goal: tuple[int, int] = (0, 0)):
        if width < 1 or height < 1:
            raise ValueError("grid dimensions must be >= 1")
        self.width = width
        self.height = height
        if blocked is None:
            blocked = np.zeros((height, width), dtype=bool)
        blocked = np.asarray(blocked, dtype=bool)
        if blocked.shape != (height, width):
            raise ValueError(f"blocked must have shape {(height, width)}")
        self.blocked = blocked
        self.start = (int(start[0]), int(start[1]))
        self.goal = (int(goal[0]), int(goal[1]))
        for name, (x, y) in (("start", self.start), ("goal", self.goal)):
            if not self.in_bounds(x, y):
                raise ValueError(f"{name} cell {(x, y)} outside the map")
            if self.blocked[y, x]:
                raise ValueError(f"{name} cell {(x, y)} is blocked")

    # ------------------------------------------------------------- text io

    @classmethod
    def from_text(cls, text: str) -> "GridMap":
        """Parse a map block: '#' blocked, '.' free, 'S' start, 'T' goal."""
        rows = [line for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty map text")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("map rows must have equal length")
        height = len(rows)
        blocked = np.zeros((height, width), dtype=bool)
        start = goal = None
        for y, row in enumerate(rows):
            for x, ch in enumerate(row):
                if ch == "#":
                    blocked[y, x] = True
                elif ch == "S":
                    if start is not None:
                        raise ValueError("multiple start cells")
                    start = (x, y)
                elif ch == "T":
                    if goal is not None:
                        raise ValueError("multiple goal cells")
                    goal = (x, y)
                elif ch != ".":
                    raise ValueError(f"unexpected map character {ch!r}")
        if start is None or goal is None:
            raise ValueError("map must contain exactly one 'S' and one 'T'")
        return cls(width, height, blocked, start, goal)

    def to_text(self) -> str:
        rows = []
        for y in range(self.height):
            row = []
            for x in range(self.width):
                if (x, y) == self.start:
                    row.append("S")
                elif (x, y) == self.goal:
                    row.append("T")
                else:
                    row.append("#" if self.blocked[y, x] else ".")
            rows.append("".join(row))
        return "\n".join(rows)

    # ----------------------------------------------------------- state ids

    def sid(self, x: int, y: int) -> int:
        return y * self.width + x

    def cell_of(self, sid: int) -> tuple[int, int]:
        return sid % self.width, sid // self.width

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, sid: int) -> bool:
        x, y = self.cell_of(sid)
        return self.in_bounds(x, y) and not self.blocked[y, x]

    @property
    def start_id(self) -> int:
        return self.sid(*self.start)

    @property
    def goal_id(self) -> int:
        return self.sid(*self.goal)

    # ------------------------------------------------------------ search

    def successors(self, sid: int) -> list[tuple[int, float]]:
        x, y = self.cell_of(sid)
        blocked = self.blocked
        out = []
        for dx, dy, cost in _MOVES:
            nx, ny = x + dx, y + dy
            if not self.in_bounds(nx, ny) or blocked[ny, nx]:
                continue
            if dx and dy:
                # no corner cutting: both adjacent straights must be free
                if blocked[y, x + dx] or blocked[y + dy, x]:
                    continue
            out.append((ny * self.width + nx, cost))
        return out

    def heuristic_between(self, sid: int, other: int) -> float:
        x0, y0 = self.cell_of(sid)
        x1, y1 = self.cell_of(other)
        return math.hypot(x1 - x0, y1 - y0)

    def anchor_heuristic(self, sid: int) -> float:
        return self.heuristic_between(sid, self.goal_id)

    def goal_heuristic(self, sid: int) -> float:
        return self.heuristic_between(sid, self.goal_id)

    def goal_predicate(self, sid: int) -> bool:
        return sid == self.goal_id

    # ---------------------------------------------------------- guidance

    def snap(self, raw: Sequence[float]) -> tuple[int, float]:
        """Nearest in-bounds cell and its distance to the raw point."""
        if len(raw) != 2:
            raise ValueError("grid configuration must be (x, y)")
        rx, ry = float(raw[0]), float(raw[1])
        x = min(self.width - 1, max(0, int(math.floor(rx + 0.5))))
        y = min(self.height - 1, max(0, int(math.floor(ry + 0.5))))
        return self.sid(x, y), math.hypot(rx - x, ry - y)

    def config_of(self, sid: int) -> tuple[float, ...]:
        x, y = self.cell_of(sid)
        return (float(x), float(y))

    def describe(self) -> dict:
        return {"domain": "grid", "map": self.to_text()}


def u_trap_map(width: int = 120, height: int = 120, *,
               wall_left: int = 14, wall_right: int = 106,
               wall_top: int = 14, wall_bottom: int = 106,
               start: tuple[int, int] | None = None,
               goal: tuple[int, int] | None = None) -> GridMap:
    """Map with a U-shaped obstacle opening away from the goal.

    The cavity mouth faces left; the goal sits to the right behind the
    closed side, so a greedy goal-distance descent from a start inside the
    mouth floods the cavity instead of walking around.
    """
    blocked = np.zeros((height, width), dtype=bool)
    blocked[wall_top, wall_left:wall_right + 1] = True
    blocked[wall_bottom, wall_left:wall_right + 1] = True
    blocked[wall_top:wall_bottom + 1, wall_right] = True
    mid = (wall_top + wall_bottom) // 2
    if start is None:
        start = (wall_left + 10, mid)
    if goal is None:
        goal = (min(width - 5, wall_right + 9), mid)
    return GridMap(width, height, blocked, start, goal)
