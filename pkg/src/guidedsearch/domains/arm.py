"""Planar k-link arm on a discretized joint lattice with circular obstacles."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


def _segment_circle_hit(p0: np.ndarray, p1: np.ndarray,
                        center: np.ndarray, radius: float) -> bool:
    d = p1 - p0
    len2 = float(d @ d)
    if len2 == 0.0:
        closest = p0
    else:
        t = float((center - p0) @ d) / len2
        t = min(1.0, max(0.0, t))
        closest = p0 + t * d
    off = center - closest
    return float(off @ off) <= radius * radius


class ArmDomain:
    """Arm anchored at ``base``; states are joint-index vectors.

    Joint angles live on a circle discretized into ``2*pi / joint_step``
    steps; each successor moves one joint by one step, costing the joint-space
    Euclidean distance (= joint_step). The goal is an end-effector pose.
    """

    def __init__(self, link_lengths: Sequence[float], joint_step: float,
                 obstacles: Sequence[tuple[float, float, float]] = (),
                 base: tuple[float, float] = (0.0, 0.0),
                 goal_pose: tuple[float, float] = (1.0, 0.0),
                 goal_tol: float = 0.05,
                 goal_joints: Sequence[float] | None = None):
        self.link_lengths = tuple(float(l) for l in link_lengths)
        if len(self.link_lengths) < 2:
            raise ValueError("arm needs at least 2 links")
        if any(l <= 0 for l in self.link_lengths):
            raise ValueError("link lengths must be > 0")
        n = round(TWO_PI / joint_step)
        if n < 2 or abs(n * joint_step - TWO_PI) > 1e-9:
            raise ValueError("joint_step must divide 2*pi evenly")
        self.joint_step = float(joint_step)
        self.n_steps = n
        self.k = len(self.link_lengths)
        self.obstacles = tuple((float(cx), float(cy), float(r)) for cx, cy, r in obstacles)
        self.base = (float(base[0]), float(base[1]))
        self.goal_pose = (float(goal_pose[0]), float(goal_pose[1]))
        self.goal_tol = float(goal_tol)
        self.total_reach = sum(self.link_lengths)
        self._goal_sid: int | None = None
        if goal_joints is not None:
            self._goal_sid, _ = self.snap(goal_joints)

    # ----------------------------------------------------------- state ids

    def sid(self, indices: Sequence[int]) -> int:
        out = 0
        for idx in reversed(indices):
            out = out * self.n_steps + (idx % self.n_steps)
        return out

    def indices_of(self, sid: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(sid % self.n_steps)
            sid //= self.n_steps
        return tuple(out)

    def angles_of(self, sid: int) -> np.ndarray:
        return np.array(self.indices_of(sid), dtype=float) * self.joint_step

    def config_of(self, sid: int) -> tuple[float, ...]:
        return tuple(self.angles_of(sid))

    # ---------------------------------------------------------- kinematics

    def forward_kinematics(self, angles: Sequence[float]) -> np.ndarray:
        """Positions of the base and every joint; row -1 is the end effector."""
        if len(angles) != self.k:
            raise ValueError(f"expected {self.k} joint angles")
        pts = np.empty((self.k + 1, 2))
        pts[0] = self.base
        heading = 0.0
        for i, (theta, length) in enumerate(zip(angles, self.link_lengths)):
            heading += theta
            pts[i + 1] = pts[i] + length * np.array([math.cos(heading), math.sin(heading)])
        return pts

    def end_effector(self, sid: int) -> np.ndarray:
        return self.forward_kinematics(self.angles_of(sid))[-1]

    def _collides(self, angles: Sequence[float]) -> bool:
        if not self.obstacles:
            return False
        pts = self.forward_kinematics(angles)
        for cx, cy, r in self.obstacles:
            center = np.array([cx, cy])
            for i in range(self.k):
                if _segment_circle_hit(pts[i], pts[i + 1], center, r):
                    return True
        return False

    def is_free(self, sid: int) -> bool:
        return not self._collides(self.angles_of(sid))

    # ------------------------------------------------------------ search

    def successors(self, sid: int) -> list[tuple[int, float]]:
        indices = self.indices_of(sid)
        out = []
        for j in range(self.k):
            for delta in (1, -1):
                nxt = list(indices)
                nxt[j] = (nxt[j] + delta) % self.n_steps
                nsid = self.sid(nxt)
                if self.is_free(nsid):
                    out.append((nsid, self.joint_step))
        return out

    def _wrapped_deltas(self, a: tuple[int, ...], b: tuple[int, ...]) -> np.ndarray:
        d = np.abs(np.array(a) - np.array(b))
        d = np.minimum(d, self.n_steps - d)
        return d * self.joint_step

    def heuristic_between(self, sid: int, other: int) -> float:
        d = self._wrapped_deltas(self.indices_of(sid), self.indices_of(other))
        return float(np.linalg.norm(d))

    def anchor_heuristic(self, sid: int) -> float:
        # zero (uniform-cost anchor) unless an explicit goal state is known;
        # the joint-space metric to a goal state is consistent for this
        # cost model, zero is trivially so
        if self._goal_sid is None:
            return 0.0
        return self.heuristic_between(sid, self._goal_sid)

    def goal_heuristic(self, sid: int) -> float:
        ee = self.end_effector(sid)
        dist = math.hypot(ee[0] - self.goal_pose[0], ee[1] - self.goal_pose[1])
        return dist / self.total_reach

    def goal_predicate(self, sid: int) -> bool:
        ee = self.end_effector(sid)
        return math.hypot(ee[0] - self.goal_pose[0], ee[1] - self.goal_pose[1]) <= self.goal_tol

    # ---------------------------------------------------------- guidance

    def snap(self, raw: Sequence[float]) -> tuple[int, float]:
        """Nearest lattice joint vector and its joint-space distance."""
        if len(raw) != self.k:
            raise ValueError(f"arm configuration must have {self.k} joint angles")
        indices = [int(round(float(a) / self.joint_step)) % self.n_steps for a in raw]
        snapped = np.array(indices) * self.joint_step
        d = np.abs(np.array([float(a) % TWO_PI for a in raw]) - snapped)
        d = np.minimum(d, TWO_PI - d)
        return self.sid(indices), float(np.linalg.norm(d))

    def describe(self) -> dict:
        return {
            "domain": "arm",
            "link_lengths": list(self.link_lengths),
            "joint_step": self.joint_step,
            "obstacles": [list(o) for o in self.obstacles],
            "base": list(self.base),
            "goal_pose": list(self.goal_pose),
            "goal_tol": self.goal_tol,
        }
