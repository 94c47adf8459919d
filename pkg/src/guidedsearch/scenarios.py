"""Scenario documents: parseable descriptions of a planning problem.

A scenario is a JSON-safe dict with a ``domain`` discriminator:

grid::

    {"domain": "grid", "map": "<text block>", "config": {...},
     "guidance_script": [[x, y], ...]}

arm::

    {"domain": "arm", "link_lengths": [...], "joint_step": <rad>,
     "base": [x, y], "obstacles": [[cx, cy, r], ...], "start": [<rad>...],
     "goal_pose": [x, y], "goal_tol": 0.05, "config": {...},
     "guidance_script": [[<rad>...], ...]}

Angle fields accept a ``_deg`` suffix variant for authoring convenience.
``config`` carries planner-parameter overrides; guidance vectors are in
domain units (cells / radians).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from guidedsearch.domains import ArmDomain, GridMap, u_trap_map
from guidedsearch.search import ConfigError, Planner, PlannerConfig


class ScenarioError(ValueError):
    """Scenario document failed to parse or validate."""


@dataclass
class BuiltScenario:
    domain: object
    start: int
    goal_predicate: Callable[[int], bool]
    config: PlannerConfig
    baseline: Callable[[int], float]
    script: list[tuple[float, ...]]
    doc: dict

    def make_planner(self) -> Planner:
        return Planner(self.domain, self.start, self.goal_predicate,
                       self.config, self.baseline)


def _angles(doc: dict, key: str, required: bool = False):
    if key in doc:
        return doc[key]
    if f"{key}_deg" in doc:
        val = doc[f"{key}_deg"]
        if isinstance(val, (int, float)):
            return math.radians(val)
        return [math.radians(v) for v in val]
    if required:
        raise ScenarioError(f"scenario is missing {key!r}")
    return None


def build(doc: dict, config_overrides: dict | None = None) -> BuiltScenario:
    """Validate a scenario document and construct its domain and config."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be an object")
    kind = doc.get("domain")
    merged = dict(doc.get("config") or {})
    if config_overrides:
        merged.update(config_overrides)
    try:
        config = PlannerConfig(**merged)
    except TypeError as exc:
        raise ScenarioError(f"bad config field: {exc}") from exc
    except ConfigError as exc:
        raise ScenarioError(str(exc)) from exc

    script = [tuple(float(v) for v in entry)
              for entry in (doc.get("guidance_script") or [])]

    if kind == "grid":
        text = doc.get("map")
        if not isinstance(text, str):
            raise ScenarioError("grid scenario needs a 'map' text block")
        try:
            gmap = GridMap.from_text(text)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
        return BuiltScenario(gmap, gmap.start_id, gmap.goal_predicate, config,
                             gmap.goal_heuristic, script, doc)

    if kind == "arm":
        try:
            joint_step = _angles(doc, "joint_step", required=True)
            start_angles = _angles(doc, "start", required=True)
            goal_joints = _angles(doc, "goal_joints")
            arm = ArmDomain(
                link_lengths=doc.get("link_lengths", ()),
                joint_step=joint_step,
                obstacles=[tuple(o) for o in doc.get("obstacles", ())],
                base=tuple(doc.get("base", (0.0, 0.0))),
                goal_pose=tuple(doc.get("goal_pose", (1.0, 0.0))),
                goal_tol=float(doc.get("goal_tol", 0.05)),
                goal_joints=goal_joints,
            )
        except (ValueError, TypeError) as exc:
            raise ScenarioError(str(exc)) from exc
        start_sid, dist = arm.snap(start_angles)
        if dist > 1e-9:
            raise ScenarioError("start joints are not on the lattice")
        if not arm.is_free(start_sid):
            raise ScenarioError(
                f"start configuration {arm.config_of(start_sid)} is in collision")
        return BuiltScenario(arm, start_sid, arm.goal_predicate, config,
                             arm.goal_heuristic, script, doc)

    raise ScenarioError(f"unknown domain: {kind!r}")


def load(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file does not parse: {exc}") from exc


def dump(doc: dict, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


# --------------------------------------------------------------- builtins

def u_trap(*, greedy: bool = True) -> dict:
    """Cavity trap: a greedy goal-distance descent floods the cavity; one
    guidance placed past the mouth corner routes the search around."""
    gmap = u_trap_map()
    return {
        "name": "u_trap",
        "domain": "grid",
        "map": gmap.to_text(),
        "config": {
            # near-greedy per-queue behavior: w2 must leave the dynamic
            # queue headroom, its keys carry the goal-via-guidance offset
            "w1": 1000.0 if greedy else 10.0,
            "w2": 50.0,
            "detector_kind": "heuristic_based",
            "omega1": 60, "omega2": 15, "epsilon": 2.0,
            "omega": 10, "tau": 30.0,
            "snap_tolerance": 1.5,
        },
        "guidance_script": [[10.0, 8.0]],
    }


def u_trap_bad_first() -> dict:
    """Cavity trap plus a sealed room: the first scripted guidance sits in
    the unreachable room (valid but useless), the second one helps."""
    gmap = u_trap_map()
    # sealed room in the lower-left open area: hollow core, no way in
    gmap.blocked[80:95, 2:11] = True
    gmap.blocked[84:91, 5:8] = False
    doc = u_trap()
    doc["name"] = "u_trap_bad_first"
    doc["map"] = gmap.to_text()
    doc["guidance_script"] = [[6.0, 87.0], [10.0, 8.0]]
    return doc


def twin_traps() -> dict:
    """Two successive cavities along the route; one far guidance placed past
    the second trap serves both stagnations (suspend, then resume)."""
    width, height = 150, 64
    blocked = np.zeros((height, width), dtype=bool)
    # first trap: mouth opens left; a 2-cell gap at the top-right corner
    # gives the toward-guidance march a descending way out while the
    # goal-greedy grind still has ~180 better-scored cells inside
    blocked[14, 34:59] = True
    blocked[50, 34:62] = True
    blocked[14:51, 61] = True
    # second trap further along, same corner gap
    blocked[8, 76:109] = True
    blocked[56, 76:112] = True
    blocked[8:57, 111] = True
    gmap = GridMap(width, height, blocked, start=(40, 32), goal=(140, 32))
    return {
        "name": "twin_traps",
        "domain": "grid",
        "map": gmap.to_text(),
        "config": {
            "w1": 1000.0,
            "w2": 50.0,
            "detector_kind": "heuristic_based",
            "omega1": 60, "omega2": 15, "epsilon": 2.0,
            "snap_tolerance": 1.5,
        },
        "guidance_script": [[118.0, 4.0]],
    }


def arm_demo() -> dict:
    """Three-link arm threading a two-disc gate; the end-effector greedy
    stalls at the gate and one scripted elbow-up configuration frees it."""
    deg = math.radians
    return {
        "name": "arm_demo",
        "domain": "arm",
        "link_lengths": [1.0, 0.8, 0.6],
        "joint_step_deg": 10.0,
        "base": [0.0, 0.0],
        "obstacles": [[1.15, 0.55, 0.38], [0.1, 1.3, 0.35]],
        "start_deg": [0.0, 0.0, 0.0],
        "goal_pose": [0.9, 1.1],
        "goal_tol": 0.08,
        "config": {
            "w1": 30.0, "w2": 5.0,
            "detector_kind": "heuristic_based",
            "omega1": 40, "omega2": 10, "epsilon": 0.02,
            "snap_tolerance": 0.5,
            "expansion_budget": 60000,
        },
        "guidance_script": [[deg(60.0), deg(-30.0), deg(-30.0)]],
    }


_BUILTINS = {
    "u_trap": u_trap,
    "u_trap_bad_first": u_trap_bad_first,
    "twin_traps": twin_traps,
    "arm_demo": arm_demo,
}


def builtin(name: str) -> dict:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ScenarioError(
            f"unknown builtin scenario {name!r}; have {sorted(_BUILTINS)}") from None


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)
