from __future__ import annotations

import math

import numpy as np
import pytest

from guidedsearch.domains import ArmDomain, GridMap, u_trap_map

SQRT2 = math.sqrt(2.0)


def empty_grid(w=5, h=5, start=(0, 0), goal=None):
    return GridMap(w, h, start=start, goal=goal or (w - 1, h - 1))


# ------------------------------------------------------------------ grid

def test_interior_cell_has_eight_successors():
    g = empty_grid()
    assert len(g.successors(g.sid(2, 2))) == 8


def test_corner_cell_has_three_successors():
    g = empty_grid()
    assert len(g.successors(g.sid(0, 0))) == 3


def test_no_corner_cutting():
    g = empty_grid()
    g.blocked[2, 3] = True  # cell (3, 2)
    succ = dict(g.successors(g.sid(2, 2)))
    assert g.sid(3, 3) not in succ  # diagonal past the blocked straight
    assert g.sid(3, 1) not in succ
    assert g.sid(2, 3) in succ


def test_straight_and_diagonal_costs():
    g = empty_grid()
    succ = dict(g.successors(g.sid(2, 2)))
    assert succ[g.sid(3, 2)] == 1.0
    assert succ[g.sid(3, 3)] == SQRT2


def test_heuristic_three_four_five():
    g = empty_grid(6, 6)
    assert g.heuristic_between(g.sid(0, 0), g.sid(3, 4)) == 5.0


def test_heuristic_identity():
    g = empty_grid()
    assert g.heuristic_between(g.sid(2, 2), g.sid(2, 2)) == 0.0


def test_heuristic_matches_diagonal_cost():
    g = empty_grid()
    assert g.heuristic_between(g.sid(0, 0), g.sid(1, 1)) == pytest.approx(SQRT2)


def test_grid_heuristic_consistent_on_random_maps():
    rng = np.random.default_rng(7)
    for _ in range(10):
        blocked = rng.random((20, 20)) < 0.2
        blocked[0, 0] = blocked[19, 19] = False
        g = GridMap(20, 20, blocked, start=(0, 0), goal=(19, 19))
        for sid in range(20 * 20):
            if not g.is_free(sid):
                continue
            h = g.anchor_heuristic(sid)
            for nsid, cost in g.successors(sid):
                assert h <= cost + g.anchor_heuristic(nsid) + 1e-12


def test_grid_edges_symmetric():
    rng = np.random.default_rng(3)
    blocked = rng.random((15, 15)) < 0.25
    blocked[0, 0] = blocked[14, 14] = False
    g = GridMap(15, 15, blocked, start=(0, 0), goal=(14, 14))
    for sid in range(15 * 15):
        if not g.is_free(sid):
            continue
        for nsid, cost in g.successors(sid):
            back = dict(g.successors(nsid))
            assert back.get(sid) == cost


def test_map_text_roundtrip():
    text = "S..#\n.#.T\n...."
    g = GridMap.from_text(text)
    assert g.start == (0, 0)
    assert g.goal == (3, 1)
    assert g.blocked[0, 3] and g.blocked[1, 1]
    assert g.to_text() == text


def test_map_text_validation():
    with pytest.raises(ValueError):
        GridMap.from_text("S..\n..")  # ragged
    with pytest.raises(ValueError):
        GridMap.from_text("S..\n...")  # no goal
    with pytest.raises(ValueError):
        GridMap.from_text("SX.\n..T")  # bad char


def test_blocked_start_rejected():
    blocked = np.zeros((3, 3), dtype=bool)
    blocked[0, 0] = True
    with pytest.raises(ValueError, match=r"start cell \(0, 0\)"):
        GridMap(3, 3, blocked, start=(0, 0), goal=(2, 2))


def test_grid_snap_rounds_to_nearest_cell():
    g = empty_grid(10, 10)
    sid, dist = g.snap((3.2, 4.7))
    assert g.cell_of(sid) == (3, 5)
    assert dist == pytest.approx(math.hypot(0.2, 0.3))


def test_grid_snap_exact_center():
    g = empty_grid(10, 10)
    sid, dist = g.snap((4.0, 4.0))
    assert g.cell_of(sid) == (4, 4)
    assert dist == 0.0


def test_u_trap_pulls_greedy_descent_inside():
    g = u_trap_map()
    # the best goal-distance cell reachable without leaving the mouth lies
    # deep inside the cavity, not outside it
    inside = [g.sid(x, y) for x in range(15, 106) for y in range(15, 106)
              if g.is_free(g.sid(x, y))]
    outside_mouth = [g.sid(x, y) for x in range(0, 14) for y in range(g.height)
                     if g.is_free(g.sid(x, y))]
    assert min(g.anchor_heuristic(s) for s in inside) < \
        min(g.anchor_heuristic(s) for s in outside_mouth)
    assert g.is_free(g.start_id) and g.is_free(g.goal_id)


# ------------------------------------------------------------------- arm

def two_link(**kw):
    defaults = dict(link_lengths=(1.0, 1.0), joint_step=math.pi / 36,
                    goal_pose=(0.0, 2.0))
    defaults.update(kw)
    return ArmDomain(**defaults)


def test_fk_straight_chain():
    arm = two_link()
    pts = arm.forward_kinematics([0.0, 0.0])
    assert pts[-1] == pytest.approx([2.0, 0.0])


def test_fk_rotated_chain():
    arm = two_link()
    pts = arm.forward_kinematics([math.pi / 2, 0.0])
    assert pts[-1] == pytest.approx([0.0, 2.0], abs=1e-12)


def test_fk_right_angle():
    arm = two_link()
    pts = arm.forward_kinematics([math.pi / 2, -math.pi / 2])
    assert pts[-1] == pytest.approx([1.0, 1.0], abs=1e-12)


def test_fk_reach_bound():
    arm = ArmDomain((1.0, 0.8, 0.6), math.pi / 18, goal_pose=(1.0, 1.0))
    rng = np.random.default_rng(11)
    for _ in range(50):
        angles = rng.uniform(0, 2 * math.pi, size=3)
        ee = arm.forward_kinematics(angles)[-1]
        assert np.linalg.norm(ee) <= arm.total_reach + 1e-9


def test_three_link_free_arm_has_six_successors():
    arm = ArmDomain((1.0, 1.0, 1.0), math.pi / 18, goal_pose=(2.0, 1.0))
    sid = arm.sid((0, 0, 0))
    assert len(arm.successors(sid)) == 6


def test_colliding_successor_omitted():
    # obstacle sits right above the elbow: bending the first joint up hits it
    arm = two_link(obstacles=((0.0, 1.0, 0.3),))
    sid = arm.sid((0, 0))
    succ = [arm.indices_of(s) for s, _ in arm.successors(sid)]
    up = (1, 0)
    down = (arm.n_steps - 1, 0)
    assert down in succ
    assert up in succ  # one 5 deg step does not reach the obstacle yet
    # a configuration pointing straight up does collide
    quarter = arm.n_steps // 4
    assert not arm.is_free(arm.sid((quarter, 0)))


def test_step_cost_is_joint_step():
    arm = two_link(joint_step=math.radians(5))
    _, cost = arm.successors(arm.sid((0, 0)))[0]
    assert cost == pytest.approx(0.08727, abs=1e-5)


def test_baseline_zero_at_goal_pose():
    arm = two_link()
    quarter = arm.n_steps // 4
    sid = arm.sid((quarter, 0))  # both links up: EE at (0, 2)
    assert arm.goal_heuristic(sid) == pytest.approx(0.0, abs=1e-12)
    assert arm.goal_predicate(sid)


def test_baseline_scaled_workspace_distance():
    arm = two_link()
    sid = arm.sid((0, 0))  # EE at (2, 0), goal (0, 2)
    assert arm.goal_heuristic(sid) == pytest.approx(2 * SQRT2 / 2.0)


def test_baseline_nonnegative():
    arm = two_link()
    rng = np.random.default_rng(5)
    for _ in range(20):
        sid = int(rng.integers(0, arm.n_steps ** 2))
        assert arm.goal_heuristic(sid) >= 0.0


def test_joint_metric_consistent_with_steps():
    arm = two_link()
    sid = arm.sid((0, 0))
    for nsid, cost in arm.successors(sid):
        assert arm.heuristic_between(sid, nsid) == pytest.approx(cost)


def test_wraparound_distance():
    arm = two_link()
    a = arm.sid((0, 0))
    b = arm.sid((arm.n_steps - 1, 0))  # one step the other way around
    assert arm.heuristic_between(a, b) == pytest.approx(arm.joint_step)


def test_arm_snap():
    arm = two_link(joint_step=math.radians(5))
    sid, dist = arm.snap((math.radians(12), math.radians(-4)))
    assert arm.indices_of(sid) == (2, arm.n_steps - 1)
    assert dist == pytest.approx(math.hypot(math.radians(2), math.radians(1)))


def test_joint_step_must_divide_circle():
    with pytest.raises(ValueError):
        ArmDomain((1.0, 1.0), 1.0, goal_pose=(1.0, 1.0))


def test_anchor_heuristic_zero_without_goal_state():
    arm = two_link()
    assert arm.anchor_heuristic(arm.sid((3, 5))) == 0.0


def test_anchor_heuristic_with_goal_joints():
    arm = two_link(goal_joints=(0.0, 0.0))
    sid = arm.sid((2, 0))
    assert arm.anchor_heuristic(sid) == pytest.approx(2 * arm.joint_step)
