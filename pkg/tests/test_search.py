from __future__ import annotations

import math

import numpy as np
import pytest

from guidedsearch.domains import GridMap, u_trap_map
from guidedsearch.search import (
    ACTIVE,
    BudgetExhausted,
    ConfigError,
    InvalidStartError,
    Planner,
    PlannerConfig,
    SpaceExhausted,
    create_planner,
)
from guidedsearch import guidance

from helpers import GraphDomain, dijkstra_cost, random_grid, run_until_solved

SQRT2 = math.sqrt(2.0)


def grid_planner(gmap, **cfg):
    config = PlannerConfig(**{"w1": 1.0, "w2": 1.0, **cfg})
    return create_planner(gmap, gmap.start_id, gmap.goal_predicate, config,
                          gmap.goal_heuristic)


# ------------------------------------------------------------ construction

def test_fresh_planner_has_two_singleton_queues():
    g = GridMap(5, 5, start=(0, 0), goal=(4, 4))
    p = grid_planner(g)
    assert len(p.queues) == 2
    assert len(p.anchor) == 1 and len(p.baseline) == 1


def test_config_window_invariant():
    with pytest.raises(ConfigError, match="omega1 must exceed omega2"):
        PlannerConfig(omega1=50, omega2=50)


def test_invalid_start_rejected():
    g = GridMap(5, 5, start=(0, 0), goal=(4, 4))
    blocked_sid = g.sid(2, 2)
    g.blocked[2, 2] = True
    with pytest.raises(InvalidStartError):
        create_planner(g, blocked_sid, g.goal_predicate, PlannerConfig(),
                       g.goal_heuristic)


def test_first_expansion_pops_start():
    g = u_trap_map()
    p = grid_planner(g, w1=10.0, w2=2.0)
    rec = p.expand_next()
    assert rec.state == g.start_id


# --------------------------------------------------------- selection rule

def test_anchor_expands_when_candidate_key_too_high():
    g = GridMap(5, 5, start=(0, 0), goal=(4, 4))
    p = grid_planner(g, w2=2.0)
    p.anchor.clear()
    p.baseline.clear()
    p.anchor.push(g.sid(1, 0), 10.0, 0.0)
    p.baseline.push(g.sid(2, 0), 25.0, 0.0)
    assert p._select_queue() is p.anchor  # 25 > 2 * 10


def test_candidate_expands_within_anchor_factor():
    g = GridMap(5, 5, start=(0, 0), goal=(4, 4))
    p = grid_planner(g, w2=2.0)
    p.anchor.clear()
    p.baseline.clear()
    p.anchor.push(g.sid(1, 0), 10.0, 0.0)
    p.baseline.push(g.sid(2, 0), 15.0, 0.0)
    assert p._select_queue() is p.baseline  # 15 <= 2 * 10


def test_expansion_delay_counts_from_generation():
    # node 8 is generated during expansion 5 and expanded at expansion 9
    edges = {
        0: [(1, 1.0), (2, 1.0), (3, 1.0), (4, 1.0), (5, 1.0), (6, 1.0), (7, 1.0)],
        4: [(8, 1.0)],
    }
    h = {0: 10, 1: 1, 2: 2, 3: 3, 4: 6, 5: 6.2, 6: 6.3, 7: 6.4, 8: 5.5}
    dom = GraphDomain(edges, h_goal=h, goal=99)
    p = create_planner(dom, 0, dom.goal_predicate,
                       PlannerConfig(w1=1.0, w2=1e9), dom.goal_heuristic)
    records = [p.expand_next() for _ in range(9)]
    order = [r.state for r in records]
    assert order == [0, 1, 2, 3, 4, 5, 6, 7, 8]
    assert records[4].state == 4 and 8 in records[4].generated
    assert records[8].state == 8
    assert records[8].delta_e == 4


def test_immediate_expansion_has_delay_one():
    edges = {0: [(1, 1.0)], 1: [(2, 1.0)]}
    h = {0: 3, 1: 2, 2: 1}
    dom = GraphDomain(edges, h_goal=h, goal=2)
    p = create_planner(dom, 0, dom.goal_predicate,
                       PlannerConfig(w1=1.0, w2=1e9), dom.goal_heuristic)
    recs = run_until_solved(p)
    assert [r.delta_e for r in recs] == [1, 1, 1]


def test_space_exhausted_when_unreachable():
    text = "S#.\n.#.\n.#T"
    g = GridMap.from_text(text)
    p = grid_planner(g)
    with pytest.raises(SpaceExhausted):
        for _ in range(100):
            p.expand_next()
    assert p.solution() is None


def test_budget_exhausted():
    g = GridMap(30, 30, start=(0, 0), goal=(29, 29))
    p = grid_planner(g, expansion_budget=5)
    with pytest.raises(BudgetExhausted):
        for _ in range(10):
            p.expand_next()
    assert p.e_curr == 5


# ---------------------------------------------------------- dynamic queues

def make_seeded_planner():
    g = GridMap(8, 8, start=(0, 0), goal=(7, 7))
    p = grid_planner(g)
    return g, p


def test_dynamic_seeding_skips_inadmissibly_closed():
    g, p = make_seeded_planner()
    p.anchor.clear()
    p.baseline.clear()
    # 12 distinct open states across the two queues, 3 closed inadmissibly
    for i in range(12):
        st = p.states.setdefault(i, type(p.states[g.start_id])(g=float(i), parent=None, stamp=0))
        st.g = float(i)
        target = p.anchor if i % 2 else p.baseline
        target.push(i, float(i), float(i))
    for i in (0, 1, 2):
        p.states[i].closed_inadmissible = True
    qid = p.add_dynamic_queue(lambda sid: 0.0)
    assert len(p.queue_by_id(qid)) == 9


def test_dynamic_pop_order_uses_new_keys():
    g, p = make_seeded_planner()
    p.anchor.clear()
    p.baseline.clear()
    a, b = 3, 4
    for sid, gval in ((a, 4.0), (b, 2.0)):
        st = p.states.setdefault(sid, type(p.states[g.start_id])(g=gval, parent=None, stamp=0))
        st.g = gval
        p.baseline.push(sid, gval, gval)
    h_hat = {a: 6.0, b: 20.0}
    qid = p.add_dynamic_queue(lambda sid: h_hat.get(sid, 0.0))
    q = p.queue_by_id(qid)
    assert q.pop() == a  # key 4 + 6 = 10 beats 2 + 20 = 22


def test_second_dynamic_queue_rejected():
    g, p = make_seeded_planner()
    p.add_dynamic_queue(lambda sid: 0.0)
    with pytest.raises(ValueError):
        p.add_dynamic_queue(lambda sid: 0.0)


def test_lifecycle_suspend_resume_reseeds():
    g, p = make_seeded_planner()
    p.expand_next()
    qid = p.add_dynamic_queue(g.goal_heuristic)
    q = p.queue_by_id(qid)
    p.set_queue_status(qid, "suspended")
    frozen = set(q.open_ids())
    p.expand_next()
    p.expand_next()
    assert set(q.open_ids()) == frozen  # frozen while suspended
    p.set_queue_status(qid, "active")
    reseeded = set(q.open_ids())
    assert reseeded == {sid for qq in (p.anchor, p.baseline) for sid in qq.open_ids()
                        if not p.states[sid].closed_inadmissible}


def test_lifecycle_discard_is_terminal():
    g, p = make_seeded_planner()
    qid = p.add_dynamic_queue(lambda sid: 0.0)
    p.set_queue_status(qid, "discarded")
    with pytest.raises(ValueError, match="discarded is terminal"):
        p.set_queue_status(qid, "active")


def test_anchor_and_baseline_status_permanent():
    g, p = make_seeded_planner()
    with pytest.raises(ValueError):
        p.set_queue_status(0, "suspended")
    with pytest.raises(ValueError):
        p.set_queue_status(1, "suspended")


def test_suspended_queue_not_selected():
    g, p = make_seeded_planner()
    qid = p.add_dynamic_queue(lambda sid: 0.0)
    p.set_queue_status(qid, "suspended")
    for _ in range(20):
        rec = p.expand_next()
        assert rec.queue_id != qid
        if p.solved:
            break


# ----------------------------------------------------------------- solution

def test_two_diagonal_steps():
    g = GridMap(3, 3, start=(0, 0), goal=(2, 2))
    p = grid_planner(g)
    run_until_solved(p)
    path, cost = p.solution()
    assert cost == pytest.approx(2 * SQRT2)
    assert path[0] == g.start_id and path[-1] == g.goal_id


def test_no_solution_before_goal_expanded():
    g = GridMap(3, 3, start=(0, 0), goal=(2, 2))
    p = grid_planner(g)
    assert p.solution() is None
    p.expand_next()
    assert p.solution() is None


def test_suboptimality_bound_on_random_grids():
    rng = np.random.default_rng(42)
    checked = 0
    while checked < 25:
        g = random_grid(rng)
        opt = dijkstra_cost(g, g.start_id, g.goal_predicate)
        if opt is None:
            continue
        p = grid_planner(g, w1=5.0, w2=2.0)
        run_until_solved(p)
        _, cost = p.solution()
        assert cost <= 10.0 * opt + 1e-9
        checked += 1


def test_path_edges_are_real_and_costed():
    rng = np.random.default_rng(17)
    for _ in range(5):
        g = random_grid(rng)
        if dijkstra_cost(g, g.start_id, g.goal_predicate) is None:
            continue
        p = grid_planner(g, w1=3.0, w2=1.5)
        run_until_solved(p)
        path, cost = p.solution()
        total = 0.0
        for a, b in zip(path, path[1:]):
            succ = dict(g.successors(a))
            assert b in succ
            total += succ[b]
        assert total <= cost + 1e-9


# ---------------------------------------------------------------- invariants

def test_each_state_expanded_at_most_twice():
    rng = np.random.default_rng(7)
    for _ in range(5):
        g = random_grid(rng)
        p = grid_planner(g, w1=5.0, w2=2.0)
        anchor_count: dict[int, int] = {}
        other_count: dict[int, int] = {}
        try:
            while not p.solved:
                rec = p.expand_next()
                bucket = anchor_count if rec.role == "anchor" else other_count
                bucket[rec.state] = bucket.get(rec.state, 0) + 1
        except SpaceExhausted:
            pass
        assert all(v == 1 for v in anchor_count.values())
        assert all(v == 1 for v in other_count.values())


def test_g_consistency_with_unit_weights():
    # with w1 = w2 = 1 and consistent heuristics every closed state's g is
    # exactly its parent's g plus the edge cost, at every instant
    rng = np.random.default_rng(11)
    for _ in range(3):
        g = random_grid(rng, size=12)
        p = grid_planner(g, w1=1.0, w2=1.0)
        try:
            while not p.solved:
                p.expand_next()
                for sid, st in p.states.items():
                    if not (st.closed_anchor or st.closed_inadmissible):
                        continue
                    if st.parent is None:
                        continue
                    edge = dict(g.successors(st.parent)).get(sid)
                    assert edge is not None
                    assert st.g == pytest.approx(p.states[st.parent].g + edge)
        except SpaceExhausted:
            pass


def test_g_never_below_parent_plus_edge():
    # under inflation closed states may go stale, but never better than the
    # path through their recorded parent
    rng = np.random.default_rng(13)
    for _ in range(3):
        g = random_grid(rng, size=12)
        p = grid_planner(g, w1=8.0, w2=2.0)
        try:
            while not p.solved:
                p.expand_next()
        except SpaceExhausted:
            continue
        for sid, st in p.states.items():
            if st.parent is None:
                continue
            edge = dict(g.successors(st.parent)).get(sid)
            assert st.g >= p.states[st.parent].g + edge - 1e-9


def test_g_values_survive_lifecycle_transitions():
    g = u_trap_map(60, 60, wall_left=8, wall_right=50, wall_top=8, wall_bottom=50)
    p = grid_planner(g, w1=10.0, w2=2.0)
    for _ in range(300):
        p.expand_next()
    qid, _ = guidance.attach(p, (4.0, 4.0))
    for _ in range(100):
        p.expand_next()
    before = p.g_table()
    p.set_queue_status(qid, "suspended")
    p.set_queue_status(qid, "active")
    p.set_queue_status(qid, "discarded")
    assert p.g_table() == before
