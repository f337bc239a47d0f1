"""Exhaustive solver: counting, refusal, and dominance over the greedy walk."""

import numpy as np
import pytest

from leo_offload.battery import BatteryState
from leo_offload.economics import BudgetLedger
from leo_offload.harness import random_interval_state
from leo_offload.model import Assignment, validate_assignment
from leo_offload.oracle import InstanceTooLarge, enumerate_count, exact_solve
from leo_offload.orchestrator import (
    IntervalState,
    ao2,
    assignment_utility,
    check_bandwidth,
)
from leo_offload.economics import check_budget, task_cost

from conftest import make_edge, make_site, make_snapshot, make_task


def _clone(state):
    return IntervalState(
        snapshot=state.snapshot,
        tasks=dict(state.tasks),
        batteries=state.batteries,
        ledger=BudgetLedger(state.ledger.budget_per_interval),
        sites=state.sites,
        prices=state.prices,
    )


def test_enumerate_count():
    assert enumerate_count([2, 2, 2]) == 27
    assert enumerate_count([0, 3]) == 4  # contact-less task contributes factor 1
    assert enumerate_count([4] * 12) == 5**12 == 244140625


def _dense_instance(n_tasks, n_edges):
    sites = {i: make_site(i, lat=float(i), lon=float(10 * i)) for i in range(n_edges)}
    edges = [make_edge(0, i, bandwidth=1e12) for i in range(n_edges)]
    snap = make_snapshot(edges, n_sats=1)
    tasks = {
        t: make_task(t, source=0, dest=0, volume=1e6) for t in range(n_tasks)
    }
    return IntervalState(
        snapshot=snap,
        tasks=tasks,
        batteries={0: BatteryState(capacity_j=1.44e5, level_j=1e5)},
        ledger=BudgetLedger(1e9),
        sites=sites,
        prices={i: 0.1 for i in range(n_edges)},
    )


def test_counting_guard_refuses_twelve_by_four():
    # 12 tasks x 4 usable edges each: 5^12 = 244,140,625 assignments, past
    # the default cap of 2e7.
    with pytest.raises(InstanceTooLarge):
        exact_solve(_dense_instance(12, 4))


def test_task_count_guard_refuses():
    with pytest.raises(InstanceTooLarge):
        exact_solve(_dense_instance(13, 1))


def test_edge_count_guard_refuses():
    with pytest.raises(InstanceTooLarge):
        exact_solve(_dense_instance(2, 5), max_edges=4)


def test_zero_tasks_yields_baseline_utility():
    rng = np.random.default_rng(1)
    state = random_interval_state(rng, n_tasks=0)
    state.tasks.clear()
    result = exact_solve(state)
    assert result.assignment.scheduled_ids() == []
    baseline = Assignment()
    assert result.utility == pytest.approx(assignment_utility(state, baseline)[0])


def test_single_task_single_edge_is_scheduled():
    sites = {0: make_site(0)}
    edge = make_edge(0, 0, bandwidth=1e9)
    snap = make_snapshot([edge], n_sats=1)
    state = IntervalState(
        snapshot=snap,
        tasks={0: make_task(0, source=0, dest=0, volume=1e6)},
        batteries={0: BatteryState(capacity_j=1.44e5, level_j=1e5)},
        ledger=BudgetLedger(1.0),
        sites=sites,
        prices={0: 0.1},
    )
    scheduled_u = assignment_utility(_clone(state), _schedule_all(state, edge))[0]
    skipped_u = assignment_utility(_clone(state), _skip_all(state))[0]
    assert scheduled_u > skipped_u  # offloading is never worse here
    result = exact_solve(_clone(state))
    assert result.assignment.is_scheduled(0)
    assert result.utility == pytest.approx(scheduled_u)


def _schedule_all(state, edge):
    a = Assignment()
    for tid in state.tasks:
        a.schedule(tid, edge)
    return a


def _skip_all(state):
    a = Assignment()
    for tid in state.tasks:
        a.skip(tid)
    return a


def test_oracle_dominates_greedy_and_baseline(rng):
    for _ in range(40):
        base = random_interval_state(
            rng,
            n_sats=int(rng.integers(2, 5)),
            n_sites=int(rng.integers(2, 5)),
            n_tasks=int(rng.integers(1, 7)),
            max_edges_per_sat=3,
        )
        u_oracle = exact_solve(_clone(base), max_edges=4).utility
        greedy = ao2(_clone(base))
        u_greedy = assignment_utility(base, greedy)[0]
        u_none = assignment_utility(base, _skip_all(base))[0]
        assert u_oracle >= u_greedy - 1e-9
        assert u_greedy >= u_none - 1e-9


def test_oracle_assignment_passes_the_same_audits(rng):
    for _ in range(25):
        base = random_interval_state(rng, n_tasks=int(rng.integers(1, 7)))
        result = exact_solve(_clone(base), max_edges=4)
        a = result.assignment
        assert validate_assignment(a, base.snapshot, base.tasks).ok
        assert check_bandwidth(a, base.snapshot, base.tasks, base.duration_s) == []
        costs = {}
        for tid in a.scheduled_ids():
            edge = a.chosen_edge(tid)
            costs[tid] = task_cost(base.tasks[tid], base.sites[edge.site],
                                   base.prices[edge.site])
        assert check_budget(a, costs, base.ledger.budget_per_interval) == []


def test_oracle_is_deterministic():
    base = random_interval_state(np.random.default_rng(7), n_tasks=6)
    r1 = exact_solve(_clone(base), max_edges=4)
    r2 = exact_solve(_clone(base), max_edges=4)
    assert r1.utility == r2.utility
    assert r1.assignment.x == r2.assignment.x
    assert r1.states_explored == r2.states_explored
