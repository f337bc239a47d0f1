"""The AO2 greedy offload orchestrator.

Per interval: build the candidate map of task-bearing satellites, rank them
once by marginal utility gain, then walk the ranking committing each task to
its cheapest link that still fits within the link capacity and the
electricity budget. Infeasible tasks are skipped (never an exception) and the
walk continues, because a later, lower-ranked satellite may still have
schedulable work.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .battery import (
    BatteryState,
    dod,
    harvested_energy,
    life_consumption,
    processing_energy,
    remaining_energy,
)
from .economics import BudgetLedger, task_cost, try_commit
from .model import (
    Assignment,
    GroundSite,
    GroundSiteId,
    GslEdge,
    SatelliteId,
    Task,
    TaskId,
    TopologySnapshot,
)
from .orbit import SPEED_OF_LIGHT_KM_S, ground_delay
from .ranking import DELAY_FLOOR_S, rank_satellites

DEFAULT_PROXIMITY_KM = 500.0


@dataclass
class IntervalState:
    """Everything one scheduling round reads and charges against.

    link_used_bits tracks the running committed data per edge; the ledger
    tracks the running spend. Both are charged at commit time, so the
    capacity and budget bounds hold throughout the walk by construction
    (and are re-audited afterwards by the independent checkers).
    """

    snapshot: TopologySnapshot
    tasks: dict[TaskId, Task]
    batteries: dict[SatelliteId, BatteryState]
    ledger: BudgetLedger
    sites: dict[GroundSiteId, GroundSite]
    prices: dict[GroundSiteId, float]
    link_used_bits: dict[GslEdge, float] = field(default_factory=dict)

    @property
    def duration_s(self) -> float:
        return self.snapshot.interval.duration_s

    def sunlit_fraction(self, sat: SatelliteId) -> float:
        return 1.0 if self.snapshot.sunlit.get(sat, False) else 0.0


def candidate_set(tasks: Mapping[TaskId, Task]) -> dict[SatelliteId, list[Task]]:
    """Group tasks under their source satellites.

    Exactly the satellites holding work appear; per-satellite lists follow
    the application-assigned offload order (priority, then id).
    """
    by_sat: dict[SatelliteId, list[Task]] = {}
    for task in tasks.values():
        by_sat.setdefault(task.source, []).append(task)
    for sat in by_sat:
        by_sat[sat].sort(key=lambda t: (t.priority, t.id))
    return by_sat


def feasible_edges(task: Task, state: IntervalState) -> list[tuple[GslEdge, float]]:
    """Links of the task's satellite that fit both remaining capacity and
    remaining budget, each paired with the task's fee at that site.

    Both bounds are inclusive: a task exactly filling a link or the budget
    is still feasible.
    """
    duration = state.duration_s
    options = []
    for edge in state.snapshot.edges_from(task.source):
        used = state.link_used_bits.get(edge, 0.0)
        if used + task.volume_bits > edge.capacity_bits(duration):
            continue
        cost = task_cost(task, state.sites[edge.site], state.prices[edge.site])
        if state.ledger.spent + cost > state.ledger.budget_per_interval:
            continue
        options.append((edge, cost))
    return options


def _commit(state: IntervalState, assignment: Assignment, task: Task,
            options: list[tuple[GslEdge, float]]) -> None:
    dest = state.sites[task.destination]
    edge, cost = min(
        options,
        key=lambda ec: (ec[1], ground_delay(state.sites[ec[0].site], dest), ec[0].site),
    )
    state.link_used_bits[edge] = state.link_used_bits.get(edge, 0.0) + task.volume_bits
    accepted = try_commit(state.ledger, task.id, cost)
    assert accepted, "commit after feasibility check cannot fail"
    assignment.schedule(task.id, edge)


def ao2(state: IntervalState, qos_weight: float = 1.0, sus_weight: float = 1.0) -> Assignment:
    """Run one greedy scheduling round over the interval state.

    The satellite ranking is computed once up front and never refreshed;
    within a satellite, tasks go in offload order. Every task of every
    candidate is visited even after failures.
    """
    by_sat = candidate_set(state.tasks)
    ranks = rank_satellites(
        by_sat, state.snapshot, state.sites, state.batteries, state.prices,
        state.duration_s, qos_weight, sus_weight,
    )
    assignment = Assignment()
    for rank in ranks:
        for task in by_sat[rank.satellite]:
            options = feasible_edges(task, state)
            if options:
                _commit(state, assignment, task, options)
            else:
                assignment.skip(task.id)
    return assignment


def ao2_parallel(
    state: IntervalState,
    pipelines: int,
    qos_weight: float = 1.0,
    sus_weight: float = 1.0,
) -> Assignment:
    """Budget-partitioned variant: split the ranked satellites round-robin
    into n pipelines, each holding 1/n of the budget and 1/n of every link's
    capacity, then sweep the leftovers once sequentially.

    Pipelines are independent by construction, so running them in sequence
    here is observationally identical to running them side by side.
    """
    if pipelines < 1:
        raise ValueError("need at least one pipeline")
    if pipelines == 1:
        return ao2(state, qos_weight, sus_weight)

    by_sat = candidate_set(state.tasks)
    ranks = rank_satellites(
        by_sat, state.snapshot, state.sites, state.batteries, state.prices,
        state.duration_s, qos_weight, sus_weight,
    )
    duration = state.duration_s
    budget_share = state.ledger.budget_per_interval / pipelines
    assignment = Assignment()
    pending: list[Task] = []
    commits: list[tuple[Task, GslEdge, float]] = []

    for lane in range(pipelines):
        lane_ledger = BudgetLedger(budget_share)
        lane_used: dict[GslEdge, float] = {}
        for rank in ranks[lane::pipelines]:
            for task in by_sat[rank.satellite]:
                options = []
                for edge in state.snapshot.edges_from(task.source):
                    if lane_used.get(edge, 0.0) + task.volume_bits > edge.capacity_bits(duration) / pipelines:
                        continue
                    cost = task_cost(task, state.sites[edge.site], state.prices[edge.site])
                    if lane_ledger.spent + cost > lane_ledger.budget_per_interval:
                        continue
                    options.append((edge, cost))
                if options:
                    dest = state.sites[task.destination]
                    edge, cost = min(
                        options,
                        key=lambda ec: (ec[1], ground_delay(state.sites[ec[0].site], dest), ec[0].site),
                    )
                    lane_used[edge] = lane_used.get(edge, 0.0) + task.volume_bits
                    try_commit(lane_ledger, task.id, cost)
                    commits.append((task, edge, cost))
                else:
                    pending.append(task)

    # Replay lane commits into the shared state, then give unplaced tasks one
    # sequential pass over the merged leftovers (true residual capacity and
    # the sum of unspent lane budgets).
    for task, edge, cost in commits:
        state.link_used_bits[edge] = state.link_used_bits.get(edge, 0.0) + task.volume_bits
        accepted = try_commit(state.ledger, task.id, cost)
        assert accepted, "merged lane spends cannot exceed the full budget"
        assignment.schedule(task.id, edge)

    rank_pos = {r.satellite: i for i, r in enumerate(ranks)}
    pending.sort(key=lambda t: (rank_pos[t.source], t.priority, t.id))
    for task in pending:
        options = feasible_edges(task, state)
        if options:
            _commit(state, assignment, task, options)
        else:
            assignment.skip(task.id)
    return assignment


def carry_over(
    unscheduled: Sequence[Task],
    next_snapshot: TopologySnapshot,
    sites: Mapping[GroundSiteId, GroundSite],
    proximity_km: float = DEFAULT_PROXIMITY_KM,
) -> tuple[list[Task], list[tuple[Task, GslEdge]]]:
    """Roll unscheduled tasks into the next interval.

    Tasks keep their identity. A task whose satellite now sees a site within
    proximity_km of its destination leaves the pool for direct delivery over
    that link (nearest qualifying site, ties toward the smaller id); the rest
    stay queued for rescheduling.
    """
    max_delay = proximity_km / SPEED_OF_LIGHT_KM_S
    kept: list[Task] = []
    direct: list[tuple[Task, GslEdge]] = []
    for task in unscheduled:
        dest = sites[task.destination]
        best: Optional[tuple[float, int, GslEdge]] = None
        for edge in next_snapshot.edges_from(task.source):
            delay = ground_delay(sites[edge.site], dest)
            if delay <= max_delay and (best is None or (delay, edge.site) < best[:2]):
                best = (delay, edge.site, edge)
        if best is not None:
            direct.append((task, best[2]))
        else:
            kept.append(task)
    return kept, direct


def check_bandwidth(
    assignment: Assignment,
    snapshot: TopologySnapshot,
    tasks: Mapping[TaskId, Task],
    duration_s: float,
) -> list[str]:
    """Independent audit of per-link capacity from the raw indicators."""
    load: dict[GslEdge, float] = {}
    for (tid, edge), v in assignment.x.items():
        if v == 1.0 and tid in tasks:
            load[edge] = load.get(edge, 0.0) + tasks[tid].volume_bits
    problems = []
    for edge, bits in load.items():
        cap = edge.capacity_bits(duration_s)
        if bits > cap + 1e-6:
            problems.append(
                f"edge ({edge.satellite}->{edge.site}) carries {bits:.6g} bits, capacity {cap:.6g}"
            )
    return problems


def assignment_utility(state: IntervalState, assignment: Assignment) -> tuple[float, float, float]:
    """Objective value of an assignment: (total, qos term, sustainability term).

    The sustainability term charges each satellite the processing energy of
    its unscheduled tasks and integrates the wear kernel over the resulting
    depth-of-discharge move; wear of a charging satellite counts as signed
    here because this is the optimization objective, not the lifetime
    accumulator.
    """
    scheduled_pairs = []
    for tid in assignment.scheduled_ids():
        edge = assignment.chosen_edge(tid)
        if edge is not None and tid in state.tasks:
            scheduled_pairs.append((state.tasks[tid], state.sites[edge.site]))
    if scheduled_pairs:
        total_delay = sum(
            ground_delay(site, state.sites[task.destination]) for task, site in scheduled_pairs
        )
        u_qos = len(scheduled_pairs) / max(total_delay, DELAY_FLOOR_S)
    else:
        u_qos = 0.0

    unscheduled_j: dict[SatelliteId, float] = {sat: 0.0 for sat in state.batteries}
    for task in state.tasks.values():
        if not assignment.is_scheduled(task.id) and task.source in unscheduled_j:
            unscheduled_j[task.source] += processing_energy(
                state.batteries[task.source], task.cycles
            )

    u_sus = 0.0
    duration = state.duration_s
    for sat, battery in state.batteries.items():
        harvested = harvested_energy(battery, state.sunlit_fraction(sat), duration)
        baseline = battery.baseline_rate_w * duration
        level_end = remaining_energy(battery, harvested, baseline, unscheduled_j[sat])
        u_sus -= life_consumption(dod(battery, battery.level_j), dod(battery, level_end))

    return u_qos + u_sus, u_qos, u_sus


def timed_ao2(state: IntervalState, pipelines: int = 1,
              qos_weight: float = 1.0, sus_weight: float = 1.0) -> tuple[Assignment, float]:
    """Run the orchestrator and return (assignment, wall seconds)."""
    t0 = time.perf_counter()
    if pipelines > 1:
        assignment = ao2_parallel(state, pipelines, qos_weight, sus_weight)
    else:
        assignment = ao2(state, qos_weight, sus_weight)
    return assignment, time.perf_counter() - t0
