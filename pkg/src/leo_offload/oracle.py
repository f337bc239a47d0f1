"""Exhaustive small-instance solver for one interval's offload problem.

The per-interval problem is a multi-constraint 0-1 selection (each task picks
one link or stays onboard, under joint capacity and budget limits), so exact
answers are only affordable at toy scale. This module enumerates the full
choice space with pruning, which is exactly what makes it a trustworthy
yardstick for the greedy orchestrator's optimality gap: no heuristics, just
every assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable

from .economics import task_cost
from .model import Assignment, GslEdge, Task
from .orchestrator import IntervalState, assignment_utility

DEFAULT_MAX_TASKS = 12
DEFAULT_MAX_EDGES = 4
DEFAULT_MAX_STATES = int(2e7)


class InstanceTooLarge(ValueError):
    """Raised instead of attempting an enumeration that would not finish."""


@dataclass(frozen=True)
class OracleResult:
    assignment: Assignment
    utility: float
    states_explored: int


def enumerate_count(edges_per_task: Iterable[int]) -> int:
    """Size of the full choice space: each task contributes (1 + its edges)."""
    return prod(1 + n for n in edges_per_task)


def _per_task_options(state: IntervalState, tasks: list[Task]) -> list[list[tuple[GslEdge, float]]]:
    """Individually usable (edge, cost) choices per task: the task alone must
    fit the link and the whole budget."""
    duration = state.duration_s
    options = []
    for task in tasks:
        opts = []
        for edge in state.snapshot.edges_from(task.source):
            if task.volume_bits > edge.capacity_bits(duration):
                continue
            cost = task_cost(task, state.sites[edge.site], state.prices[edge.site])
            if cost > state.ledger.budget_per_interval:
                continue
            opts.append((edge, cost))
        options.append(opts)
    return options


def exact_solve(
    state: IntervalState,
    max_tasks: int = DEFAULT_MAX_TASKS,
    max_edges: int = DEFAULT_MAX_EDGES,
    max_states: int = DEFAULT_MAX_STATES,
) -> OracleResult:
    """Maximize the interval utility by trying every feasible assignment.

    Tasks are enumerated in id order and options in (skip, then ascending
    site id) order; the first optimum in that lexicographic order wins ties,
    so results are reproducible. Refuses oversized instances by raising
    InstanceTooLarge.
    """
    tasks = sorted(state.tasks.values(), key=lambda t: t.id)
    if len(tasks) > max_tasks:
        raise InstanceTooLarge(f"{len(tasks)} tasks exceeds the limit of {max_tasks}")
    options = _per_task_options(state, tasks)
    if any(len(o) > max_edges for o in options):
        raise InstanceTooLarge(f"a task has more than {max_edges} usable edges")
    n_states = enumerate_count(len(o) for o in options)
    if n_states > max_states:
        raise InstanceTooLarge(f"{n_states} assignments exceeds the cap of {max_states}")

    budget = state.ledger.budget_per_interval
    duration = state.duration_s
    capacity = {}
    for opts in options:
        for edge, _ in opts:
            capacity[edge] = edge.capacity_bits(duration)

    best_utility = float("-inf")
    best_choice: list[tuple[GslEdge, float] | None] = [None] * len(tasks)
    choice: list[tuple[GslEdge, float] | None] = [None] * len(tasks)
    used: dict[GslEdge, float] = {e: 0.0 for e in capacity}
    explored = 0

    def evaluate() -> float:
        assignment = Assignment()
        for task, picked in zip(tasks, choice):
            if picked is None:
                assignment.skip(task.id)
            else:
                assignment.schedule(task.id, picked[0])
        return assignment_utility(state, assignment)[0]

    def walk(i: int, spent: float) -> None:
        nonlocal best_utility, best_choice, explored
        if i == len(tasks):
            explored += 1
            u = evaluate()
            if u > best_utility:
                best_utility = u
                best_choice = choice.copy()
            return
        # Skip branch first: lexicographically smallest, always feasible.
        choice[i] = None
        walk(i + 1, spent)
        vol = tasks[i].volume_bits
        for edge, cost in options[i]:
            if spent + cost > budget or used[edge] + vol > capacity[edge]:
                continue
            used[edge] += vol
            choice[i] = (edge, cost)
            walk(i + 1, spent + cost)
            used[edge] -= vol
        choice[i] = None

    walk(0, 0.0)

    assignment = Assignment()
    for task, picked in zip(tasks, best_choice):
        if picked is None:
            assignment.skip(task.id)
        else:
            assignment.schedule(task.id, picked[0])
    return OracleResult(assignment=assignment, utility=best_utility, states_explored=explored)
