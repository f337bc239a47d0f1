"""Electricity prices, per-task processing cost, and budget accounting.

All prices are USD per kWh end to end. A task's cost is the energy its
execution draws at the chosen site (power * cycles / capability, in joules)
converted to kWh and priced at that site's current tariff.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Mapping

from .model import Assignment, GroundSite, GroundSiteId, Task, TaskId

JOULES_PER_KWH = 3.6e6


@dataclass(frozen=True)
class PriceTrace:
    """Step-held tariff samples for one site, sorted by interval."""

    site: GroundSiteId
    samples: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if any(p < 0 for _, p in self.samples):
            raise ValueError("prices must be non-negative")
        intervals = [k for k, _ in self.samples]
        if intervals != sorted(intervals):
            raise ValueError("price samples must be sorted by interval")


def price_at(trace: PriceTrace, interval: int) -> float:
    """Tariff in force at an interval: the latest sample at or before it.

    The first sample extends backward in time.
    """
    if not trace.samples:
        raise ValueError(f"price trace for site {trace.site} is empty")
    keys = [k for k, _ in trace.samples]
    idx = bisect_right(keys, interval) - 1
    return trace.samples[max(idx, 0)][1]


def task_cost(task: Task, site: GroundSite, price_usd_per_kwh: float) -> float:
    """Expected payment for executing one task at a site under a tariff."""
    if site.compute_capability_hz <= 0:
        raise ValueError(f"site {site.id} has non-positive compute capability")
    energy_j = site.compute_power_w * task.cycles / site.compute_capability_hz
    return energy_j / JOULES_PER_KWH * price_usd_per_kwh


@dataclass
class BudgetLedger:
    """Running spend against one interval's electricity budget."""

    budget_per_interval: float
    spent: float = 0.0
    commitments: list[tuple[TaskId, float]] = field(default_factory=list)


def try_commit(ledger: BudgetLedger, task_id: TaskId, cost: float) -> bool:
    """Atomically record a spend if it fits; reject leaves the ledger untouched.

    Costs that land exactly on the remaining budget are accepted.
    """
    if cost < 0:
        raise ValueError("cost must be non-negative")
    if ledger.spent + cost > ledger.budget_per_interval:
        return False
    ledger.spent += cost
    ledger.commitments.append((task_id, cost))
    return True


def check_budget(
    assignment: Assignment,
    task_costs: Mapping[TaskId, float],
    budget: float,
) -> list[str]:
    """Independent audit: recompute total spend from raw indicators.

    Returns human-readable violations; empty means the budget bound holds.
    """
    total = sum(task_costs.get(tid, 0.0) for tid in assignment.scheduled_ids())
    if total > budget + 1e-12:
        return [f"spend {total:.6g} exceeds budget {budget:.6g}"]
    return []


def load_prices_csv(path) -> dict[GroundSiteId, PriceTrace]:
    """Read tariff traces: site_id,interval,price_usd_per_kwh with a header."""
    by_site: dict[GroundSiteId, list[tuple[int, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"site_id", "interval", "price_usd_per_kwh"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"prices CSV {path} is missing required columns {sorted(required)}")
        for row in reader:
            by_site.setdefault(int(row["site_id"]), []).append(
                (int(row["interval"]), float(row["price_usd_per_kwh"]))
            )
    return {
        sid: PriceTrace(site=sid, samples=tuple(sorted(samples)))
        for sid, samples in by_site.items()
    }
