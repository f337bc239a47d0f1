"""Per-interval utility terms and the satellite ranking that drives the
greedy orchestrator.

The quality-of-service utility rewards scheduling many tasks at processing
sites close to their destinations; the sustainability delta measures how much
battery wear a satellite avoids by sending its whole backlog to the ground
instead of computing it locally. Ranking relaxes link-capacity and budget
limits: it asks how valuable each satellite's backlog would be if everything
it wants were granted, normalized by the fee and data volume that grant
would consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .battery import (
    BatteryState,
    dod,
    harvested_energy,
    life_consumption,
    processing_energy,
    remaining_energy,
    remaining_energy_local,
)
from .economics import task_cost
from .model import GroundSite, GroundSiteId, SatelliteId, Task, TopologySnapshot
from .orbit import ground_delay

# Floor for the delay denominator when a scheduled task's processing site is
# its own destination; keeps the ideal colocated case finite and top-ranked.
DELAY_FLOOR_S = 1e-9


@dataclass(frozen=True)
class SatelliteRank:
    satellite: SatelliteId
    m: float           # marginal utility gain per unit of normalized spend+volume
    delta_qos: float
    delta_sus: float
    norm_fee: float
    norm_volume: float


def qos_utility(
    scheduled: Sequence[tuple[Task, GroundSite]],
    sites: Mapping[GroundSiteId, GroundSite],
) -> float:
    """Scheduled-task count divided by their total site-to-destination delay.

    Zero when nothing is scheduled. If every chosen site coincides with its
    task's destination the denominator is floored at DELAY_FLOOR_S.
    """
    if not scheduled:
        return 0.0
    total_delay = sum(ground_delay(site, sites[task.destination]) for task, site in scheduled)
    return len(scheduled) / max(total_delay, DELAY_FLOOR_S)


def normalized_fee(costs: Sequence[float]) -> float:
    """Total fee over (count * max fee); 1.0 for uniform or all-zero fees."""
    if not costs:
        raise ValueError("need at least one cost")
    top = max(costs)
    if top <= 0.0:
        return 1.0
    return sum(costs) / (len(costs) * top)


def normalized_volume(volumes: Sequence[float]) -> float:
    """Total volume over (count * max volume); same shape as normalized_fee."""
    if not volumes:
        raise ValueError("need at least one volume")
    top = max(volumes)
    if top <= 0.0:
        return 1.0
    return sum(volumes) / (len(volumes) * top)


def best_site_for_task(
    task: Task,
    visible_sites: Sequence[GroundSite],
    sites: Mapping[GroundSiteId, GroundSite],
) -> Optional[GroundSite]:
    """Visible site with the smallest delay to the task's destination.

    Ties break toward the smaller site id; None signals no contact, in which
    case the caller drops the task from this relaxation round.
    """
    if not visible_sites:
        return None
    dest = sites[task.destination]
    return min(visible_sites, key=lambda s: (ground_delay(s, dest), s.id))


def _visible_sites(
    task: Task, snapshot: TopologySnapshot, sites: Mapping[GroundSiteId, GroundSite]
) -> list[GroundSite]:
    return [sites[e.site] for e in snapshot.edges_from(task.source)]


def delta_qos(
    tasks_on_v: Sequence[Task],
    snapshot: TopologySnapshot,
    sites: Mapping[GroundSiteId, GroundSite],
) -> float:
    """Best-case QoS gain if every contactable task of one satellite went out.

    Tasks with no visible site drop out of both the count and the delay sum;
    a satellite with no contact at all contributes zero.
    """
    count = 0
    total_delay = 0.0
    for task in tasks_on_v:
        best = best_site_for_task(task, _visible_sites(task, snapshot, sites), sites)
        if best is None:
            continue
        count += 1
        total_delay += ground_delay(best, sites[task.destination])
    if count == 0:
        return 0.0
    return count / max(total_delay, DELAY_FLOOR_S)


def delta_sustainability(
    battery: BatteryState,
    tasks_on_v: Sequence[Task],
    sunlit_fraction: float,
    duration_s: float,
) -> float:
    """Wear avoided by offloading a satellite's whole backlog.

    Difference between the wear of the all-local interval and the wear of the
    fully relaxed interval (every task shipped out, no onboard processing).
    Non-negative because the wear kernel is strictly positive.
    """
    harvested = harvested_energy(battery, sunlit_fraction, duration_s)
    baseline = battery.baseline_rate_w * duration_s
    all_process = sum(processing_energy(battery, t.cycles) for t in tasks_on_v)

    d_begin = dod(battery, battery.level_j)
    level_local = remaining_energy_local(battery, harvested, baseline, all_process)
    level_offload = remaining_energy(battery, harvested, baseline, 0.0)
    wear_local = life_consumption(d_begin, dod(battery, level_local))
    wear_offload = life_consumption(d_begin, dod(battery, level_offload))
    return wear_local - wear_offload


def rank_satellites(
    tasks_by_sat: Mapping[SatelliteId, Sequence[Task]],
    snapshot: TopologySnapshot,
    sites: Mapping[GroundSiteId, GroundSite],
    batteries: Mapping[SatelliteId, BatteryState],
    prices: Mapping[GroundSiteId, float],
    duration_s: float,
    qos_weight: float = 1.0,
    sus_weight: float = 1.0,
) -> list[SatelliteRank]:
    """Order task-bearing satellites by marginal utility gain, best first.

    Fees are evaluated at each task's delay-optimal visible site; tasks
    without contact fall back to neutral fee treatment. Ties in the gain
    break toward the smaller satellite id so replays are deterministic.
    """
    ranks = []
    for sat, tasks in tasks_by_sat.items():
        if not tasks:
            raise ValueError(f"satellite {sat} ranked with an empty task list")
        costs = []
        for task in tasks:
            best = best_site_for_task(task, _visible_sites(task, snapshot, sites), sites)
            if best is not None:
                costs.append(task_cost(task, best, prices[best.id]))
        fee = normalized_fee(costs) if costs else 1.0
        volume = normalized_volume([t.volume_bits for t in tasks])

        dq = delta_qos(tasks, snapshot, sites)
        ds = delta_sustainability(
            batteries[sat], tasks, 1.0 if snapshot.sunlit.get(sat, False) else 0.0, duration_s
        )
        ranks.append(
            SatelliteRank(
                satellite=sat,
                m=(qos_weight * dq + sus_weight * ds) / (fee + volume),
                delta_qos=dq,
                delta_sus=ds,
                norm_fee=fee,
                norm_volume=volume,
            )
        )
    ranks.sort(key=lambda r: (-r.m, r.satellite))
    return ranks
