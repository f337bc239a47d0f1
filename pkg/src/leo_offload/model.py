"""Shared domain types for interval-based satellite task offloading.

Everything downstream (geometry, energy, economics, scheduling) works on the
types defined here. Snapshots and task sets are immutable once built;
an Assignment is filled in by exactly one scheduler per interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

SatelliteId = int
GroundSiteId = int
TaskId = int


@dataclass(frozen=True)
class IntervalIndex:
    """One discrete time slot; topology is treated as static within it."""

    index: int
    duration_s: float = 60.0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"interval index must be non-negative, got {self.index}")
        if self.duration_s <= 0:
            raise ValueError(f"interval duration must be positive, got {self.duration_s}")

    @property
    def start_s(self) -> float:
        return self.index * self.duration_s

    @property
    def end_s(self) -> float:
        return (self.index + 1) * self.duration_s

    @property
    def mid_s(self) -> float:
        return (self.index + 0.5) * self.duration_s


@dataclass(frozen=True)
class Task:
    """Atomic unit of work: data sensed on a satellite, results needed at a
    ground destination. Never split across processing sites."""

    id: TaskId
    source: SatelliteId
    destination: GroundSiteId
    cycles: float        # execution cost in CPU cycles
    volume_bits: float   # input data that must leave the satellite
    created_at: int = 0  # interval index of creation
    priority: int = 0    # offload order within a satellite; lower goes first

    def __post_init__(self):
        if self.cycles <= 0:
            raise ValueError(f"task {self.id}: cycles must be positive")
        if self.volume_bits <= 0:
            raise ValueError(f"task {self.id}: volume_bits must be positive")
        if self.priority < 0:
            raise ValueError(f"task {self.id}: priority must be non-negative")


@dataclass(frozen=True)
class GroundSite:
    """Ground station collocated with a data center that can buy compute."""

    id: GroundSiteId
    lat_deg: float
    lon_deg: float
    compute_power_w: float       # power drawn per task executed here
    compute_capability_hz: float  # cycles/second allocated per task
    has_price_trace: bool = False

    def __post_init__(self):
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValueError(f"site {self.id}: latitude {self.lat_deg} out of range")
        if not -180.0 < self.lon_deg <= 180.0:
            raise ValueError(f"site {self.id}: longitude {self.lon_deg} out of range")
        if self.compute_capability_hz <= 0:
            raise ValueError(f"site {self.id}: compute capability must be positive")


@dataclass(frozen=True)
class GslEdge:
    """Ground-satellite link, alive only while geometric visibility holds
    for the whole interval."""

    satellite: SatelliteId
    site: GroundSiteId
    bandwidth_bps: float
    elevation_deg: float = 0.0  # diagnostic only

    def __post_init__(self):
        if self.bandwidth_bps <= 0:
            raise ValueError("edge bandwidth must be positive")

    def capacity_bits(self, duration_s: float) -> float:
        return self.bandwidth_bps * duration_s


@dataclass(frozen=True)
class TopologySnapshot:
    """Frozen per-interval network state: positions, live links, eclipse flags."""

    interval: IntervalIndex
    sat_positions: Mapping[SatelliteId, np.ndarray]
    gsl_edges: tuple[GslEdge, ...]
    sunlit: Mapping[SatelliteId, bool]

    def __post_init__(self):
        by_sat: dict[SatelliteId, list[GslEdge]] = {}
        for e in self.gsl_edges:
            if e.satellite not in self.sat_positions:
                raise ValueError(f"edge references unknown satellite {e.satellite}")
            by_sat.setdefault(e.satellite, []).append(e)
        for sat in by_sat:
            by_sat[sat].sort(key=lambda e: e.site)
        object.__setattr__(self, "_edges_by_sat", by_sat)

    def edges_from(self, sat: SatelliteId) -> list[GslEdge]:
        """Live edges of one satellite, ordered by site id."""
        return self._edges_by_sat.get(sat, [])

    def has_edge(self, edge: GslEdge) -> bool:
        return edge in self.gsl_edges


@dataclass
class Assignment:
    """Per-interval offload decision: which tasks go, and over which link.

    Both indicator maps are sparse on the 1-entries; a missing key reads
    as 0. Exactly one writer fills an Assignment per interval.
    """

    x: dict[tuple[TaskId, GslEdge], float] = field(default_factory=dict)
    y: dict[TaskId, float] = field(default_factory=dict)
    # Lookup index over x kept by schedule(); assignments assembled by
    # writing x directly still resolve through the scan fallback.
    _chosen: dict[TaskId, GslEdge] = field(default_factory=dict, repr=False, compare=False)

    def schedule(self, task_id: TaskId, edge: GslEdge) -> None:
        self.x[(task_id, edge)] = 1.0
        self.y[task_id] = 1.0
        self._chosen[task_id] = edge

    def skip(self, task_id: TaskId) -> None:
        self.y[task_id] = 0.0

    def is_scheduled(self, task_id: TaskId) -> bool:
        return self.y.get(task_id, 0.0) == 1.0

    def chosen_edge(self, task_id: TaskId) -> Optional[GslEdge]:
        hit = self._chosen.get(task_id)
        if hit is not None and self.x.get((task_id, hit)) == 1.0:
            return hit
        for (tid, edge), v in self.x.items():
            if tid == task_id and v == 1.0:
                return edge
        return None

    def scheduled_ids(self) -> list[TaskId]:
        return sorted(t for t, v in self.y.items() if v == 1.0)


@dataclass(frozen=True)
class Violation:
    kind: str  # one of: binary-domain, coupling, atomicity, edge-existence, unknown-task
    task_id: Optional[TaskId]
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, task_id: Optional[TaskId], detail: str) -> None:
        self.violations.append(Violation(kind, task_id, detail))


def validate_assignment(
    a: Assignment,
    snapshot: TopologySnapshot,
    tasks: Mapping[TaskId, Task],
) -> ValidationReport:
    """Structural feasibility audit of an assignment.

    Checks the indicator domains, the x-implies-y coupling, single-edge
    atomicity, and that every used edge exists in the snapshot. Bandwidth and
    budget sums are audited by their owning modules. Unknown ids become
    report entries rather than exceptions.
    """
    report = ValidationReport()
    edge_set = set(snapshot.gsl_edges)

    for tid, v in a.y.items():
        if v not in (0.0, 1.0):
            report.add("binary-domain", tid, f"y={v!r} is not binary")
        if tid not in tasks:
            report.add("unknown-task", tid, "y entry for task not in task set")

    ones_per_task: dict[TaskId, int] = {}
    for (tid, edge), v in a.x.items():
        if v not in (0.0, 1.0):
            report.add("binary-domain", tid, f"x={v!r} is not binary")
        if tid not in tasks:
            report.add("unknown-task", tid, "x entry for task not in task set")
        if v == 1.0:
            ones_per_task[tid] = ones_per_task.get(tid, 0) + 1
            if a.y.get(tid, 0.0) != 1.0:
                report.add("coupling", tid, "x=1 while y=0")
            if edge not in edge_set:
                report.add("edge-existence", tid,
                           f"edge ({edge.satellite}->{edge.site}) not in snapshot")
            elif tid in tasks and edge.satellite != tasks[tid].source:
                report.add("edge-existence", tid,
                           f"edge leaves satellite {edge.satellite}, task source is {tasks[tid].source}")

    for tid, n in ones_per_task.items():
        if n > 1:
            report.add("atomicity", tid, f"{n} edges selected for one task")

    return report
