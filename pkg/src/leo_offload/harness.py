"""Scenario configuration, the interval simulation loop, and metrics output.

One run walks a fixed horizon of intervals. Each interval it freezes the
topology, generates new sensing tasks, hands the pool to the selected
scheme, and settles every satellite's battery. All schemes see the identical
task stream for a given seed, and a fixed seed makes the whole run (including
emitted files, runtimes aside) reproducible byte for byte.

Delay accounting is service time: propagation, transmission, and compute on
the task's path. Time a task spends parked on a satellite waiting for a
contact window or budget is tracked separately in the run summary, since the
schemes park data in structurally different places.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .baselines import (
    IslTopology,
    build_isl_topology,
    cct_route,
    hop_distance_field,
    hroa_process,
    no_offload,
    overhead_satellite,
)
from .battery import BatteryState, wear_primitive
from .economics import BudgetLedger, PriceTrace, load_prices_csv, price_at, task_cost
from .model import (
    Assignment,
    GroundSite,
    GroundSiteId,
    GslEdge,
    IntervalIndex,
    SatelliteId,
    Task,
    TaskId,
    TopologySnapshot,
)
from .orbit import (
    SPEED_OF_LIGHT_KM_S,
    ConstellationConfig,
    build_snapshot,
    ground_delay,
    load_sites_csv,
    site_positions,
)
from .orchestrator import IntervalState, carry_over, timed_ao2

SCHEMES = ("ao2", "cct", "hroa", "none")

METRICS_COLUMNS = (
    "interval",
    "scheme",
    "total_energy_j",
    "total_life_consumed",
    "tasks_generated",
    "tasks_scheduled",
    "avg_delay_s",
    "budget_spent_usd",
    "algo_runtime_s",
)

# Relative destination popularity for the bundled catalog (rough metro-area
# populations). User catalogs default to uniform unless weights are supplied.
_BUNDLED_SITE_WEIGHTS = {
    0: 2.5, 1: 2.1, 2: 1.0, 3: 1.5, 4: 4.6, 5: 0.1,
    6: 1.4, 7: 0.2, 8: 9.7, 9: 5.6, 10: 1.6,
}


@dataclass
class ScenarioConfig:
    """Flat bundle of every knob a run needs; JSON keys match field names."""

    # constellation
    num_planes: int = 72
    sats_per_plane: int = 22
    altitude_km: float = 550.0
    inclination_deg: float = 53.0
    phase_offset: int = 1
    # time base
    interval_s: float = 60.0
    horizon_intervals: int = 96
    # geometry and links
    elevation_mask_deg: float = 25.0
    default_bandwidth_bps: float = 1e9
    proximity_km: float = 500.0
    # inputs
    sites_csv: Optional[str] = None   # None -> bundled catalog
    prices_csv: Optional[str] = None
    default_price_usd_per_kwh: Optional[float] = None  # None -> synthetic traces
    price_diurnal: bool = True
    destination_weights: Optional[dict] = None  # site id -> weight
    # economics
    budget_per_interval_usd: float = 1.0
    # scheme
    scheme: str = "ao2"
    parallel_pipelines: int = 1
    qos_weight: float = 1.0
    sus_weight: float = 1.0
    # task generation
    rate_bps: float = 3e8
    cycles_per_bit: float = 737.5
    mean_task_volume_bits: float = 3e8
    volume_dist: str = "lognormal"  # fixed | uniform | lognormal
    volume_sigma: float = 0.5
    active_fraction: float = 0.05
    # satellite power system
    battery_capacity_j: float = 1.44e5
    battery_initial_level_frac: float = 1.0
    harvest_rate_w: float = 120.0
    baseline_rate_w: float = 30.0
    sat_compute_power_w: float = 10.72
    sat_compute_capability_hz: float = 1.43e9
    tx_power_per_mbps_w: float = 0.08
    # baseline knobs
    hroa_reduction_factor: float = 0.25
    isl_rate_bps: float = 3e8
    # misc
    rng_seed: int = 0
    record_runtime: bool = True

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; pick one of {SCHEMES}")
        if self.horizon_intervals < 0:
            raise ValueError("horizon must be non-negative")
        for name in ("interval_s", "rate_bps", "mean_task_volume_bits",
                     "default_bandwidth_bps", "battery_capacity_j"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.active_fraction <= 1.0:
            raise ValueError("active_fraction must be in [0, 1]")

    @property
    def constellation(self) -> ConstellationConfig:
        return ConstellationConfig(
            num_planes=self.num_planes,
            sats_per_plane=self.sats_per_plane,
            altitude_km=self.altitude_km,
            inclination_deg=self.inclination_deg,
            phase_offset=self.phase_offset,
        )

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


@dataclass
class IntervalMetrics:
    """One emitted row; field order is the CSV column order."""

    interval: int
    scheme: str
    total_energy_j: float
    total_life_consumed: float
    tasks_generated: int
    tasks_scheduled: int
    avg_delay_s: float
    budget_spent_usd: float
    algo_runtime_s: float


@dataclass
class RunResult:
    metrics: list[IntervalMetrics]
    summary: dict


def bundled_sites_path() -> Path:
    return Path(str(resources.files("leo_offload").joinpath("data/ground_sites.csv")))


def generate_tasks(
    cfg: ScenarioConfig,
    interval: int,
    rng: np.random.Generator,
    id_start: int,
    site_ids: Sequence[GroundSiteId],
    dest_weights: np.ndarray,
) -> list[Task]:
    """Sensing workload for one interval.

    Each interval a random subset of satellites is sensing-active; an active
    satellite emits a Poisson number of tasks whose mean total volume equals
    rate_bps * interval_s. Destinations follow the (population-style) site
    weights. Fully deterministic under the generator's state.
    """
    if cfg.rate_bps <= 0 or cfg.active_fraction == 0.0:
        return []
    n_sats = cfg.num_planes * cfg.sats_per_plane
    active = np.nonzero(rng.random(n_sats) < cfg.active_fraction)[0]
    lam = cfg.rate_bps * cfg.interval_s / cfg.mean_task_volume_bits

    tasks: list[Task] = []
    next_id = id_start
    for sat in active.tolist():
        count = int(rng.poisson(lam))
        if count == 0:
            continue
        m = cfg.mean_task_volume_bits
        if cfg.volume_dist == "fixed":
            volumes = np.full(count, m)
        elif cfg.volume_dist == "uniform":
            volumes = rng.uniform(0.5 * m, 1.5 * m, size=count)
        elif cfg.volume_dist == "lognormal":
            sigma = cfg.volume_sigma
            volumes = rng.lognormal(np.log(m) - 0.5 * sigma**2, sigma, size=count)
        else:
            raise ValueError(f"unknown volume_dist {cfg.volume_dist!r}")
        dests = rng.choice(len(site_ids), size=count, p=dest_weights)
        for vol, dest_idx in zip(volumes.tolist(), dests.tolist()):
            tasks.append(
                Task(
                    id=next_id,
                    source=sat,
                    destination=site_ids[dest_idx],
                    cycles=vol * cfg.cycles_per_bit,
                    volume_bits=vol,
                    created_at=interval,
                )
            )
            next_id += 1
    return tasks


def _synthetic_price_traces(
    cfg: ScenarioConfig, sites: list[GroundSite], rng: np.random.Generator
) -> dict[GroundSiteId, PriceTrace]:
    """Per-site tariffs drawn from the configured band, optionally with a
    diurnal swing."""
    lo, hi = 0.04, 0.2
    traces = {}
    for s in sites:
        base = rng.uniform(lo, hi)
        if not cfg.price_diurnal:
            traces[s.id] = PriceTrace(site=s.id, samples=((0, float(base)),))
            continue
        amp = rng.uniform(0.2, 0.6) * (hi - lo) / 2.0
        phase = rng.uniform(0.0, 2.0 * np.pi)
        samples = []
        for k in range(max(cfg.horizon_intervals, 1)):
            t = k * cfg.interval_s
            p = base + amp * np.sin(2.0 * np.pi * t / 86400.0 + phase)
            samples.append((k, float(np.clip(p, lo, hi))))
        traces[s.id] = PriceTrace(site=s.id, samples=tuple(samples))
    return traces


class _Context:
    """Immutable per-run inputs shared by every scheme engine."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.constellation = cfg.constellation
        sites_path = cfg.sites_csv or bundled_sites_path()
        self.sites, self.bandwidth_overrides = load_sites_csv(sites_path)
        self.site_map = {s.id: s for s in self.sites}
        self.site_row = {s.id: i for i, s in enumerate(self.sites)}
        self.site_ids = [s.id for s in self.sites]

        if cfg.destination_weights:
            w = np.array([float(cfg.destination_weights.get(str(s.id),
                          cfg.destination_weights.get(s.id, 0.0))) for s in self.sites])
        elif cfg.sites_csv is None:
            w = np.array([_BUNDLED_SITE_WEIGHTS.get(s.id, 1.0) for s in self.sites])
        else:
            w = np.ones(len(self.sites))
        if w.sum() <= 0:
            raise ValueError("destination weights must have positive mass")
        self.dest_weights = w / w.sum()

        price_rng = np.random.default_rng([cfg.rng_seed, 17])
        if cfg.prices_csv:
            self.prices = load_prices_csv(cfg.prices_csv)
        else:
            self.prices = {}
        fallback = cfg.default_price_usd_per_kwh
        missing = [s for s in self.sites if s.id not in self.prices]
        if missing:
            if fallback is not None:
                for s in missing:
                    self.prices[s.id] = PriceTrace(site=s.id, samples=((0, fallback),))
            else:
                self.prices.update(_synthetic_price_traces(cfg, missing, price_rng))

        self.sun_direction = np.array([1.0, 0.0, 0.0])
        self._delay_cache: dict[tuple[int, int], float] = {}

    def prices_at(self, k: int) -> dict[GroundSiteId, float]:
        return {sid: price_at(tr, k) for sid, tr in self.prices.items()}

    def site_delay(self, a: GroundSiteId, b: GroundSiteId) -> float:
        key = (a, b) if a <= b else (b, a)
        hit = self._delay_cache.get(key)
        if hit is None:
            hit = ground_delay(self.site_map[key[0]], self.site_map[key[1]])
            self._delay_cache[key] = hit
        return hit

    def battery_view(self, level_j: float) -> BatteryState:
        cfg = self.cfg
        return BatteryState(
            capacity_j=cfg.battery_capacity_j,
            level_j=level_j,
            harvest_rate_w=cfg.harvest_rate_w,
            baseline_rate_w=cfg.baseline_rate_w,
            compute_power_w=cfg.sat_compute_power_w,
            compute_capability_hz=cfg.sat_compute_capability_hz,
            tx_power_per_mbps_w=cfg.tx_power_per_mbps_w,
        )

    def snapshot(self, k: int) -> TopologySnapshot:
        return build_snapshot(
            self.constellation,
            self.sites,
            IntervalIndex(k, self.cfg.interval_s),
            elevation_mask_deg=self.cfg.elevation_mask_deg,
            default_bandwidth_bps=self.cfg.default_bandwidth_bps,
            bandwidth_overrides=self.bandwidth_overrides,
            sun_direction=self.sun_direction,
        )


@dataclass
class _StepResult:
    processing_j: np.ndarray
    tx_j: np.ndarray
    scheduled: int
    delays: list[float]
    spend: float
    runtime_s: float
    tasks_handled: int


class _Ao2Engine:
    """Interval driver for the orchestrated offloading scheme."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.pending: list[Task] = []
        self.saw_contact: dict[TaskId, bool] = {}
        self.waits: list[int] = []
        self.direct_count = 0
        self.fallback_count = 0
        self.expired_count = 0

    def step(self, k, snapshot, new_tasks, levels, site_pos, is_last) -> _StepResult:
        ctx, cfg = self.ctx, self.ctx.cfg
        n = len(levels)
        proc = np.zeros(n)
        tx = np.zeros(n)
        delays: list[float] = []

        kept, direct = carry_over(self.pending, snapshot, ctx.site_map, cfg.proximity_km)
        for task, edge in direct:
            tx[task.source] += cfg.tx_power_per_mbps_w * task.volume_bits / 1e6
            delays.append(self._downlink_delay(task, edge, snapshot, site_pos))
            self.saw_contact.pop(task.id, None)
            self.waits.append(k - task.created_at)
            self.direct_count += 1

        pool = kept + new_tasks
        tasks = {t.id: t for t in pool}
        batteries = {
            sat: ctx.battery_view(float(levels[sat]))
            for sat in {t.source for t in pool}
        }
        state = IntervalState(
            snapshot=snapshot,
            tasks=tasks,
            batteries=batteries,
            ledger=BudgetLedger(cfg.budget_per_interval_usd),
            sites=ctx.site_map,
            prices=ctx.prices_at(k),
        )
        assignment, runtime = timed_ao2(
            state, cfg.parallel_pipelines, cfg.qos_weight, cfg.sus_weight
        )

        scheduled = assignment.scheduled_ids()
        scheduled_ids = set(scheduled)
        for tid in scheduled:
            task = tasks[tid]
            edge = assignment.chosen_edge(tid)
            tx[task.source] += cfg.tx_power_per_mbps_w * task.volume_bits / 1e6
            delays.append(self._downlink_delay(task, edge, snapshot, site_pos))
            self.saw_contact.pop(tid, None)
            self.waits.append(k - task.created_at)

        self.pending = []
        for task in pool:
            if task.id in scheduled_ids:
                continue
            saw = self.saw_contact.get(task.id, False) or bool(snapshot.edges_from(task.source))
            if is_last:
                # Horizon cut: backlog that had a usable contact but was
                # squeezed out by budget/capacity is executed onboard; tasks
                # that never saw the ground are reported as expired.
                self.saw_contact.pop(task.id, None)
                if saw:
                    proc[task.source] += batteries[task.source].compute_power_w * \
                        task.cycles / batteries[task.source].compute_capability_hz
                    delays.append(task.cycles / cfg.sat_compute_capability_hz)
                    self.fallback_count += 1
                else:
                    self.expired_count += 1
            else:
                self.saw_contact[task.id] = saw
                self.pending.append(task)

        return _StepResult(
            processing_j=proc,
            tx_j=tx,
            scheduled=len(scheduled),
            delays=delays,
            spend=state.ledger.spent,
            runtime_s=runtime,
            tasks_handled=len(pool),
        )

    def _downlink_delay(self, task, edge, snapshot, site_pos) -> float:
        ctx = self.ctx
        slant_km = float(
            np.linalg.norm(snapshot.sat_positions[task.source] - site_pos[ctx.site_row[edge.site]])
        )
        return (
            slant_km / SPEED_OF_LIGHT_KM_S
            + task.volume_bits / edge.bandwidth_bps
            + ctx.site_delay(edge.site, task.destination)
        )


class _CctEngine:
    """Relay every task over inter-satellite links; no pool, no budget."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.isl: IslTopology = build_isl_topology(ctx.constellation)
        self.undeliverable = 0

    def step(self, k, snapshot, new_tasks, levels, site_pos, is_last) -> _StepResult:
        ctx, cfg = self.ctx, self.ctx.cfg
        n = len(levels)
        proc = np.zeros(n)
        tx = np.zeros(n)
        delays: list[float] = []
        routed = 0

        t0 = time.perf_counter()
        target_cache: dict[GroundSiteId, SatelliteId] = {}
        field_cache: dict[SatelliteId, dict[SatelliteId, int]] = {}
        for task in new_tasks:
            dest_pos = site_pos[ctx.site_row[task.destination]]
            target = target_cache.get(task.destination)
            if target is None:
                target = overhead_satellite(snapshot, dest_pos)
                target_cache[task.destination] = target
            dist_field = field_cache.get(target)
            if dist_field is None:
                dist_field = hop_distance_field(self.isl, target)
                field_cache[target] = dist_field
            route = cct_route(
                task, snapshot, self.isl, dest_pos,
                tx_power_per_mbps_w=cfg.tx_power_per_mbps_w,
                isl_rate_bps=cfg.isl_rate_bps,
                downlink_rate_bps=cfg.default_bandwidth_bps,
                dist_field=dist_field,
                target=target,
            )
            if route is None:
                self.undeliverable += 1
                continue
            for sat, e in route.per_sat_energy.items():
                tx[sat] += e
            delays.append(route.delay_s)
            routed += 1
        runtime = time.perf_counter() - t0

        return _StepResult(proc, tx, routed, delays, 0.0, runtime, len(new_tasks))


class _HroaEngine:
    """Pre-process onboard, then push the shrunken data out at the next
    contact, first come first served per link."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.queues: dict[SatelliteId, list[tuple[Task, float, float]]] = {}

    def step(self, k, snapshot, new_tasks, levels, site_pos, is_last) -> _StepResult:
        ctx, cfg = self.ctx, self.ctx.cfg
        n = len(levels)
        proc = np.zeros(n)
        tx = np.zeros(n)
        delays: list[float] = []

        battery_proto = ctx.battery_view(0.0)
        for task in new_tasks:
            energy, bits = hroa_process(task, battery_proto, cfg.hroa_reduction_factor)
            proc[task.source] += energy
            proc_delay = task.cycles / cfg.sat_compute_capability_hz
            self.queues.setdefault(task.source, []).append((task, bits, proc_delay))

        t0 = time.perf_counter()
        drained = 0
        for sat in sorted(self.queues):
            queue = self.queues[sat]
            edges = snapshot.edges_from(sat)
            if not queue or not edges:
                continue
            remaining = {e: e.capacity_bits(cfg.interval_s) for e in edges}
            sent = 0
            for task, bits, proc_delay in queue:
                edge = next((e for e in edges if remaining[e] >= bits), None)
                if edge is None:
                    break  # strict FCFS: the head blocks the rest
                remaining[edge] -= bits
                tx[sat] += cfg.tx_power_per_mbps_w * bits / 1e6
                slant_km = float(
                    np.linalg.norm(snapshot.sat_positions[sat] - site_pos[ctx.site_row[edge.site]])
                )
                delays.append(
                    proc_delay
                    + slant_km / SPEED_OF_LIGHT_KM_S
                    + bits / edge.bandwidth_bps
                    + ctx.site_delay(edge.site, task.destination)
                )
                sent += 1
            del queue[:sent]
            drained += sent
        runtime = time.perf_counter() - t0

        return _StepResult(proc, tx, drained, delays, 0.0, runtime, len(new_tasks))

    @property
    def backlog(self) -> int:
        return sum(len(q) for q in self.queues.values())


class _NoneEngine:
    """Everything is computed onboard at arrival; results ride home later."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx

    def step(self, k, snapshot, new_tasks, levels, site_pos, is_last) -> _StepResult:
        cfg = self.ctx.cfg
        n = len(levels)
        proc = np.zeros(n)
        tx = np.zeros(n)
        delays: list[float] = []

        t0 = time.perf_counter()
        battery_proto = self.ctx.battery_view(0.0)
        for task in new_tasks:
            proc[task.source] += no_offload(task, battery_proto)
            delays.append(task.cycles / cfg.sat_compute_capability_hz)
        runtime = time.perf_counter() - t0

        return _StepResult(proc, tx, len(new_tasks), delays, 0.0, runtime, len(new_tasks))


_ENGINES = {"ao2": _Ao2Engine, "cct": _CctEngine, "hroa": _HroaEngine, "none": _NoneEngine}


def settle_batteries(
    levels: np.ndarray,
    sunlit: np.ndarray,
    onboard_j: np.ndarray,
    capacity_j: float,
    harvest_rate_w: float,
    baseline_rate_w: float,
    duration_s: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance every battery one interval and return (new levels, wear).

    level_end = clamp(level + harvest - baseline - onboard work), with the
    wear of each satellite integrated over its depth-of-discharge move;
    charging satellites wear nothing.
    """
    harvested = harvest_rate_w * sunlit.astype(float) * duration_s
    new_levels = np.clip(
        levels + harvested - baseline_rate_w * duration_s - onboard_j, 0.0, capacity_j
    )
    d0 = (capacity_j - levels) / capacity_j
    d1 = (capacity_j - new_levels) / capacity_j
    wear = np.maximum(0.0, wear_primitive(d1) - wear_primitive(d0))
    return new_levels, wear


def run(cfg: ScenarioConfig) -> RunResult:
    """Simulate one scheme over the configured horizon."""
    ctx = _Context(cfg)
    n_sats = ctx.constellation.num_sats
    engine = _ENGINES[cfg.scheme](ctx)
    task_rng = np.random.default_rng([cfg.rng_seed, 23])

    capacity = cfg.battery_capacity_j
    levels = np.full(n_sats, capacity * cfg.battery_initial_level_frac)

    rows: list[IntervalMetrics] = []
    delays_all: list[float] = []
    next_task_id = 0
    totals = {
        "energy_j": 0.0, "life_consumed": 0.0, "spend_usd": 0.0,
        "tasks_generated": 0, "tasks_scheduled": 0,
    }
    runtimes: list[float] = []
    handled_counts: list[int] = []

    for k in range(cfg.horizon_intervals):
        snapshot = ctx.snapshot(k)
        site_pos = site_positions(ctx.sites, IntervalIndex(k, cfg.interval_s).mid_s)
        new_tasks = generate_tasks(cfg, k, task_rng, next_task_id, ctx.site_ids, ctx.dest_weights)
        next_task_id += len(new_tasks)

        step = engine.step(
            k, snapshot, new_tasks, levels, site_pos, is_last=(k == cfg.horizon_intervals - 1)
        )

        lit = np.array([snapshot.sunlit[i] for i in range(n_sats)])
        onboard = step.processing_j + step.tx_j
        levels, wear = settle_batteries(
            levels, lit, onboard, capacity,
            cfg.harvest_rate_w, cfg.baseline_rate_w, cfg.interval_s,
        )

        energy = float(onboard.sum())
        life = float(wear.sum())
        runtime = step.runtime_s if cfg.record_runtime else 0.0
        rows.append(
            IntervalMetrics(
                interval=k,
                scheme=cfg.scheme,
                total_energy_j=energy,
                total_life_consumed=life,
                tasks_generated=len(new_tasks),
                tasks_scheduled=step.scheduled,
                avg_delay_s=float(np.mean(step.delays)) if step.delays else 0.0,
                budget_spent_usd=step.spend,
                algo_runtime_s=runtime,
            )
        )
        delays_all.extend(step.delays)
        totals["energy_j"] += energy
        totals["life_consumed"] += life
        totals["spend_usd"] += step.spend
        totals["tasks_generated"] += len(new_tasks)
        totals["tasks_scheduled"] += step.scheduled
        runtimes.append(step.runtime_s)
        handled_counts.append(step.tasks_handled)

    summary = _summarize(cfg, ctx, rows, delays_all, totals, runtimes, handled_counts, engine)
    return RunResult(metrics=rows, summary=summary)


def _summarize(cfg, ctx, rows, delays, totals, runtimes, handled, engine) -> dict:
    delays_arr = np.array(delays) if delays else np.array([0.0])
    per_task_ms = [
        1e3 * r / h for r, h in zip(runtimes, handled) if h > 0
    ]
    record = cfg.record_runtime
    summary = {
        "scheme": cfg.scheme,
        "seed": cfg.rng_seed,
        "num_sats": ctx.constellation.num_sats,
        "horizon_intervals": cfg.horizon_intervals,
        "budget_per_interval_usd": cfg.budget_per_interval_usd,
        "totals": dict(totals),
        "delay_s": {
            "count": len(delays),
            "mean": float(delays_arr.mean()),
            "p50": float(np.percentile(delays_arr, 50)),
            "p95": float(np.percentile(delays_arr, 95)),
        },
        "runtime": {
            "mean_interval_s": float(np.mean(runtimes)) if record and runtimes else 0.0,
            "std_interval_s": float(np.std(runtimes)) if record and runtimes else 0.0,
            "mean_task_ms": float(np.mean(per_task_ms)) if record and per_task_ms else 0.0,
            "std_task_ms": float(np.std(per_task_ms)) if record and per_task_ms else 0.0,
        },
        "energy_per_interval_j": [r.total_energy_j for r in rows],
        "life_per_interval": [r.total_life_consumed for r in rows],
    }
    if isinstance(engine, _Ao2Engine):
        summary["ao2"] = {
            "direct_deliveries": engine.direct_count,
            "fallback_local": engine.fallback_count,
            "expired_no_contact": engine.expired_count,
            "mean_wait_intervals": float(np.mean(engine.waits)) if engine.waits else 0.0,
        }
    if isinstance(engine, _HroaEngine):
        summary["hroa"] = {"backlog_at_end": engine.backlog}
    if isinstance(engine, _CctEngine):
        summary["cct"] = {"undeliverable": engine.undeliverable}
    return summary


def _format_value(v) -> str:
    return str(v)


def emit(metrics: Iterable[IntervalMetrics], fmt: str, path) -> Path:
    """Write the per-interval rows; column order is fixed and byte-stable."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(METRICS_COLUMNS)
            for m in metrics:
                writer.writerow([_format_value(getattr(m, c)) for c in METRICS_COLUMNS])
    elif fmt == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for m in metrics:
                fh.write(json.dumps({c: getattr(m, c) for c in METRICS_COLUMNS}) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def parse_metrics_csv(path) -> list[IntervalMetrics]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                IntervalMetrics(
                    interval=int(row["interval"]),
                    scheme=row["scheme"],
                    total_energy_j=float(row["total_energy_j"]),
                    total_life_consumed=float(row["total_life_consumed"]),
                    tasks_generated=int(row["tasks_generated"]),
                    tasks_scheduled=int(row["tasks_scheduled"]),
                    avg_delay_s=float(row["avg_delay_s"]),
                    budget_spent_usd=float(row["budget_spent_usd"]),
                    algo_runtime_s=float(row["algo_runtime_s"]),
                )
            )
    return out


def write_summary(summary: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def sweep_budget(
    cfg: ScenarioConfig,
    budgets: Sequence[float],
    schemes: Sequence[str] = ("ao2", "cct", "hroa"),
) -> list[dict]:
    """Re-run the scenario across budget levels; one row per (scheme, budget)."""
    rows = []
    for scheme in schemes:
        for b in budgets:
            sub = dataclasses.replace(cfg, scheme=scheme, budget_per_interval_usd=float(b))
            result = run(sub)
            rows.append(
                {
                    "scheme": scheme,
                    "budget_usd": float(b),
                    "total_energy_j": result.summary["totals"]["energy_j"],
                    "total_life_consumed": result.summary["totals"]["life_consumed"],
                    "mean_delay_s": result.summary["delay_s"]["mean"],
                    "tasks_scheduled": result.summary["totals"]["tasks_scheduled"],
                    "spend_usd": result.summary["totals"]["spend_usd"],
                }
            )
    return rows


def sweep_constellation(
    cfg: ScenarioConfig,
    sizes: Sequence[tuple[int, int]],
    schemes: Sequence[str] = ("ao2", "cct", "hroa"),
) -> list[dict]:
    """Re-run the scenario across constellation sizes (planes, sats/plane)."""
    rows = []
    for scheme in schemes:
        for planes, spp in sizes:
            sub = dataclasses.replace(cfg, scheme=scheme, num_planes=planes, sats_per_plane=spp)
            result = run(sub)
            rows.append(
                {
                    "scheme": scheme,
                    "num_planes": planes,
                    "sats_per_plane": spp,
                    "n_sats": planes * spp,
                    "total_energy_j": result.summary["totals"]["energy_j"],
                    "total_life_consumed": result.summary["totals"]["life_consumed"],
                    "mean_delay_s": result.summary["delay_s"]["mean"],
                    "tasks_scheduled": result.summary["totals"]["tasks_scheduled"],
                }
            )
    return rows


def bench_runtime(
    cfg: ScenarioConfig, sizes: Sequence[tuple[int, int]], intervals: int = 12
) -> list[dict]:
    """Measure orchestrator runtime across constellation sizes."""
    rows = []
    for planes, spp in sizes:
        sub = dataclasses.replace(
            cfg, scheme="ao2", num_planes=planes, sats_per_plane=spp,
            horizon_intervals=intervals, record_runtime=True,
        )
        result = run(sub)
        rt = result.summary["runtime"]
        rows.append(
            {
                "n_sats": planes * spp,
                "mean_interval_s": rt["mean_interval_s"],
                "std_interval_s": rt["std_interval_s"],
                "mean_task_ms": rt["mean_task_ms"],
                "std_task_ms": rt["std_task_ms"],
            }
        )
    return rows


def write_rows_csv(rows: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if rows:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _format_value(v) for k, v in row.items()})
    return path


def random_interval_state(
    rng: np.random.Generator,
    n_sats: int = 4,
    n_sites: int = 4,
    n_tasks: int = 8,
    max_edges_per_sat: int = 3,
    duration_s: float = 60.0,
) -> IntervalState:
    """Synthetic single-interval instance with binding capacity and budget.

    Used by the oracle-gap and feasibility sweeps; no orbital geometry, just
    a random visibility graph with task volumes sized so that links and the
    budget both pinch.
    """
    sites = {}
    for sid in range(n_sites):
        sites[sid] = GroundSite(
            id=sid,
            lat_deg=float(rng.uniform(-60, 60)),
            lon_deg=float(rng.uniform(-179, 180)),
            compute_power_w=float(rng.uniform(50, 500)),
            compute_capability_hz=float(rng.uniform(5e9, 5e10)),
        )

    mean_vol = 2e7
    edges = []
    positions = {}
    sunlit = {}
    for sat in range(n_sats):
        positions[sat] = np.array([6921.0, 0.0, 0.0]) + rng.normal(0, 100, 3)
        sunlit[sat] = bool(rng.random() < 0.6)
        n_edges = min(int(rng.integers(0, max_edges_per_sat + 1)), n_sites)
        for sid in rng.choice(n_sites, size=n_edges, replace=False):
            edges.append(
                GslEdge(
                    satellite=sat,
                    site=int(sid),
                    bandwidth_bps=float(rng.uniform(0.5, 4.0) * mean_vol / duration_s),
                    elevation_deg=float(rng.uniform(25, 90)),
                )
            )
    snapshot = TopologySnapshot(
        interval=IntervalIndex(0, duration_s),
        sat_positions=positions,
        gsl_edges=tuple(edges),
        sunlit=sunlit,
    )

    tasks = {}
    for tid in range(n_tasks):
        vol = float(rng.uniform(0.3, 2.0) * mean_vol)
        tasks[tid] = Task(
            id=tid,
            source=int(rng.integers(0, n_sats)),
            destination=int(rng.integers(0, n_sites)),
            cycles=vol * 737.5,
            volume_bits=vol,
            priority=int(rng.integers(0, 3)),
        )

    batteries = {
        sat: BatteryState(
            capacity_j=1.44e5,
            level_j=float(rng.uniform(0.15, 1.0) * 1.44e5),
        )
        for sat in range(n_sats)
    }
    prices = {sid: float(rng.uniform(0.04, 0.2)) for sid in sites}

    # Budget drawn against the cheapest possible full-schedule cost so that
    # the constraint binds on a healthy fraction of instances.
    min_costs = []
    for task in tasks.values():
        opts = [
            task_cost(task, sites[e.site], prices[e.site])
            for e in snapshot.edges_from(task.source)
        ]
        if opts:
            min_costs.append(min(opts))
    full = sum(min_costs) if min_costs else 1.0
    budget = float(rng.uniform(0.1, 1.2) * max(full, 1e-12))

    return IntervalState(
        snapshot=snapshot,
        tasks=tasks,
        batteries=batteries,
        ledger=BudgetLedger(budget),
        sites=sites,
        prices=prices,
    )


def oracle_compare(seed: int, instances: int = 200, n_tasks: int = 7,
                   max_edges: int = 3) -> list[dict]:
    """Utility of the greedy orchestrator against the exhaustive solver on
    random small instances, plus the never-offload floor."""
    from .oracle import exact_solve
    from .orchestrator import ao2, assignment_utility

    rng = np.random.default_rng(seed)
    rows = []
    for i in range(instances):
        state = random_interval_state(
            rng,
            n_sats=int(rng.integers(2, 5)),
            n_sites=int(rng.integers(2, 5)),
            n_tasks=int(rng.integers(2, n_tasks + 1)),
            max_edges_per_sat=max_edges,
        )
        baseline = Assignment()
        for tid in state.tasks:
            baseline.skip(tid)
        u_none = assignment_utility(state, baseline)[0]

        oracle_state = dataclasses.replace(
            state, ledger=BudgetLedger(state.ledger.budget_per_interval), link_used_bits={}
        )
        u_oracle = exact_solve(oracle_state, max_edges=max_edges + 1).utility
        greedy = ao2(state)
        u_greedy = assignment_utility(state, greedy)[0]

        span = u_oracle - u_none
        ratio = 1.0 if span <= 1e-12 else (u_greedy - u_none) / span
        rows.append(
            {
                "instance": i,
                "u_oracle": u_oracle,
                "u_ao2": u_greedy,
                "u_none": u_none,
                "gain_ratio": ratio,
            }
        )
    return rows
