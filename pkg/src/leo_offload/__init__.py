"""Discrete-time LEO constellation task-offloading simulator.

Library surface: domain types, orbital geometry, battery wear, electricity
economics, the greedy offload orchestrator with its exact small-instance
oracle, relay/preprocessing baselines, and the scenario harness.
"""

__version__ = "0.1.0"

from .baselines import (
    IslTopology,
    RelayRoute,
    build_isl_topology,
    cct_route,
    hroa_process,
    no_offload,
)
from .battery import (
    BatteryState,
    dod,
    harvested_energy,
    life_consumption,
    processing_energy,
    remaining_energy,
    remaining_energy_local,
    sustainability_utility,
    transmission_energy,
    wear_kernel,
    wear_primitive,
)
from .economics import (
    BudgetLedger,
    PriceTrace,
    check_budget,
    load_prices_csv,
    price_at,
    task_cost,
    try_commit,
)
from .harness import (
    IntervalMetrics,
    RunResult,
    ScenarioConfig,
    bench_runtime,
    emit,
    generate_tasks,
    oracle_compare,
    parse_metrics_csv,
    random_interval_state,
    run,
    sweep_budget,
    sweep_constellation,
    write_summary,
)
from .model import (
    Assignment,
    GroundSite,
    GslEdge,
    IntervalIndex,
    Task,
    TopologySnapshot,
    ValidationReport,
    validate_assignment,
)
from .oracle import InstanceTooLarge, OracleResult, enumerate_count, exact_solve
from .orbit import (
    ConstellationConfig,
    ContactWindow,
    build_snapshot,
    contact_windows,
    ground_delay,
    propagate,
    sunlit,
)
from .orchestrator import (
    IntervalState,
    ao2,
    ao2_parallel,
    assignment_utility,
    candidate_set,
    carry_over,
    check_bandwidth,
    feasible_edges,
)
from .ranking import (
    SatelliteRank,
    best_site_for_task,
    delta_qos,
    delta_sustainability,
    normalized_fee,
    normalized_volume,
    qos_utility,
    rank_satellites,
)
