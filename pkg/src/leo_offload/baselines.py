"""Comparison schemes: in-space relay routing, onboard pre-processing, and a
pure no-offload reference.

All three charge energy through the same battery operations as the
orchestrator, so cross-scheme energy and wear comparisons stay
apples-to-apples. None of them buys ground compute, so none of them touches
the electricity budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .battery import BatteryState, processing_energy, transmission_energy
from .model import SatelliteId, Task, TopologySnapshot
from .orbit import SPEED_OF_LIGHT_KM_S, ConstellationConfig

DEFAULT_ISL_RATE_BPS = 3e8
DEFAULT_REDUCTION_FACTOR = 0.25


@dataclass(frozen=True)
class IslTopology:
    """Static +grid wiring: two intra-plane and two cross-plane neighbors."""

    neighbors: Mapping[SatelliteId, tuple[SatelliteId, ...]]

    def degree(self, sat: SatelliteId) -> int:
        return len(self.neighbors.get(sat, ()))


def build_isl_topology(cfg: ConstellationConfig) -> IslTopology:
    """Wire each satellite to its ring neighbors in plane and across planes."""
    p, s = cfg.num_planes, cfg.sats_per_plane
    neighbors: dict[SatelliteId, tuple[SatelliteId, ...]] = {}
    for plane in range(p):
        for slot in range(s):
            sat = plane * s + slot
            links = {
                plane * s + (slot + 1) % s,
                plane * s + (slot - 1) % s,
                ((plane + 1) % p) * s + slot,
                ((plane - 1) % p) * s + slot,
            }
            links.discard(sat)  # degenerate rings (one plane / one slot)
            neighbors[sat] = tuple(sorted(links))
    return IslTopology(neighbors=neighbors)


@dataclass(frozen=True)
class RelayRoute:
    path: tuple[SatelliteId, ...]   # source first; last hop is above the destination
    energy_j: float                 # all transmissions, relay plus downlink
    delay_s: float                  # propagation + store-and-forward transmission
    per_sat_energy: Mapping[SatelliteId, float]


def hop_distance_field(isl: IslTopology, target: SatelliteId) -> dict[SatelliteId, int]:
    """BFS hop counts to the target; unreachable satellites are absent."""
    dist = {target: 0}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in isl.neighbors.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def overhead_satellite(
    snapshot: TopologySnapshot, dest_position: np.ndarray
) -> SatelliteId:
    """Satellite whose sub-satellite point lies nearest a ground position."""
    best, best_key = None, None
    unit = dest_position / np.linalg.norm(dest_position)
    for sat, pos in snapshot.sat_positions.items():
        d = -float(np.dot(pos / np.linalg.norm(pos), unit))  # smaller = closer
        key = (d, sat)
        if best_key is None or key < best_key:
            best, best_key = sat, key
    assert best is not None
    return best


def cct_route(
    task: Task,
    snapshot: TopologySnapshot,
    isl: IslTopology,
    dest_position: np.ndarray,
    tx_power_per_mbps_w: float = 0.08,
    isl_rate_bps: float = DEFAULT_ISL_RATE_BPS,
    downlink_rate_bps: float = 1e9,
    dist_field: Optional[dict[SatelliteId, int]] = None,
    target: Optional[SatelliteId] = None,
) -> Optional[RelayRoute]:
    """Relay the task over inter-satellite links to the satellite above its
    destination, then downlink.

    The path is the hop-shortest one, ties resolved toward the smaller
    next-hop id. Every transmitting satellite pays the radio energy for the
    full data volume; delay accumulates per-hop propagation plus
    store-and-forward transmission time. Returns None when the source cannot
    reach the overhead satellite.
    """
    if target is None:
        target = overhead_satellite(snapshot, dest_position)
    if dist_field is None:
        dist_field = hop_distance_field(isl, target)
    if task.source not in dist_field:
        return None

    path = [task.source]
    while path[-1] != target:
        u = path[-1]
        step = min(
            v for v in isl.neighbors[u] if dist_field.get(v, -1) == dist_field[u] - 1
        )
        path.append(step)

    tx_per_hop_j = tx_power_per_mbps_w * task.volume_bits / 1e6
    per_sat: dict[SatelliteId, float] = {}
    delay = 0.0
    for u, v in zip(path[:-1], path[1:]):
        per_sat[u] = per_sat.get(u, 0.0) + tx_per_hop_j
        hop_km = float(np.linalg.norm(snapshot.sat_positions[u] - snapshot.sat_positions[v]))
        delay += hop_km / SPEED_OF_LIGHT_KM_S + task.volume_bits / isl_rate_bps

    # Final downlink from the overhead satellite to its destination.
    per_sat[target] = per_sat.get(target, 0.0) + tx_per_hop_j
    slant_km = float(np.linalg.norm(snapshot.sat_positions[target] - dest_position))
    delay += slant_km / SPEED_OF_LIGHT_KM_S + task.volume_bits / downlink_rate_bps

    return RelayRoute(
        path=tuple(path),
        energy_j=sum(per_sat.values()),
        delay_s=delay,
        per_sat_energy=per_sat,
    )


def hroa_process(
    task: Task, battery: BatteryState, reduction_factor: float = DEFAULT_REDUCTION_FACTOR
) -> tuple[float, float]:
    """Pre-process onboard, shrinking the downlink volume.

    Returns (onboard processing energy, bits left to downlink). The full
    execution cost is paid on the satellite; only the data volume shrinks.
    """
    if not 0.0 < reduction_factor <= 1.0:
        raise ValueError(f"reduction factor must be in (0, 1], got {reduction_factor}")
    return processing_energy(battery, task.cycles), task.volume_bits * reduction_factor


def no_offload(task: Task, battery: BatteryState) -> float:
    """Process fully onboard; the data waits for a destination-proximal pass."""
    return processing_energy(battery, task.cycles)


def downlink_energy(battery: BatteryState, bits: float) -> float:
    """Radio energy for a ground transmission of `bits`."""
    return transmission_energy(battery, bits)
