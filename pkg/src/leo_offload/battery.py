"""Satellite energy ledger and lithium-ion depth-of-discharge wear model.

The wear kernel is the nonlinear per-cycle-depth degradation curve of
lithium-ion cells. Its definite integral over a discharge interval has the
closed-form primitive F(D) = D * 10^(0.8*(D-1)); the test suite cross-checks
that primitive against adaptive quadrature of the kernel itself. Other
chemistries can be modeled by swapping the kernel, but only the Li-ion one
ships here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .model import SatelliteId

LN10 = float(np.log(10.0))


@dataclass
class BatteryState:
    """Per-satellite battery ledger plus its fixed power-system parameters."""

    capacity_j: float
    level_j: float
    harvest_rate_w: float = 120.0       # solar input while sunlit
    baseline_rate_w: float = 30.0       # bus and payload housekeeping draw
    compute_power_w: float = 10.72      # onboard processing draw
    compute_capability_hz: float = 1.43e9
    tx_power_per_mbps_w: float = 0.08   # radio draw per Mbps of transmit rate
    life_consumed: float = 0.0          # accumulated wear, dimensionless

    def __post_init__(self):
        if self.capacity_j <= 0:
            raise ValueError("battery capacity must be positive")
        if not 0.0 <= self.level_j <= self.capacity_j:
            raise ValueError("battery level must lie in [0, capacity]")


def harvested_energy(b: BatteryState, sunlit_fraction: float, duration_s: float) -> float:
    """Energy collected over an interval: zero in eclipse, full rate in sun."""
    if not 0.0 <= sunlit_fraction <= 1.0:
        raise ValueError(f"sunlit fraction must be in [0, 1], got {sunlit_fraction}")
    return b.harvest_rate_w * sunlit_fraction * duration_s


def processing_energy(b: BatteryState, cycles: float) -> float:
    """Energy to execute `cycles` on the onboard computer."""
    if cycles < 0:
        raise ValueError("cycles must be non-negative")
    return b.compute_power_w * cycles / b.compute_capability_hz


def transmission_energy(b: BatteryState, volume_bits: float) -> float:
    """Radio energy to push `volume_bits` off the satellite.

    Transmit power scales with rate and transmit time scales inversely with
    it, so the energy is rate-independent: tx_power_per_mbps * volume in Mb.
    """
    if volume_bits < 0:
        raise ValueError("volume must be non-negative")
    return b.tx_power_per_mbps_w * volume_bits / 1e6


def remaining_energy(
    b: BatteryState, harvested_j: float, baseline_j: float, unscheduled_process_j_total: float
) -> float:
    """Battery level at interval end when the given onboard work is charged.

    Clamped below at zero (an empty battery stays empty) and above at
    capacity (a full battery sheds surplus harvest).
    """
    if min(harvested_j, baseline_j, unscheduled_process_j_total) < 0:
        raise ValueError("energy terms must be non-negative")
    raw = b.level_j + harvested_j - baseline_j - unscheduled_process_j_total
    return float(np.clip(raw, 0.0, b.capacity_j))


def remaining_energy_local(
    b: BatteryState, harvested_j: float, baseline_j: float, all_process_j_total: float
) -> float:
    """Counterfactual end-of-interval level with every task executed onboard.

    Same clamped balance as remaining_energy, charged with the full
    processing energy of all tasks held by the satellite.
    """
    return remaining_energy(b, harvested_j, baseline_j, all_process_j_total)


def dod(b: BatteryState, level_j: float) -> float:
    """Depth of discharge for a given level: 0 full, 1 empty."""
    if not 0.0 <= level_j <= b.capacity_j:
        raise ValueError("level must lie in [0, capacity]")
    return (b.capacity_j - level_j) / b.capacity_j


def wear_primitive(d):
    """Closed-form primitive of the Li-ion wear kernel: F(D) = D*10^(0.8(D-1))."""
    d = np.asarray(d, dtype=float)
    out = d * np.power(10.0, 0.8 * (d - 1.0))
    return float(out) if out.ndim == 0 else out


def wear_kernel(d):
    """Per-unit-depth wear rate; strictly positive on [0, 1]."""
    d = np.asarray(d, dtype=float)
    out = np.power(10.0, 0.8 * (d - 1.0)) * (1.0 + 0.8 * d * LN10)
    return float(out) if out.ndim == 0 else out


def life_consumption(d_begin: float, d_end: float, primitive=wear_primitive) -> float:
    """Wear incurred by moving the depth of discharge from d_begin to d_end.

    Evaluated via the closed-form primitive. Negative when d_end < d_begin
    (a charging interval); callers accumulating lifetime wear only add the
    positive part, since charge-direction "negative wear" is unphysical.
    Other chemistries plug in their own antiderivative via `primitive`.
    """
    for name, v in (("d_begin", d_begin), ("d_end", d_end)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return primitive(d_end) - primitive(d_begin)


def sustainability_utility(per_satellite_life: Mapping[SatelliteId, float]) -> float:
    """Negated total wear across satellites; higher is better."""
    return -float(sum(per_satellite_life.values()))


def apply_interval(
    b: BatteryState, harvested_j: float, baseline_j: float, onboard_work_j: float
) -> float:
    """Advance one battery through an interval and accumulate its wear.

    Returns the wear added this interval (zero on charging intervals).
    """
    d0 = dod(b, b.level_j)
    new_level = remaining_energy(b, harvested_j, baseline_j, onboard_work_j)
    wear = max(0.0, life_consumption(d0, dod(b, new_level)))
    b.level_j = new_level
    b.life_consumed += wear
    return wear
