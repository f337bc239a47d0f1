"""Shared builders for the test suite."""

import numpy as np
import pytest

from leo_offload.model import (
    GroundSite,
    GslEdge,
    IntervalIndex,
    Task,
    TopologySnapshot,
)


def make_site(sid=0, lat=0.0, lon=0.0, power=10.72, capability=1.43e9):
    return GroundSite(
        id=sid, lat_deg=lat, lon_deg=lon,
        compute_power_w=power, compute_capability_hz=capability,
    )


def make_task(tid=0, source=0, dest=0, volume=1e6, cycles=None, priority=0, created=0):
    return Task(
        id=tid, source=source, destination=dest,
        cycles=volume * 737.5 if cycles is None else cycles,
        volume_bits=volume, created_at=created, priority=priority,
    )


def make_edge(sat=0, site=0, bandwidth=1e9):
    return GslEdge(satellite=sat, site=site, bandwidth_bps=bandwidth)


def make_snapshot(edges, n_sats=None, interval=None, sunlit_all=True):
    if n_sats is None:
        n_sats = max((e.satellite for e in edges), default=0) + 1
    positions = {i: np.array([6921.0, 0.0, 0.0]) for i in range(n_sats)}
    return TopologySnapshot(
        interval=interval or IntervalIndex(0, 60.0),
        sat_positions=positions,
        gsl_edges=tuple(edges),
        sunlit={i: sunlit_all for i in range(n_sats)},
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
