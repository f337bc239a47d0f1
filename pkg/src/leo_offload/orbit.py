"""Circular-orbit constellation geometry.

Walker-delta propagation, ground-satellite visibility, eclipse flags, and
great-circle delays, all over a spherical Earth. Satellites follow closed
Keplerian circles in an Earth-centered inertial frame; ground sites rotate
with the Earth underneath them. That convention keeps satellite positions
exactly periodic in the orbital period while contact windows still drift
from interval to interval the way a rotating planet makes them drift.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .model import (
    GroundSite,
    GroundSiteId,
    GslEdge,
    IntervalIndex,
    SatelliteId,
    TopologySnapshot,
)

EARTH_RADIUS_KM = 6371.0
EARTH_MU_KM3_S2 = 398600.4418
EARTH_ROTATION_RAD_S = 7.2921159e-5
SPEED_OF_LIGHT_KM_S = 299792.458

DEFAULT_ELEVATION_MASK_DEG = 25.0
DEFAULT_BANDWIDTH_BPS = 1e9
DEFAULT_SUN_DIRECTION = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class ConstellationConfig:
    """Walker-delta shell: evenly spaced planes, evenly phased satellites."""

    num_planes: int
    sats_per_plane: int
    altitude_km: float
    inclination_deg: float = 53.0
    phase_offset: int = 1

    def __post_init__(self):
        if self.num_planes < 1 or self.sats_per_plane < 1:
            raise ValueError("constellation needs at least one plane and one satellite")
        if self.altitude_km <= 0:
            raise ValueError("altitude must be positive")

    @property
    def num_sats(self) -> int:
        return self.num_planes * self.sats_per_plane

    @property
    def semi_major_axis_km(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_km

    @property
    def orbital_period_s(self) -> float:
        a = self.semi_major_axis_km
        return 2.0 * np.pi * np.sqrt(a**3 / EARTH_MU_KM3_S2)


@dataclass(frozen=True)
class ContactWindow:
    """Maximal run of consecutive intervals during which one link exists."""

    satellite: SatelliteId
    site: GroundSiteId
    start: int
    end: int  # inclusive

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError("window end precedes start")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def satellite_positions(cfg: ConstellationConfig, t: float) -> np.ndarray:
    """All satellite positions at time t, shape (N, 3), km.

    Satellite k = plane * sats_per_plane + slot. Planes are spread evenly in
    ascending node over the full circle; in-plane slots are spread evenly in
    argument of latitude, with the Walker phasing term coupling plane index
    to along-track phase.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    a = cfg.semi_major_axis_km
    inc = np.deg2rad(cfg.inclination_deg)
    n = np.sqrt(EARTH_MU_KM3_S2 / a**3)  # mean motion, rad/s

    planes = np.arange(cfg.num_planes)
    slots = np.arange(cfg.sats_per_plane)
    raan = 2.0 * np.pi * planes / cfg.num_planes
    phase = (
        2.0 * np.pi * slots[None, :] / cfg.sats_per_plane
        + 2.0 * np.pi * cfg.phase_offset * planes[:, None] / (cfg.num_planes * cfg.sats_per_plane)
        + n * t
    )  # (P, S)

    cos_u, sin_u = np.cos(phase), np.sin(phase)
    cos_o, sin_o = np.cos(raan)[:, None], np.sin(raan)[:, None]
    cos_i, sin_i = np.cos(inc), np.sin(inc)

    x = a * (cos_u * cos_o - sin_u * sin_o * cos_i)
    y = a * (cos_u * sin_o + sin_u * cos_o * cos_i)
    z = a * (sin_u * sin_i)
    return np.stack([x, y, z], axis=-1).reshape(cfg.num_sats, 3)


def propagate(cfg: ConstellationConfig, t: float) -> dict[SatelliteId, np.ndarray]:
    """Satellite id -> position (km) at time t. Deterministic in (cfg, t)."""
    pos = satellite_positions(cfg, t)
    return {i: pos[i] for i in range(cfg.num_sats)}


def site_ecef(lat_deg: float, lon_deg: float, t: float = 0.0) -> np.ndarray:
    """Surface position of a ground point at time t (Earth rotation applied)."""
    lat = np.deg2rad(lat_deg)
    lon = np.deg2rad(lon_deg) + EARTH_ROTATION_RAD_S * t
    return EARTH_RADIUS_KM * np.array(
        [np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)]
    )


def site_positions(sites: list[GroundSite], t: float) -> np.ndarray:
    """Positions of all sites at time t, shape (M, 3), km."""
    lat = np.deg2rad(np.array([s.lat_deg for s in sites]))
    lon = np.deg2rad(np.array([s.lon_deg for s in sites])) + EARTH_ROTATION_RAD_S * t
    return EARTH_RADIUS_KM * np.stack(
        [np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1
    )


def elevation_matrix(sat_pos: np.ndarray, site_pos: np.ndarray) -> np.ndarray:
    """Elevation (deg) of each satellite above each site's horizon, (N, M)."""
    rel = sat_pos[:, None, :] - site_pos[None, :, :]  # (N, M, 3)
    rng = np.linalg.norm(rel, axis=-1)
    zenith = site_pos / np.linalg.norm(site_pos, axis=-1, keepdims=True)
    sin_el = np.einsum("nmk,mk->nm", rel, zenith) / rng
    return np.rad2deg(np.arcsin(np.clip(sin_el, -1.0, 1.0)))


def sunlit(position: np.ndarray, sun_direction: np.ndarray) -> bool:
    """Cylindrical Earth-shadow test.

    A satellite is eclipsed when it sits on the anti-sun side and its
    distance from the shadow axis is under one Earth radius.
    """
    s = np.asarray(sun_direction, dtype=float)
    if not np.isclose(np.linalg.norm(s), 1.0, atol=1e-9):
        raise ValueError("sun_direction must be a unit vector")
    p = np.asarray(position, dtype=float)
    along = float(np.dot(p, s))
    if along >= 0.0:
        return True
    perp = float(np.linalg.norm(p - along * s))
    return perp >= EARTH_RADIUS_KM


def _sunlit_mask(sat_pos: np.ndarray, sun_direction: np.ndarray) -> np.ndarray:
    along = sat_pos @ sun_direction
    perp = np.linalg.norm(sat_pos - along[:, None] * sun_direction[None, :], axis=-1)
    return (along >= 0.0) | (perp >= EARTH_RADIUS_KM)


def build_snapshot(
    cfg: ConstellationConfig,
    sites: list[GroundSite],
    interval: IntervalIndex,
    elevation_mask_deg: float = DEFAULT_ELEVATION_MASK_DEG,
    default_bandwidth_bps: float = DEFAULT_BANDWIDTH_BPS,
    bandwidth_overrides: dict[GroundSiteId, float] | None = None,
    sun_direction: np.ndarray = DEFAULT_SUN_DIRECTION,
) -> TopologySnapshot:
    """Freeze the network for one interval.

    A link exists only if the satellite clears the elevation mask at both the
    interval start and end, so the full interval's capacity is usable.
    Eclipse flags are evaluated at the interval midpoint.
    """
    if not sites:
        raise ValueError("need at least one ground site")
    overrides = bandwidth_overrides or {}

    pos0 = satellite_positions(cfg, interval.start_s)
    pos1 = satellite_positions(cfg, interval.end_s)
    el0 = elevation_matrix(pos0, site_positions(sites, interval.start_s))
    el1 = elevation_matrix(pos1, site_positions(sites, interval.end_s))
    visible = (el0 >= elevation_mask_deg) & (el1 >= elevation_mask_deg)

    edges = []
    sat_idx, site_idx = np.nonzero(visible)
    for n, m in zip(sat_idx.tolist(), site_idx.tolist()):
        site = sites[m]
        edges.append(
            GslEdge(
                satellite=n,
                site=site.id,
                bandwidth_bps=overrides.get(site.id, default_bandwidth_bps),
                elevation_deg=float(min(el0[n, m], el1[n, m])),
            )
        )

    mid = satellite_positions(cfg, interval.mid_s)
    lit = _sunlit_mask(mid, np.asarray(sun_direction, dtype=float))
    return TopologySnapshot(
        interval=interval,
        sat_positions={i: mid[i] for i in range(cfg.num_sats)},
        gsl_edges=tuple(edges),
        sunlit={i: bool(lit[i]) for i in range(cfg.num_sats)},
    )


def contact_windows(
    cfg: ConstellationConfig,
    sites: list[GroundSite],
    horizon: range,
    interval_s: float = 60.0,
    elevation_mask_deg: float = DEFAULT_ELEVATION_MASK_DEG,
) -> list[ContactWindow]:
    """Maximal visibility runs per (satellite, site) pair over the horizon.

    Derived purely from per-interval snapshots, so a window re-tested via
    build_snapshot is visible at every interval it spans.
    """
    if not sites:
        return []
    open_runs: dict[tuple[int, int], int] = {}  # pair -> run start
    windows: list[ContactWindow] = []
    prev_pairs: set[tuple[int, int]] = set()

    for k in horizon:
        snap = build_snapshot(
            cfg, sites, IntervalIndex(k, interval_s), elevation_mask_deg=elevation_mask_deg
        )
        pairs = {(e.satellite, e.site) for e in snap.gsl_edges}
        for pair in pairs - prev_pairs:
            open_runs[pair] = k
        for pair in prev_pairs - pairs:
            windows.append(ContactWindow(pair[0], pair[1], open_runs.pop(pair), k - 1))
        prev_pairs = pairs

    last = max(horizon) if len(horizon) else -1
    for pair, start in open_runs.items():
        windows.append(ContactWindow(pair[0], pair[1], start, last))
    windows.sort(key=lambda w: (w.satellite, w.site, w.start))
    return windows


def _surface_unit(point) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    norm = np.linalg.norm(p)
    if norm == 0.0:
        raise ValueError("cannot project the Earth's center to the surface")
    return p / norm


def ground_delay(a, b) -> float:
    """Great-circle propagation delay in seconds between two ground points.

    Accepts a GroundSite or a raw position vector for the first endpoint
    (positions are projected to the surface along their radius); the second
    endpoint is a GroundSite. Symmetric, zero only for coincident points,
    and a true metric on the sphere.
    """
    ua = _surface_unit(site_ecef(a.lat_deg, a.lon_deg) if isinstance(a, GroundSite) else a)
    ub = _surface_unit(site_ecef(b.lat_deg, b.lon_deg) if isinstance(b, GroundSite) else b)
    angle = np.arctan2(np.linalg.norm(np.cross(ua, ub)), float(np.dot(ua, ub)))
    return EARTH_RADIUS_KM * angle / SPEED_OF_LIGHT_KM_S


def load_sites_csv(path) -> tuple[list[GroundSite], dict[GroundSiteId, float]]:
    """Read a ground-site catalog.

    Expected header: site_id,lat_deg,lon_deg,power_w,capability_hz with an
    optional trailing bandwidth_bps column. Returns the catalog plus the
    per-site bandwidth overrides found in that optional column.
    """
    sites: list[GroundSite] = []
    overrides: dict[GroundSiteId, float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"site_id", "lat_deg", "lon_deg", "power_w", "capability_hz"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"sites CSV {path} is missing required columns {sorted(required)}")
        for row in reader:
            sid = int(row["site_id"])
            sites.append(
                GroundSite(
                    id=sid,
                    lat_deg=float(row["lat_deg"]),
                    lon_deg=float(row["lon_deg"]),
                    compute_power_w=float(row["power_w"]),
                    compute_capability_hz=float(row["capability_hz"]),
                )
            )
            bw = row.get("bandwidth_bps")
            if bw not in (None, ""):
                overrides[sid] = float(bw)
    if len({s.id for s in sites}) != len(sites):
        raise ValueError("duplicate site ids in catalog")
    return sites, overrides
