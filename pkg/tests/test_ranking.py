"""QoS utility, normalization terms, relaxed deltas, and the satellite order."""

import numpy as np
import pytest

from leo_offload.battery import BatteryState, wear_primitive
from leo_offload.ranking import (
    DELAY_FLOOR_S,
    best_site_for_task,
    delta_qos,
    delta_sustainability,
    normalized_fee,
    normalized_volume,
    qos_utility,
    rank_satellites,
)
from leo_offload.orbit import EARTH_RADIUS_KM, SPEED_OF_LIGHT_KM_S

from conftest import make_edge, make_site, make_snapshot, make_task


def sites_at_arc_km(*distances_km):
    """Site 0 at the origin point, then one site per requested arc distance."""
    catalog = {0: make_site(0, lat=0.0, lon=0.0)}
    for i, d in enumerate(distances_km, start=1):
        catalog[i] = make_site(i, lat=0.0, lon=np.rad2deg(d / EARTH_RADIUS_KM))
    return catalog


def test_qos_empty_is_zero():
    assert qos_utility([], {}) == 0.0


def test_qos_two_tasks_hand_value():
    # Delays 0.01 s and 0.015 s -> 2 / 0.025 = 80.
    d1 = 0.01 * SPEED_OF_LIGHT_KM_S  # km of arc giving a 10 ms delay
    d2 = 0.015 * SPEED_OF_LIGHT_KM_S
    catalog = sites_at_arc_km(d1, d2)
    scheduled = [
        (make_task(0, dest=1), catalog[0]),
        (make_task(1, dest=2), catalog[0]),
    ]
    assert qos_utility(scheduled, catalog) == pytest.approx(80.0, rel=1e-9)


def test_qos_decreases_when_a_delay_doubles():
    d1 = 0.01 * SPEED_OF_LIGHT_KM_S
    catalog_near = sites_at_arc_km(d1, 0.015 * SPEED_OF_LIGHT_KM_S)
    catalog_far = sites_at_arc_km(d1, 0.030 * SPEED_OF_LIGHT_KM_S)
    sched = lambda cat: [(make_task(0, dest=1), cat[0]), (make_task(1, dest=2), cat[0])]
    assert qos_utility(sched(catalog_far), catalog_far) < qos_utility(
        sched(catalog_near), catalog_near
    )


def test_qos_destination_colocated_uses_floor():
    catalog = {0: make_site(0)}
    value = qos_utility([(make_task(0, dest=0), catalog[0])], catalog)
    assert value == pytest.approx(1.0 / DELAY_FLOOR_S)
    assert np.isfinite(value)


def test_normalized_fee_cases():
    assert normalized_fee([2.0, 2.0, 2.0]) == 1.0
    assert normalized_fee([1.0, 3.0]) == pytest.approx(4.0 / 6.0)
    assert normalized_fee([5.0]) == 1.0
    assert normalized_fee([0.0, 0.0]) == 1.0  # free energy: neutral
    with pytest.raises(ValueError):
        normalized_fee([])


def test_normalized_volume_cases():
    assert normalized_volume([1e8, 1e8]) == 1.0
    assert normalized_volume([1e8, 3e8]) == pytest.approx(4.0 / 6.0)
    assert normalized_volume([42.0]) == 1.0


def test_normalization_bounds(rng):
    for _ in range(200):
        xs = rng.uniform(0.1, 10.0, size=rng.integers(1, 9)).tolist()
        v = normalized_fee(xs)
        assert 0.0 < v <= 1.0
        assert normalized_fee([3.7 * x for x in xs]) == pytest.approx(v)  # scale-free


def test_best_site_prefers_delay_then_id():
    catalog = sites_at_arc_km(500.0, 1500.0)
    task = make_task(0, dest=0)
    # Destination is site 0; site 1 is 500 km away, site 2 is 1500 km away.
    assert best_site_for_task(task, [catalog[1], catalog[2]], catalog).id == 1
    assert best_site_for_task(task, [catalog[0], catalog[1]], catalog).id == 0
    assert best_site_for_task(task, [], catalog) is None


def test_best_site_single_candidate():
    catalog = sites_at_arc_km(700.0)
    assert best_site_for_task(make_task(0, dest=0), [catalog[1]], catalog).id == 1


def test_delta_qos_hand_value():
    # Three tasks, best-site delays 5, 5, 10 ms -> 3 / 0.020 = 150.
    d5 = 0.005 * SPEED_OF_LIGHT_KM_S
    d10 = 0.010 * SPEED_OF_LIGHT_KM_S
    catalog = sites_at_arc_km(d5, d10)
    snap = make_snapshot([make_edge(0, 0)])
    tasks = [make_task(0, dest=1), make_task(1, dest=1), make_task(2, dest=2)]
    assert delta_qos(tasks, snap, catalog) == pytest.approx(150.0, rel=1e-9)


def test_delta_qos_no_contact_is_zero():
    catalog = {0: make_site(0)}
    snap = make_snapshot([], n_sats=1)
    assert delta_qos([make_task(0, dest=0)], snap, catalog) == 0.0


def test_delta_qos_closer_site_never_hurts():
    d = 0.008 * SPEED_OF_LIGHT_KM_S
    catalog = sites_at_arc_km(d, d / 4)
    tasks = [make_task(0, dest=1)]
    without = delta_qos(tasks, make_snapshot([make_edge(0, 1)], n_sats=1), catalog)
    with_closer = delta_qos(
        tasks, make_snapshot([make_edge(0, 1), make_edge(0, 2)], n_sats=1), catalog
    )
    assert with_closer >= without


def test_delta_sustainability_zero_without_work():
    battery = BatteryState(capacity_j=1e5, level_j=5e4)
    assert delta_sustainability(battery, [], 1.0, 60.0) == 0.0


def test_delta_sustainability_deep_discharge_hand_value():
    # Battery 1e5 J at 4e4 J; the backlog costs 3e4 J of onboard processing.
    # No harvest, no baseline: local end level 1e4, offloaded end level 4e4.
    battery = BatteryState(
        capacity_j=1e5, level_j=4e4, harvest_rate_w=0.0, baseline_rate_w=0.0,
        compute_power_w=10.0, compute_capability_hz=1e9,
    )
    tasks = [make_task(0, cycles=3e12, volume=1.0)]  # 10 W * 3e12 / 1e9 = 3e4 J
    expected = (wear_primitive(0.9) - wear_primitive(0.6)) - 0.0
    got = delta_sustainability(battery, tasks, 0.0, 60.0)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got > 0.0


def test_delta_sustainability_grows_with_cycles(rng):
    for _ in range(100):
        cap = float(rng.uniform(5e4, 2e5))
        battery = BatteryState(
            capacity_j=cap, level_j=float(rng.uniform(0.3, 1.0) * cap),
            harvest_rate_w=float(rng.uniform(0, 100)),
            baseline_rate_w=float(rng.uniform(0, 40)),
        )
        vol = float(rng.uniform(1e6, 1e8))
        lit = float(rng.uniform(0, 1))
        small = [make_task(0, volume=vol)]
        big = [make_task(0, volume=vol, cycles=2 * vol * 737.5)]
        d_small = delta_sustainability(battery, small, lit, 60.0)
        d_big = delta_sustainability(battery, big, lit, 60.0)
        assert d_small >= 0.0
        assert d_big >= d_small - 1e-15


def _rank_context(tasks_by_sat, edges, catalog, prices=None, levels=None):
    snap = make_snapshot(edges, n_sats=max(tasks_by_sat) + 1)
    batteries = {
        sat: BatteryState(capacity_j=1.44e5, level_j=(levels or {}).get(sat, 1.0e5))
        for sat in tasks_by_sat
    }
    prices = prices or {sid: 0.1 for sid in catalog}
    return snap, batteries, prices


def test_rank_single_candidate():
    catalog = sites_at_arc_km(500.0)
    tasks_by_sat = {0: [make_task(0, source=0, dest=0)]}
    snap, batteries, prices = _rank_context(tasks_by_sat, [make_edge(0, 1)], catalog)
    ranks = rank_satellites(tasks_by_sat, snap, catalog, batteries, prices, 60.0)
    assert [r.satellite for r in ranks] == [0]
    assert ranks[0].norm_fee == 1.0
    assert ranks[0].norm_volume == 1.0


def test_rank_prefers_smaller_normalizer_at_equal_deltas():
    # Same delta terms on both satellites; fee+volume normalizer 2.0 vs ~1.33
    # (two equal-cost tasks vs cost ratio 1:3), so satellite 1 ranks first.
    catalog = sites_at_arc_km(800.0)
    t_a = [
        make_task(0, source=0, dest=1, volume=1e6),
        make_task(1, source=0, dest=1, volume=1e6),
    ]
    t_b = [
        make_task(2, source=1, dest=1, volume=1e6),
        make_task(3, source=1, dest=1, volume=3e6),
    ]
    tasks_by_sat = {0: t_a, 1: t_b}
    edges = [make_edge(0, 1), make_edge(1, 1)]
    snap, batteries, prices = _rank_context(tasks_by_sat, edges, catalog)
    ranks = rank_satellites(tasks_by_sat, snap, catalog, batteries, prices, 60.0)
    assert ranks[0].norm_fee + ranks[0].norm_volume < ranks[1].norm_fee + ranks[1].norm_volume
    assert ranks[0].satellite == 1


def test_rank_order_invariant_to_uniform_cost_scaling(rng):
    catalog = sites_at_arc_km(400.0, 1200.0)
    tasks_by_sat = {
        0: [make_task(0, source=0, dest=1, volume=float(rng.uniform(1e6, 5e6)))
            for _ in range(3)],
        1: [make_task(3, source=1, dest=2, volume=float(rng.uniform(1e6, 5e6)))
            for _ in range(2)],
    }
    # Re-id tasks to keep them unique.
    tasks_by_sat[0] = [make_task(i, source=0, dest=1, volume=t.volume_bits)
                       for i, t in enumerate(tasks_by_sat[0])]
    tasks_by_sat[1] = [make_task(10 + i, source=1, dest=2, volume=t.volume_bits)
                       for i, t in enumerate(tasks_by_sat[1])]
    edges = [make_edge(0, 1), make_edge(1, 2)]
    snap, batteries, prices = _rank_context(tasks_by_sat, edges, catalog)

    base = rank_satellites(tasks_by_sat, snap, catalog, batteries, prices, 60.0)
    scaled_prices = {sid: 5.0 * p for sid, p in prices.items()}
    scaled = rank_satellites(tasks_by_sat, snap, catalog, batteries, scaled_prices, 60.0)
    assert [r.satellite for r in base] == [r.satellite for r in scaled]
    assert base[0].norm_fee == pytest.approx(scaled[0].norm_fee)


def test_rank_deterministic_and_tie_broken_by_id():
    catalog = sites_at_arc_km(600.0)
    tasks_by_sat = {
        1: [make_task(0, source=1, dest=1, volume=2e6)],
        0: [make_task(1, source=0, dest=1, volume=2e6)],
    }
    edges = [make_edge(0, 1), make_edge(1, 1)]
    snap, batteries, prices = _rank_context(tasks_by_sat, edges, catalog)
    r1 = rank_satellites(tasks_by_sat, snap, catalog, batteries, prices, 60.0)
    r2 = rank_satellites(tasks_by_sat, snap, catalog, batteries, prices, 60.0)
    assert [r.satellite for r in r1] == [r.satellite for r in r2]
    assert r1[0].m == pytest.approx(r1[1].m)
    assert [r.satellite for r in r1] == [0, 1]


def test_rank_rejects_empty_task_list():
    catalog = sites_at_arc_km(600.0)
    snap, batteries, prices = _rank_context({0: []}, [], catalog)
    batteries[0] = BatteryState(capacity_j=1.44e5, level_j=1e5)
    with pytest.raises(ValueError):
        rank_satellites({0: []}, snap, catalog, batteries, prices, 60.0)
