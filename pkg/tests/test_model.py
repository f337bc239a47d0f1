"""Structural assignment validation and snapshot immutability."""

import dataclasses

import numpy as np
import pytest

from leo_offload.model import Assignment, IntervalIndex, Task, validate_assignment

from conftest import make_edge, make_snapshot, make_task


def _tasks(*tasks):
    return {t.id: t for t in tasks}


def test_all_zero_assignment_is_feasible():
    snap = make_snapshot([make_edge(0, 0)])
    a = Assignment()
    a.skip(0)
    report = validate_assignment(a, snap, _tasks(make_task(0)))
    assert report.ok


def test_x_without_y_is_a_coupling_violation():
    edge = make_edge(0, 0)
    snap = make_snapshot([edge])
    a = Assignment()
    a.x[(0, edge)] = 1.0
    a.y[0] = 0.0
    report = validate_assignment(a, snap, _tasks(make_task(0)))
    assert [v.kind for v in report.violations] == ["coupling"]


def test_two_edges_for_one_task_is_an_atomicity_violation():
    e1, e2 = make_edge(0, 0), make_edge(0, 1)
    snap = make_snapshot([e1, e2])
    a = Assignment()
    a.schedule(0, e1)
    a.x[(0, e2)] = 1.0
    report = validate_assignment(a, snap, _tasks(make_task(0)))
    assert [v.kind for v in report.violations] == ["atomicity"]


def test_edge_not_in_snapshot_is_reported_not_raised():
    snap = make_snapshot([make_edge(0, 0)])
    a = Assignment()
    a.schedule(0, make_edge(0, 7))
    report = validate_assignment(a, snap, _tasks(make_task(0)))
    assert any(v.kind == "edge-existence" for v in report.violations)


def test_unknown_task_id_is_reported_not_raised():
    snap = make_snapshot([make_edge(0, 0)])
    a = Assignment()
    a.skip(99)
    report = validate_assignment(a, snap, {})
    assert any(v.kind == "unknown-task" for v in report.violations)


def test_non_binary_values_are_reported():
    edge = make_edge(0, 0)
    snap = make_snapshot([edge])
    a = Assignment()
    a.x[(0, edge)] = 0.5
    a.y[0] = 2.0
    report = validate_assignment(a, snap, _tasks(make_task(0)))
    assert sum(v.kind == "binary-domain" for v in report.violations) == 2


def test_edge_from_wrong_satellite_is_reported():
    edge_wrong = make_edge(sat=1, site=0)
    snap = make_snapshot([make_edge(0, 0), edge_wrong])
    a = Assignment()
    a.schedule(0, edge_wrong)  # task 0 lives on satellite 0
    report = validate_assignment(a, snap, _tasks(make_task(0, source=0)))
    assert any(v.kind == "edge-existence" for v in report.violations)


def test_snapshot_reads_are_stable():
    snap = make_snapshot([make_edge(0, 0), make_edge(0, 1)])
    first = (snap.edges_from(0), {k: v.copy() for k, v in snap.sat_positions.items()})
    second = (snap.edges_from(0), snap.sat_positions)
    assert first[0] == second[0]
    for k in first[1]:
        assert np.array_equal(first[1][k], second[1][k])


def test_snapshot_is_frozen():
    snap = make_snapshot([make_edge(0, 0)])
    with pytest.raises(dataclasses.FrozenInstanceError):
        snap.gsl_edges = ()


def test_interval_index_rejects_bad_values():
    with pytest.raises(ValueError):
        IntervalIndex(-1, 60.0)
    with pytest.raises(ValueError):
        IntervalIndex(0, 0.0)


def test_task_invariants():
    with pytest.raises(ValueError):
        Task(id=0, source=0, destination=0, cycles=0.0, volume_bits=1.0)
    with pytest.raises(ValueError):
        Task(id=0, source=0, destination=0, cycles=1.0, volume_bits=0.0)
