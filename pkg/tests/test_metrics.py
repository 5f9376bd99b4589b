import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import fan_area
from sarplan.errors import InputError
from sarplan.metrics import (aggregate, convex_hull, coverage_percentage, hull_area,
                             interference_summary, mean_group_distance)

coord = st.floats(-1e4, 1e4, allow_nan=False).map(lambda v: round(v, 3))
point_sets = st.lists(st.tuples(coord, coord), min_size=1, max_size=25)


def test_coverage_percentage_examples():
    c0 = np.array([0.5, 1.0, 0.0])
    assert coverage_percentage(c0, c0) == 100.0
    assert coverage_percentage(np.zeros(3), c0) == 0.0
    assert coverage_percentage(c0 / 2, c0) == pytest.approx(50.0)
    assert coverage_percentage(np.zeros(2), np.zeros(2)) == 100.0
    with pytest.raises(InputError):
        coverage_percentage(np.zeros(2), np.zeros(3))


def test_group_distance_examples():
    centers = np.array([[50.0, 50.0], [150.0, 50.0], [50.0, 150.0]])
    assert mean_group_distance(np.zeros((5, 2), int), centers, [0], [1]) == 0.0
    assert mean_group_distance(np.tile([0, 1], (4, 1)), centers, [0], [1]) == pytest.approx(100.0)
    with pytest.raises(InputError):
        mean_group_distance(np.zeros((1, 2), int), centers, [0], [0])


@settings(max_examples=200)
@given(st.integers(0, 2 ** 31 - 1))
def test_group_distance_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0, 700, size=(9, 2))
    pos = rng.integers(0, 9, size=(int(rng.integers(1, 12)), 4))
    want = np.mean([math.dist(centers[row[a]], centers[row[b]])
                    for row in pos for a in (0, 1) for b in (2, 3)])
    assert mean_group_distance(pos, centers, [0, 1], [2, 3]) == pytest.approx(want, rel=1e-12)


def test_hull_examples():
    assert hull_area([(0, 0), (100, 0), (100, 100), (0, 100)]) == 10000.0
    assert hull_area([(0, 0), (1, 1), (2, 2), (3, 3)]) == 0.0
    assert hull_area([(5, 5)]) == 0.0
    assert len(convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1)])) == 4


@settings(max_examples=300)
@given(point_sets)
def test_hull_matches_fan_oracle(pts):
    want = fan_area(pts)
    assert hull_area(pts) == pytest.approx(want, rel=1e-6, abs=1e-6)


@settings(max_examples=300)
@given(point_sets, st.tuples(coord, coord))
def test_hull_monotone_under_added_point(pts, extra):
    assert hull_area(pts + [extra]) >= hull_area(pts) * (1 - 1e-12)


def test_interference_summary():
    assert interference_summary({"d0": 120.0, "d1": 0.0}) == (60.0, False)
    assert interference_summary({"d0": 0.0}) == (0.0, False)
    assert interference_summary({"d0": 30.0, "d1": 50.0, "d2": 100.0})[0] == pytest.approx(60.0)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert interference_summary({}) == (0.0, True)
    assert w


@settings(max_examples=100)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=30))
def test_aggregate_mean_between_min_and_max(vals):
    agg = aggregate([{"v": v} for v in vals])["v"]
    assert agg["min"] - 1e-9 * (1 + abs(agg["min"])) <= agg["mean"] <= agg["max"] + 1e-9 * (1 + abs(agg["max"]))


@settings(max_examples=100)
@given(st.integers(0, 2 ** 31 - 1))
def test_coverage_percentage_monotone(seed):
    rng = np.random.default_rng(seed)
    c0 = rng.uniform(0, 1, 10)
    lo = rng.uniform(0, 1, 10)
    hi = lo + rng.uniform(0, 1, 10)
    assert coverage_percentage(hi, c0) >= coverage_percentage(lo, c0)
