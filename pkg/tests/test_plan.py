import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import pair_scan
from sarplan.directives import Directive
from sarplan.environment import (AgentSpec, CellGrid, Scenario, SectorLayout, TimeDiscretization,
                                 TraversabilityGraph)
from sarplan.errors import InputError
from sarplan.plan import (AgentPlan, MissionPlan, ProximityProfile, check_mission,
                          directive_compliance, plan_coverage, plan_from_timeline,
                          proximity_profile, timeline_of)
from strategies import random_mission, seeds, tiny_any, tiny_two


def _line_scenario(rate=1 / 1200, cov=1.0):
    grid = CellGrid(4, 1, 100.0)
    layout = SectorLayout("L", {"a": (0,), "b": (1,), "c": (2,), "d": (3,)})
    edges = (("a", "b"), ("b", "c"), ("c", "d"), ("b", "a"))
    agents = [AgentSpec("k", "human", np.full(4, rate), "L", ("a",)),
              AgentSpec("m", "dog", np.full(4, rate), "L", ("d",))]
    graphs = {"k": TraversabilityGraph("k", edges),
              "m": TraversabilityGraph("m", (("d", "c"), ("c", "b")))}
    return Scenario(grid, np.full(4, cov), agents, {"L": layout}, graphs, TimeDiscretization(300.0, 3))


def test_timeline_examples():
    assert timeline_of(AgentPlan("k", ("a",), {"a": 3}), 3) == ["a", "a", "a"]
    assert timeline_of(AgentPlan("k", ("a", "b"), {"a": 2, "b": 1}), 3) == ["a", "a", "b"]
    with pytest.raises(InputError):
        timeline_of(AgentPlan("k", ("a", "b"), {"a": 2, "b": 2}), 3)


def test_plan_validation():
    sc = _line_scenario()
    ok = MissionPlan.of([AgentPlan("k", ("a", "b"), {"a": 2, "b": 1}),
                         AgentPlan("m", ("d",), {"d": 3})])
    check_mission(ok, sc)
    bad = [
        AgentPlan("k", ("b",), {"b": 3}),  # not a start sector
        AgentPlan("k", ("a", "c"), {"a": 2, "c": 1}),  # no edge
        AgentPlan("k", ("a", "b", "a"), {"a": 2, "b": 1}),  # not elementary
        AgentPlan("k", ("a",), {"a": 2}),  # budget
    ]
    for p in bad:
        with pytest.raises(InputError):
            check_mission(MissionPlan.of([p, ok["m"]]), sc)
    with pytest.raises(InputError):
        check_mission(MissionPlan.of([ok["k"]]), sc)


def test_plan_coverage_examples():
    # one cell, rate giving 0.0625 per interval, four intervals
    grid = CellGrid(2, 2, 100.0)
    layout = SectorLayout("L", {"blk": (0, 1, 2, 3)})
    agent = AgentSpec("k", "uav", np.full(4, 1 / 1200), "L", ("blk",))
    sc = Scenario(grid, np.ones(4), [agent], {"L": layout}, {"k": TraversabilityGraph("k", ())},
                  TimeDiscretization(300.0, 4))
    mission = MissionPlan.of([AgentPlan("k", ("blk",), {"blk": 4})])
    phi, total = plan_coverage(mission, sc)
    assert phi[0] == pytest.approx(0.25)
    assert total == pytest.approx(1.0)
    phi, total = plan_coverage(mission, sc, initial=np.zeros(4))
    assert total == 0.0
    sc2 = _line_scenario(rate=1.7 / 300)
    phi, _ = plan_coverage(MissionPlan.of([AgentPlan("k", ("a",), {"a": 3}),
                                           AgentPlan("m", ("d",), {"d": 3})]), sc2)
    assert phi[0] == 1.0


def test_proximity_examples():
    sc = _line_scenario()
    mission = MissionPlan.of([AgentPlan("k", ("a", "b"), {"a": 2, "b": 1}),
                              AgentPlan("m", ("d", "c", "b"), {"d": 1, "c": 1, "b": 1})])
    prof = proximity_profile(mission, sc, ["k"], ["m"])
    assert np.allclose(prof.theta, [300, 200, 0])
    assert np.allclose(prof.psi, prof.theta)
    with pytest.raises(InputError):
        proximity_profile(mission, sc, ["k"], ["k"])
    with pytest.raises(InputError):
        proximity_profile(mission, sc, [], ["m"])


def test_compliance_examples():
    prof = ProximityProfile(np.array([60.0]), np.array([150.0]))
    assert directive_compliance(prof, Directive("coalition", ("a",), ("b",), 200)).tolist() == [0]
    assert directive_compliance(prof, Directive("interference_avoidance", ("a",), ("b",), 100)).tolist() == [40]
    prof = ProximityProfile(np.array([300.0]), np.array([300.0]))
    assert directive_compliance(prof, Directive("sparsity", ("a",), ("b",), 300)).tolist() == [0]
    assert directive_compliance(prof, Directive("network", ("a",), ("b",), 250)).tolist() == [50]
    with pytest.raises(InputError):
        directive_compliance(prof, Directive("network", ("a",), ("b",), 250, steps=(3,)))


@settings(max_examples=200)
@given(tiny_any, seeds)
def test_timeline_round_trip(sc, seed):
    mission = random_mission(sc, np.random.default_rng(seed))
    for a in sc.agent_ids:
        line = timeline_of(mission[a], sc.time.budget_T)
        assert plan_from_timeline(a, line) == mission[a]
        counts = {s: line.count(s) for s in set(line)}
        assert counts == dict(mission[a].schedule)


@settings(max_examples=200)
@given(tiny_any, seeds, st.integers(0, 5), st.integers(0, 3))
def test_coverage_monotone_in_schedule(sc, seed, k, extra):
    """More intervals on a visited sector never lowers any cell's coverage."""
    mission = random_mission(sc, np.random.default_rng(seed))
    a = sc.agent_ids[k % len(sc.agent_ids)]
    p = mission[a]
    bumped = dict(p.schedule)
    bumped[p.path[0]] += extra
    raw = lambda m: sum(sc.efficacy(x)[[sc.sectors_of(x).index(s) for s in m[x].schedule]].T
                        @ np.array(list(m[x].schedule.values())) for x in sc.agent_ids)
    more = MissionPlan.of([AgentPlan(a, p.path, bumped)] + [mission[x] for x in sc.agent_ids if x != a])
    lo = np.minimum(sc.coverage_map, raw(mission))
    hi = np.minimum(sc.coverage_map, raw(more))
    assert np.all(hi >= lo - 1e-12)


@settings(max_examples=200)
@given(tiny_two, seeds)
def test_profile_matches_pair_scan(sc, seed):
    mission = random_mission(sc, np.random.default_rng(seed))
    prof = proximity_profile(mission, sc, ["a0"], ["a1"])
    cents = {a: {s: sc.grid.centers[list(sc.layout_of(a).cells(s))].mean(axis=0)
                 for s in sc.sectors_of(a)} for a in sc.agent_ids}
    for t in range(sc.time.budget_T):
        pa = [cents["a0"][timeline_of(mission["a0"], sc.time.budget_T)[t]]]
        pb = [cents["a1"][timeline_of(mission["a1"], sc.time.budget_T)[t]]]
        lo, hi = pair_scan(pa, pb)
        assert prof.theta[t] == pytest.approx(lo) and prof.psi[t] == pytest.approx(hi)
