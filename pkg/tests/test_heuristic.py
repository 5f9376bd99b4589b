import numpy as np
import pytest
from hypothesis import given, settings

from oracles import enumerate_optimum
from sarplan.environment import (AgentSpec, CellGrid, Scenario, SectorLayout, TimeDiscretization,
                                 TraversabilityGraph)
from sarplan.errors import InputError
from sarplan.fixtures import small
from sarplan.plan import AgentPlan, MissionPlan, check_mission, plan_objective
from sarplan.solver import SolverConfig, heuristic_construct, heuristic_plan, local_search
from strategies import random_directive, random_mission, seeds, tiny_any, tiny_two

FAST = SolverConfig(time_limit_s=10)


def _row_scenario(agent_order=("p", "q"), zero_sector=False):
    grid = CellGrid(3, 1, 100.0)
    layout = SectorLayout("L", {"a": (0,), "b": (1,), "c": (2,)})
    eff = np.array([1 / 1500, 0.0 if zero_sector else 1 / 1500, 1 / 1500])
    edges = (("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"))
    agents = [AgentSpec(a, "human", eff, "L", ("a", "c")) for a in agent_order]
    graphs = {a: TraversabilityGraph(a, edges) for a in agent_order}
    return Scenario(grid, np.ones(3), agents, {"L": layout}, graphs, TimeDiscretization(300.0, 3))


def test_single_agent_single_sector_unique_plan():
    grid = CellGrid(1, 1, 100.0)
    sc = Scenario(grid, np.ones(1), [AgentSpec("k", "uav", np.full(1, 1e-3), "L", ("s",))],
                  {"L": SectorLayout("L", {"s": (0,)})}, {"k": TraversabilityGraph("k", ())},
                  TimeDiscretization(300.0, 4))
    assert heuristic_construct(sc)["k"] == AgentPlan("k", ("s",), {"s": 4})


def test_empty_start_set_rejected():
    sc = _row_scenario()
    bad = AgentSpec("p", "human", sc.agents[0].coverage_rate, "L", ())
    with pytest.raises(InputError):
        heuristic_construct(Scenario(sc.grid, sc.coverage_map, [bad, sc.agents[1]], sc.layouts,
                                     sc.graphs, sc.time))


def test_symmetric_agents_order_independent():
    a = plan_objective(heuristic_construct(_row_scenario(("p", "q"))), _row_scenario(("p", "q")), [])
    b = plan_objective(heuristic_construct(_row_scenario(("q", "p"))), _row_scenario(("q", "p")), [])
    assert a == pytest.approx(b)


def test_small_fixture_ratio_to_optimum():
    sc = small(0)
    best, _ = enumerate_optimum(sc)
    assert plan_objective(heuristic_construct(sc), sc, []) >= 0.5 * best


def test_repairs_interval_on_dead_sector():
    sc = _row_scenario(("p",), zero_sector=True)
    bad = MissionPlan.of([AgentPlan("p", ("a", "b"), {"a": 2, "b": 1})])
    fixed = local_search(bad, sc, (), FAST)
    assert plan_objective(fixed, sc, []) > plan_objective(bad, sc, [])
    assert "b" not in fixed["p"].path


def test_local_optimum_is_fixed_point():
    sc = small(1)
    once = local_search(heuristic_construct(sc), sc, (), FAST)
    assert local_search(once, sc, (), FAST) == once


def test_heuristic_plan_repeats_for_seed():
    sc = small(2)
    assert heuristic_plan(sc, (), FAST) == heuristic_plan(sc, (), FAST)


@settings(max_examples=100)
@given(tiny_two, seeds)
def test_local_search_never_worsens(sc, seed):
    rng = np.random.default_rng(seed)
    dirs = [random_directive(sc, rng)]
    start = random_mission(sc, rng)
    out = local_search(start, sc, dirs, FAST)
    check_mission(out, sc)
    assert plan_objective(out, sc, dirs) >= plan_objective(start, sc, dirs) - 1e-9


@settings(max_examples=100)
@given(tiny_any, seeds)
def test_construct_then_search_is_feasible(sc, seed):
    plan = local_search(heuristic_construct(sc, (), seed), sc, (), FAST)
    check_mission(plan, sc)
