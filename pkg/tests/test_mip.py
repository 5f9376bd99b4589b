import numpy as np
import pytest
from hypothesis import given, settings

from sarplan.directives import Directive
from sarplan.errors import DecodeError, InputError
from sarplan.fixtures import tiny
from sarplan.mip import build_model, decode, encode, export_lp
from sarplan.plan import directive_compliance, plan_coverage, proximity_profile
from sarplan.solver import SolverConfig, branch_and_bound
from strategies import random_directive, random_mission, seeds, tiny_any, tiny_two

EXACT = SolverConfig(time_limit_s=120, lp_engine="simplex")


def test_counts_without_directives_have_no_directive_variables():
    sc = tiny(3)
    m = build_model(sc)
    names = [v.name for v in m.variables]
    assert not any(n.startswith(("u_", "q_", "z_", "sigma_")) for n in names)
    with_dir = build_model(sc, [Directive("network", ("a0",), ("a1",), 10.0)])
    assert any(v.name.startswith("u_") for v in with_dir.variables)
    c = m.counts()
    assert c["variables"] == c["binary"] + c["integer"] + c["continuous"]
    assert c["continuous"] == sc.grid.n_cells  # one coverage variable per cell


def test_directive_adds_slack_per_active_step():
    sc = tiny(4, n_agents=2)
    d = Directive("coalition", ("a0",), ("a1",), 50.0, steps=(0, 1))
    m = build_model(sc, [d])
    assert len(m.tags["u"][0]) == 2
    assert m.tags["occupancy"]


def test_hard_directive_fixes_slack():
    sc = tiny(4, n_agents=2)
    m = build_model(sc, [Directive("network", ("a0",), ("a1",), 0.0, mode="hard")])
    assert all(m.variables[j].ub == 0 for j in m.tags["u"][0])


def test_unknown_agent_rejected():
    with pytest.raises(InputError):
        build_model(tiny(1), [Directive("network", ("a0",), ("ghost",), 10.0)])


@settings(max_examples=100)
@given(tiny_any, seeds)
def test_encode_is_feasible_and_decodes_back(sc, seed):
    rng = np.random.default_rng(seed)
    mission = random_mission(sc, rng)
    m = build_model(sc, with_occupancy=bool(seed % 2))
    x = encode(m, sc, mission)
    assert m.max_violation(x) <= 1e-9
    assert m.integrality_violation(x) == 0
    dec = decode(m, sc, x)
    assert dec.mission == mission
    assert dec.coverage == pytest.approx(plan_coverage(mission, sc)[1])


@settings(max_examples=100)
@given(tiny_two, seeds)
def test_encoded_slack_matches_compliance(sc, seed):
    rng = np.random.default_rng(seed)
    mission = random_mission(sc, rng)
    d = random_directive(sc, rng)
    m = build_model(sc, [d])
    x = encode(m, sc, mission)
    assert m.max_violation(x) <= 1e-7
    dec = decode(m, sc, x)
    assert np.allclose(dec.model_slack[0], dec.plan_violation[0], atol=1e-9)
    prof = proximity_profile(mission, sc, d.group_a, d.group_b)
    assert np.allclose(dec.plan_violation[0], directive_compliance(prof, d))


def test_decode_rejects_fractional_and_broken_assignments():
    sc = tiny(5)
    m = build_model(sc)
    x = encode(m, sc, random_mission(sc, np.random.default_rng(0)))
    aid = sc.agent_ids[0]
    j = m.tags["x"][aid][0][0]
    bad = x.copy()
    bad[j] = 0.5
    with pytest.raises(DecodeError):
        decode(m, sc, bad)
    bad = x.copy()
    for j, a, b in m.tags["x"][aid]:
        if a is None:
            bad[j] = 0.0
    with pytest.raises(DecodeError):
        decode(m, sc, bad)


@pytest.mark.parametrize("seed", range(6))
def test_optimal_slack_equals_compliance(seed):
    sc = tiny(seed, n_agents=2, budget_T=3)
    d = random_directive(sc, np.random.default_rng(seed))
    m = build_model(sc, [d])
    out = branch_and_bound(m, EXACT)
    assert out.status == "optimal"
    dec = decode(m, sc, out.x)
    assert np.allclose(dec.model_slack[0], dec.plan_violation[0], atol=1e-6)


def test_hard_sparsity_beyond_diameter_is_infeasible():
    sc = tiny(2, n_agents=2)
    d = Directive("sparsity", ("a0",), ("a1",), sc.diameter_m + 50.0, mode="hard")
    out = branch_and_bound(build_model(sc, [d]), EXACT)
    assert out.status == "infeasible"
    assert out.x is None


@pytest.mark.parametrize("seed", range(4))
def test_soft_optimum_at_least_hard_optimum(seed):
    sc = tiny(seed, n_agents=2, budget_T=3)
    rng = np.random.default_rng(100 + seed)
    d = random_directive(sc, rng, mode="hard")
    hard = branch_and_bound(build_model(sc, [d]), EXACT)
    soft = branch_and_bound(build_model(sc, [Directive(d.kind, d.group_a, d.group_b, d.limit_m, d.steps)]),
                            EXACT)
    free = branch_and_bound(build_model(sc), EXACT)
    assert soft.objective <= free.objective + 1e-9
    if hard.status == "optimal":
        assert soft.objective >= hard.objective - 1e-9


def test_lp_export_is_deterministic(tmp_path):
    sc = tiny(7, n_agents=2)
    dirs = [Directive("interference_avoidance", ("a0",), ("a1",), 120.0)]
    a = export_lp(build_model(sc, dirs))
    b = export_lp(build_model(sc, dirs), tmp_path / "m.lp")
    assert a == b == (tmp_path / "m.lp").read_text()
    for section in ("Maximize", "Subject To", "Bounds", "Binaries", "Generals", "End"):
        assert section in a
