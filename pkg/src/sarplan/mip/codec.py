"""Translate between model assignments and mission plans."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..directives import Directive
from ..environment import Scenario
from ..errors import DecodeError
from ..plan import (AgentPlan, MissionPlan, PlanError, check_agent_plan, plan_coverage,
                    proximity_profile, directive_compliance, timeline_of)
from .core import coverage_total
from .model import MipModel


@dataclass
class Decoded:
    mission: MissionPlan
    cell_coverage: np.ndarray
    coverage: float
    objective: float
    model_slack: list[np.ndarray]  # u per directive, aligned with its active steps
    plan_violation: list[np.ndarray]  # hinge recomputed on the decoded plan


def _agent_plan(model: MipModel, scenario: Scenario, aid: str, x, tol: float) -> AgentPlan:
    T = model.tags["budget_T"]
    for j, _, _ in model.tags["x"][aid]:
        if abs(x[j] - round(x[j])) > tol:
            raise DecodeError(f"fractional arc variable {model.variables[j].name} = {x[j]:.6g}", aid)
    for j in list(model.tags["y"][aid].values()) + list(model.tags["w"][aid].values()):
        if abs(x[j] - round(x[j])) > tol:
            raise DecodeError(f"fractional variable {model.variables[j].name} = {x[j]:.6g}", aid)

    succ = {}
    for j, a, b in model.tags["x"][aid]:
        if round(x[j]) == 1:
            if a in succ:
                raise DecodeError(f"two arcs leave {'depot' if a is None else repr(a)}", aid)
            succ[a] = b
    if None not in succ:
        raise DecodeError("no departure arc from the depot", aid)
    path, node = [], succ[None]
    while node is not None:
        if node in path:
            raise DecodeError("arc set contains a cycle", aid)
        path.append(node)
        if node not in succ:
            raise DecodeError(f"path stops at sector {node!r} without returning", aid)
        node = succ[node]
    visited = {s for s, j in model.tags["y"][aid].items() if round(x[j]) == 1}
    if visited != set(path) or len(succ) != len(path) + 1:
        raise DecodeError("disconnected arc set: visited sectors off the depot path", aid)

    w = model.tags["w"][aid]
    sched = {s: int(round(x[w[s]])) for s in path}
    off = [s for s in w if s not in sched and round(x[w[s]]) != 0]
    if off:
        raise DecodeError(f"time scheduled on unvisited sectors {off}", aid)
    if sum(sched.values()) != T:
        raise DecodeError(f"schedule sums to {sum(sched.values())}, budget is {T}", aid)
    plan = AgentPlan(aid, tuple(path), sched)
    try:
        check_agent_plan(plan, scenario)
    except PlanError as e:
        raise DecodeError(str(e), aid) from None
    return plan


def decode(model: MipModel, scenario: Scenario, x, tol: float = 1e-6,
           check_coverage: bool = True) -> Decoded:
    x = np.asarray(x, dtype=float)
    mission = MissionPlan.of(_agent_plan(model, scenario, a.id, x, tol) for a in scenario.agents)
    phi, total = plan_coverage(mission, scenario)
    model_total = coverage_total(model, x)
    if check_coverage and abs(model_total - total) > 1e-6 * max(1.0, abs(total)):
        raise DecodeError(f"model coverage {model_total:.9g} differs from plan coverage {total:.9g}")

    T = model.tags["budget_T"]
    if model.tags.get("occupancy"):
        for a in scenario.agents:
            line = timeline_of(mission[a.id], T)
            for tau in range(T):
                j = model.tags["z"][(a.id, line[tau], tau)]
                if round(x[j]) != 1:
                    raise DecodeError(f"occupancy disagrees with the schedule at step {tau}", a.id)

    slack, viol = [], []
    for n, d in enumerate(model.tags["directives"]):
        slack.append(x[model.tags["u"][n]])
        viol.append(directive_compliance(proximity_profile(mission, scenario, d.group_a, d.group_b), d))
    return Decoded(mission, phi, total, model.objective_value(x), slack, viol)


def encode(model: MipModel, scenario: Scenario, mission: MissionPlan) -> np.ndarray:
    """Full assignment realizing ``mission``: the warm-start counterpart of decode."""
    T = model.tags["budget_T"]
    x = np.zeros(model.n_vars)
    for a in scenario.agents:
        aid, p = a.id, mission[a.id]
        check_agent_plan(p, scenario)
        used = set(zip((None,) + p.path, p.path + (None,)))
        for j, u, v in model.tags["x"][aid]:
            x[j] = 1.0 if (u, v) in used else 0.0
        arrival = 1
        for s in model.tags["t"][aid]:
            x[model.tags["t"][aid][s]] = 1.0  # harmless value for unvisited sectors
        for s in p.path:
            x[model.tags["y"][aid][s]] = 1.0
            x[model.tags["t"][aid][s]] = arrival
            x[model.tags["w"][aid][s]] = p.schedule[s]
            arrival += p.schedule[s]
    phi, _ = plan_coverage(mission, scenario)
    for c, j in model.tags["phi"].items():
        x[j] = phi[c]

    if model.tags.get("occupancy"):
        lines = {a.id: timeline_of(mission[a.id], T) for a in scenario.agents}
        for (aid, sec, tau), j in model.tags["z"].items():
            x[j] = 1.0 if lines[aid][tau] == sec else 0.0
        for n, d in enumerate(model.tags["directives"]):
            _encode_directive(model, scenario, mission, lines, n, d, x)
    return x


def _encode_directive(model, scenario, mission, lines, n, d: Directive, x):
    prof = proximity_profile(mission, scenario, d.group_a, d.group_b)
    viol = directive_compliance(prof, d)
    steps = d.active_steps(model.tags["budget_T"])
    x[model.tags["u"][n]] = viol
    if d.kind not in ("network", "sparsity"):
        return
    index = model.index
    pairs = [(a, b) for a in d.group_a for b in d.group_b]
    for tau in steps:
        dists = []
        for a, b in pairs:
            ka, kb = scenario.agent_index(a), scenario.agent_index(b)
            i = scenario.sectors_of(a).index(lines[a][tau])
            j = scenario.sectors_of(b).index(lines[b][tau])
            x[index[f"q_{n}_{tau}_{ka}_{i}_{kb}_{j}"]] = 1.0
            dists.append((float(scenario.distances(a, b)[i, j]), ka, kb))
        if len(pairs) > 1:
            pick = (min if d.kind == "network" else max)(dists, key=lambda t: t[0])
            x[index[f"sig_{n}_{tau}_{pick[1]}_{pick[2]}"]] = 1.0
