"""Mission plans: validation, timelines, coverage and group proximity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .directives import Directive, weight_of
from .environment import Scenario
from .errors import InputError


class PlanError(InputError):
    pass


@dataclass(frozen=True, eq=False)
class AgentPlan:
    agent: str
    path: tuple[str, ...]
    schedule: Mapping[str, int]  # intervals per visited sector

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "schedule", {s: int(n) for s, n in self.schedule.items() if n})

    def __eq__(self, other):
        return (isinstance(other, AgentPlan) and self.agent == other.agent
                and self.path == other.path and dict(self.schedule) == dict(other.schedule))

    @property
    def total(self) -> int:
        return sum(self.schedule.values())


@dataclass(frozen=True, eq=False)
class MissionPlan:
    plans: Mapping[str, AgentPlan]

    def __eq__(self, other):
        return isinstance(other, MissionPlan) and dict(self.plans) == dict(other.plans)

    def __getitem__(self, agent_id: str) -> AgentPlan:
        return self.plans[agent_id]

    @classmethod
    def of(cls, plans: Iterable[AgentPlan]) -> "MissionPlan":
        return cls({p.agent: p for p in plans})


@dataclass(frozen=True)
class ProximityProfile:
    theta: np.ndarray  # min cross-group distance per step
    psi: np.ndarray  # max cross-group distance per step


def check_agent_plan(plan: AgentPlan, scenario: Scenario) -> None:
    agent = scenario.agent(plan.agent)
    sectors = set(scenario.sectors_of(plan.agent))
    T = scenario.time.budget_T
    path = plan.path
    if not path:
        raise PlanError(f"agent {plan.agent!r}: empty path")
    if len(set(path)) != len(path):
        raise PlanError(f"agent {plan.agent!r}: path revisits a sector")
    unknown = [s for s in path if s not in sectors]
    if unknown:
        raise PlanError(f"agent {plan.agent!r}: unknown sectors {unknown}")
    if path[0] not in agent.start_sectors:
        raise PlanError(f"agent {plan.agent!r}: path starts outside the start sectors")
    succ = scenario.successors(plan.agent)
    for a, b in zip(path, path[1:]):
        if b not in succ[a]:
            raise PlanError(f"agent {plan.agent!r}: no traversability edge {a!r} -> {b!r}")
    if set(plan.schedule) != set(path) or any(plan.schedule[s] < 1 for s in path):
        raise PlanError(f"agent {plan.agent!r}: schedule must be positive exactly on the path")
    if plan.total != T:
        raise PlanError(f"agent {plan.agent!r}: schedule sums to {plan.total}, budget is {T}")


def check_mission(mission: MissionPlan, scenario: Scenario) -> None:
    if set(mission.plans) != set(scenario.agent_ids):
        raise PlanError("mission must hold exactly one plan per scenario agent")
    for p in mission.plans.values():
        check_agent_plan(p, scenario)


def timeline_of(plan: AgentPlan, budget_T: int) -> list[str]:
    """Sector occupied during each mission interval."""
    if plan.total != budget_T:
        raise PlanError(f"agent {plan.agent!r}: schedule sums to {plan.total}, budget is {budget_T}")
    if len(set(plan.path)) != len(plan.path) or set(plan.schedule) != set(plan.path):
        raise PlanError(f"agent {plan.agent!r}: schedule must be positive exactly on an elementary path")
    out = []
    for s in plan.path:
        out.extend([s] * plan.schedule[s])
    return out


def plan_from_timeline(agent: str, timeline: Sequence[str]) -> AgentPlan:
    """Inverse of :func:`timeline_of` for step functions that respect path order."""
    path, sched = [], {}
    for s in timeline:
        if path and path[-1] == s:
            sched[s] += 1
        elif s in sched:
            raise PlanError(f"agent {agent!r}: timeline returns to sector {s!r}")
        else:
            path.append(s)
            sched[s] = 1
    return AgentPlan(agent, tuple(path), sched)


def raw_coverage(mission: MissionPlan, scenario: Scenario) -> np.ndarray:
    raw = np.zeros(scenario.grid.n_cells)
    for agent_id, p in mission.plans.items():
        eff = scenario.efficacy(agent_id)
        index = {s: n for n, s in enumerate(scenario.sectors_of(agent_id))}
        for s, n in p.schedule.items():
            raw += eff[index[s]] * n
    return raw


def plan_coverage(mission: MissionPlan, scenario: Scenario,
                  initial: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Per-cell coverage (clamped at the initial requirement) and its total."""
    check_mission(mission, scenario)
    c0 = scenario.coverage_map if initial is None else np.asarray(initial, dtype=float)
    phi = np.minimum(c0, raw_coverage(mission, scenario))
    return phi, float(phi.sum())


def _timeline_index(mission: MissionPlan, scenario: Scenario, agent_id: str) -> np.ndarray:
    index = {s: n for n, s in enumerate(scenario.sectors_of(agent_id))}
    return np.array([index[s] for s in timeline_of(mission[agent_id], scenario.time.budget_T)])


def proximity_profile(mission: MissionPlan, scenario: Scenario,
                      group_a: Sequence[str], group_b: Sequence[str]) -> ProximityProfile:
    group_a, group_b = list(group_a), list(group_b)
    if not group_a or not group_b:
        raise InputError("proximity groups must be nonempty")
    if set(group_a) & set(group_b):
        raise InputError("proximity groups must be disjoint")
    for g in group_a + group_b:
        if g not in mission.plans:
            raise InputError(f"agent {g!r} has no plan")
    lines = {g: _timeline_index(mission, scenario, g) for g in group_a + group_b}
    d = np.array([scenario.distances(k, l)[lines[k], lines[l]]
                  for k in group_a for l in group_b])
    return ProximityProfile(theta=d.min(axis=0), psi=d.max(axis=0))


def directive_compliance(profile: ProximityProfile, directive: Directive) -> np.ndarray:
    """Violation in meters at each of the directive's active steps (0 = compliant)."""
    steps = directive.active_steps(len(profile.theta))
    return directive.hinge(profile.theta[steps], profile.psi[steps])


def violations(mission: MissionPlan, scenario: Scenario,
               directives: Sequence[Directive]) -> list[np.ndarray]:
    out = []
    for d in directives:
        d.check_agents(scenario.agent_ids)
        out.append(directive_compliance(proximity_profile(mission, scenario, d.group_a, d.group_b), d))
    return out


def soft_penalty(mission: MissionPlan, scenario: Scenario, directives: Sequence[Directive]) -> float:
    total = 0.0
    for d, v in zip(directives, violations(mission, scenario, directives)):
        if d.mode == "soft":
            total += weight_of(d, scenario) * float(v.sum())
    return total


def plan_objective(mission: MissionPlan, scenario: Scenario,
                   directives: Sequence[Directive] = ()) -> float:
    """Coverage minus soft-directive penalties; the quantity the MIP maximizes."""
    return plan_coverage(mission, scenario)[1] - soft_penalty(mission, scenario, directives)


def hard_feasible(mission: MissionPlan, scenario: Scenario, directives: Sequence[Directive],
                  tol: float = 1e-9) -> bool:
    return all(float(v.max(initial=0.0)) <= tol
               for d, v in zip(directives, violations(mission, scenario, directives))
               if d.mode == "hard")
