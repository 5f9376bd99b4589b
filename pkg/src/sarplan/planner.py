"""Planning pipeline: build the model, warm-start heuristically, solve, decode."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Sequence

from .directives import Directive
from .environment import Scenario, check_scenario
from .mip import Decoded, MipModel, build_model, decode, encode
from .plan import MissionPlan, plan_objective
from .solver import SolveOutcome, SolverConfig, branch_and_bound, heuristic_plan

log = logging.getLogger(__name__)


@dataclass
class PlanResult:
    outcome: SolveOutcome
    model: MipModel
    decoded: Decoded | None
    heuristic: MissionPlan | None
    heuristic_objective: float | None

    @property
    def mission(self) -> MissionPlan | None:
        return self.decoded.mission if self.decoded else None


def plan_mission(scenario: Scenario, directives: Sequence[Directive] = (),
                 config: SolverConfig | None = None, warm: bool = True,
                 heuristic_share: float = 0.25, with_occupancy: bool = False,
                 heuristic_rounds: int = 200) -> PlanResult:
    """Solve the joint path/schedule problem within ``config.time_limit_s``.

    A ``heuristic_share`` of the time limit goes to construction and local
    search; the resulting plan seeds branch-and-bound as its first incumbent.
    """
    config = config or SolverConfig()
    check_scenario(scenario)
    t0 = time.perf_counter()
    model = build_model(scenario, directives, with_occupancy=with_occupancy)
    warm_x, heur, heur_obj = None, None, None
    if warm:
        slice_s = max(config.time_limit_s * heuristic_share, 1e-3)
        heur = heuristic_plan(scenario, directives, replace(config, time_limit_s=slice_s),
                              rounds=heuristic_rounds)
        heur_obj = plan_objective(heur, scenario, directives)
        warm_x = encode(model, scenario, heur)
    remaining = max(config.time_limit_s - (time.perf_counter() - t0), 1e-3)
    outcome = branch_and_bound(model, replace(config, time_limit_s=remaining), warm_start=warm_x)
    outcome.wall_time = time.perf_counter() - t0
    decoded = decode(model, scenario, outcome.x) if outcome.x is not None else None
    return PlanResult(outcome, model, decoded, heur, heur_obj)
