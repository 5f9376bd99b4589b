"""Proximity directives between two disjoint agent groups."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError

KINDS = ("coalition", "network", "interference_avoidance", "sparsity")
MODES = ("hard", "soft")

# which group distance each kind limits, and from which side
_BOUND = {
    "coalition": ("max", "upper"),
    "network": ("min", "upper"),
    "interference_avoidance": ("min", "lower"),
    "sparsity": ("max", "lower"),
}


@dataclass(frozen=True)
class Directive:
    kind: str
    group_a: tuple[str, ...]
    group_b: tuple[str, ...]
    limit_m: float
    steps: tuple[int, ...] | None = None  # None: every step of the mission
    mode: str = "soft"
    weight: float | None = None  # penalty per meter and step; None: scenario default

    def __post_init__(self):
        object.__setattr__(self, "group_a", tuple(self.group_a))
        object.__setattr__(self, "group_b", tuple(self.group_b))
        if self.steps is not None:
            object.__setattr__(self, "steps", tuple(sorted(set(int(s) for s in self.steps))))
        if self.kind not in KINDS:
            raise InputError(f"unknown directive kind {self.kind!r}")
        if self.mode not in MODES:
            raise InputError(f"unknown directive mode {self.mode!r}")
        if not self.group_a or not self.group_b:
            raise InputError("directive groups must be nonempty")
        if set(self.group_a) & set(self.group_b):
            raise InputError("directive groups must be disjoint")
        if not self.limit_m >= 0:
            raise InputError("directive limit must be nonnegative")
        if self.weight is not None and not self.weight > 0:
            raise InputError("directive weight must be positive")

    @property
    def distance(self) -> str:
        """'min' or 'max': the group distance this directive limits."""
        return _BOUND[self.kind][0]

    @property
    def upper(self) -> bool:
        return _BOUND[self.kind][1] == "upper"

    def active_steps(self, budget_T: int) -> list[int]:
        if self.steps is None:
            return list(range(budget_T))
        bad = [s for s in self.steps if not 0 <= s < budget_T]
        if bad:
            raise InputError(f"directive steps {bad} outside [0, {budget_T})")
        return list(self.steps)

    def check_agents(self, agent_ids) -> None:
        missing = [a for a in self.group_a + self.group_b if a not in set(agent_ids)]
        if missing:
            raise InputError(f"directive references unknown agents {missing}")

    def hinge(self, theta, psi):
        """Violation in meters given the min and max group distances."""
        value = theta if self.distance == "min" else psi
        gap = value - self.limit_m if self.upper else self.limit_m - value
        return max(0.0, gap) if isinstance(gap, float) else gap.clip(min=0.0)


def default_weight(scenario) -> float:
    """Penalty per meter-step making one full-mission, full-diameter violation
    cost about the whole coverage requirement."""
    total = float(scenario.coverage_map.sum())
    denom = scenario.time.budget_T * max(scenario.diameter_m, 1.0)
    return max(total, 1e-9) / denom


def weight_of(directive: Directive, scenario) -> float:
    return directive.weight if directive.weight is not None else default_weight(scenario)
