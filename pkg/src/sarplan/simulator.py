"""Seeded discrete-time execution of mission plans.

Each agent random-walks over the cells of the sector its plan assigns for the
current interval and accrues coverage where it stands. Dogs can be attracted
towards nearby dogs or humans (interference), leaving their sector until they
reach the spot they were drawn to.

Randomness: run ``r`` of a configuration with seed ``s`` gives agent number
``k`` (scenario order) two generators, ``SeedSequence(s, spawn_key=(r, k, 0))``
for motion and ``(r, k, 1)`` for interference trials. Plans that differ only
in some agents therefore still share the random streams of the others.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .environment import Scenario
from .errors import InputError
from .plan import MissionPlan, check_mission, timeline_of

_MOVES = ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1))  # stay, north, south, west, east


@dataclass(frozen=True)
class InterferenceConfig:
    enabled: bool = False
    range_R_m: float = 100.0
    interferer_kinds: tuple[str, ...] = ("dog", "human")

    def __post_init__(self):
        object.__setattr__(self, "interferer_kinds", tuple(self.interferer_kinds))
        if self.enabled and not self.range_R_m > 0:
            raise InputError("interference range must be positive")


@dataclass(frozen=True)
class SimConfig:
    tick_s: float = 10.0
    runs: int = 50
    rng_seed: int = 0
    interference: InterferenceConfig = field(default_factory=InterferenceConfig)

    def __post_init__(self):
        if not self.tick_s > 0:
            raise InputError("tick_s must be positive")
        if self.runs < 1:
            raise InputError("runs must be at least 1")

    def ticks_per_step(self, delta_t: float) -> int:
        n = delta_t / self.tick_s
        if abs(n - round(n)) > 1e-9 or round(n) < 1:
            raise InputError(f"tick_s={self.tick_s} does not divide delta_t={delta_t}")
        return int(round(n))


def interference_probability(d: float, R: float) -> float:
    """Chance that an interferer at distance d attracts a dog, zero from R on."""
    return max(0.0, (R - d) / R)


@dataclass
class World:
    """Static data shared by every run of one plan."""

    scenario: Scenario
    timelines: list[list[tuple[int, ...]]]  # per agent, per step: cells of the sector
    kinds: list[str]
    rates: np.ndarray  # (agents, cells)
    tps: int

    @classmethod
    def build(cls, mission: MissionPlan, scenario: Scenario, config: SimConfig) -> "World":
        try:
            check_mission(mission, scenario)
        except InputError as e:
            raise InputError(f"plan does not match scenario: {e}") from None
        T = scenario.time.budget_T
        lines = []
        for a in scenario.agents:
            layout = scenario.layout_of(a.id)
            lines.append([tuple(sorted(layout.cells(s))) for s in timeline_of(mission[a.id], T)])
        rates = np.array([a.coverage_rate for a in scenario.agents])
        return cls(scenario, lines, [a.kind for a in scenario.agents], rates,
                   config.ticks_per_step(scenario.time.delta_t))


@dataclass
class SimState:
    cell: np.ndarray  # current cell per agent
    step: int = -1  # current mission interval
    tick: int = 0
    flagged: np.ndarray = None  # interference flag per agent
    target: np.ndarray = None  # attraction target cell per agent
    time_in: np.ndarray = None  # (agents, cells) ticks spent per cell
    interference_s: np.ndarray = None  # per agent

    @classmethod
    def empty(cls, n_agents: int, n_cells: int) -> "SimState":
        return cls(np.full(n_agents, -1), -1, 0, np.zeros(n_agents, bool), np.full(n_agents, -1),
                   np.zeros((n_agents, n_cells), dtype=np.int64), np.zeros(n_agents))


@dataclass
class SimResult:
    run: int
    coverage: np.ndarray  # clamped per-cell coverage
    raw: np.ndarray  # unclamped accrued coverage
    coverage_pct: float
    interference_s: dict[str, float]  # per dog
    positions: np.ndarray  # (ticks, agents) cell ids at accrual time


def _nearest(grid, frm: int, cells) -> int:
    centers = grid.centers
    d = ((centers[list(cells)] - centers[frm]) ** 2).sum(axis=1)
    best = d.min()
    return min(c for c, v in zip(cells, d) if v <= best + 1e-9)


def switch_tasks(state: SimState, world: World, rngs) -> SimState:
    """Enter the next interval: agents whose sector changes jump to its nearest cell."""
    grid = world.scenario.grid
    prev = state.step
    state.step += 1
    for k, line in enumerate(world.timelines):
        cells = line[state.step]
        if prev < 0:
            state.cell[k] = cells[int(rngs[k][0].integers(len(cells)))]
        elif line[prev] != cells:
            state.cell[k] = _nearest(grid, int(state.cell[k]), cells)
            state.flagged[k] = False
            state.target[k] = -1
    return state


def step_interference(state: SimState, world: World, rngs, config: SimConfig) -> SimState:
    """Bernoulli trials for every dog not already attracted."""
    ic = config.interference
    if not ic.enabled:
        return state
    centers = world.scenario.grid.centers
    R = ic.range_R_m
    for k, kind in enumerate(world.kinds):
        if kind != "dog" or state.flagged[k]:
            continue
        for l, other in enumerate(world.kinds):
            if l == k or other not in ic.interferer_kinds:
                continue
            d = float(math.dist(centers[state.cell[k]], centers[state.cell[l]]))
            if d >= R:
                continue
            if rngs[k][1].random() < interference_probability(d, R):
                state.flagged[k] = True
                state.target[k] = state.cell[l]
                break
    return state


def step_motion(state: SimState, world: World, rngs) -> SimState:
    """One cell of movement per agent: lazy random walk in the sector, or a
    greedy step towards the attraction target."""
    grid = world.scenario.grid
    W, H = grid.width_cells, grid.height_cells
    centers = grid.centers
    for k, line in enumerate(world.timelines):
        c = int(state.cell[k])
        r, q = divmod(c, W)
        if state.flagged[k]:
            t = int(state.target[k])
            if c == t:
                continue
            best, best_d = c, float(((centers[c] - centers[t]) ** 2).sum())
            for nb in sorted(grid.neighbors4(c)):
                dn = float(((centers[nb] - centers[t]) ** 2).sum())
                if dn < best_d - 1e-9:
                    best, best_d = nb, dn
            state.cell[k] = best
            continue
        cells = line[state.step]
        if len(cells) == 1:
            continue
        dr, dq = _MOVES[int(rngs[k][0].integers(len(_MOVES)))]
        rr, qq = r + dr, q + dq
        if 0 <= rr < H and 0 <= qq < W:
            nc = rr * W + qq
            if nc in cells:
                state.cell[k] = nc
    return state


def accrue_coverage(state: SimState, world: World) -> SimState:
    """Count one tick in each agent's current cell."""
    state.time_in[np.arange(len(state.cell)), state.cell] += 1
    return state


def _settle_interference(state: SimState, world: World, tick_s: float) -> SimState:
    grid = world.scenario.grid
    for k in np.flatnonzero(state.flagged):
        state.interference_s[k] += tick_s
        if state.cell[k] == state.target[k]:
            state.flagged[k] = False
            state.target[k] = -1
            cells = world.timelines[k][state.step]
            if state.cell[k] not in cells:
                state.cell[k] = _nearest(grid, int(state.cell[k]), cells)
    return state


def raw_from_counts(time_in: np.ndarray, rates: np.ndarray, tick_s: float) -> np.ndarray:
    return (rates * (time_in * tick_s)).sum(axis=0)


def simulate_once(world: World, config: SimConfig, run: int) -> SimResult:
    sc = world.scenario
    K = len(world.timelines)
    rngs = [tuple(np.random.default_rng(np.random.SeedSequence(config.rng_seed, spawn_key=(run, k, s)))
                  for s in (0, 1)) for k in range(K)]
    state = SimState.empty(K, sc.grid.n_cells)
    n_ticks = world.tps * sc.time.budget_T
    positions = np.zeros((n_ticks, K), dtype=np.int64)
    for n in range(n_ticks):
        if n % world.tps == 0:
            switch_tasks(state, world, rngs)
        step_interference(state, world, rngs, config)
        step_motion(state, world, rngs)
        positions[n] = state.cell
        accrue_coverage(state, world)
        _settle_interference(state, world, config.tick_s)
        state.tick += 1
    raw = raw_from_counts(state.time_in, world.rates, config.tick_s)
    cov = np.minimum(sc.coverage_map, raw)
    total = float(sc.coverage_map.sum())
    pct = 100.0 if total == 0 else 100.0 * float(cov.sum()) / total
    dogs = {sc.agents[k].id: float(state.interference_s[k]) for k in range(K) if world.kinds[k] == "dog"}
    return SimResult(run, cov, raw, pct, dogs, positions)


def _run_one(args):
    world, config, r = args
    return simulate_once(world, config, r)


def run(mission: MissionPlan, scenario: Scenario, config: SimConfig | None = None,
        workers: int = 1) -> list[SimResult]:
    """Independent seeded runs of one plan, in run order whatever ``workers`` is."""
    config = config or SimConfig()
    world = World.build(mission, scenario, config)
    jobs = [(world, config, r) for r in range(config.runs)]
    if workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
