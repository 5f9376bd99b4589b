"""Scenario generators at three scales.

``tiny`` instances are small enough for exhaustive enumeration. ``small`` is a
4x4 grid searched by one human (single-cell sectors) and one UAV (2x2 blocks).
``medium`` is a 7x7 grid of 100 m cells with synthetic terrain standing in for
elevation and vegetation rasters.
"""
from __future__ import annotations

import numpy as np

from .environment import (AgentSpec, CellGrid, Scenario, SectorLayout, TimeDiscretization,
                          TraversabilityGraph, check_scenario, grid_adjacency)


def _cell_layout(grid: CellGrid, lid: str) -> SectorLayout:
    return SectorLayout(lid, {f"c{c}": (c,) for c in range(grid.n_cells)})


def _window_layout(grid: CellGrid, lid: str, size: int = 2, stride: int = 1) -> SectorLayout:
    sectors = {}
    for r in range(0, grid.height_cells - size + 1, stride):
        for q in range(0, grid.width_cells - size + 1, stride):
            cells = tuple(grid.cell_at(r + a, q + b) for a in range(size) for b in range(size))
            sectors[f"w{r}_{q}"] = cells
    return SectorLayout(lid, sectors)


def _window_edges(layout: SectorLayout) -> list[tuple[str, str]]:
    """Windows whose corners differ by one step north, south, east or west."""
    pos = {}
    for s in layout.sectors:
        r, q = s[1:].split("_")
        pos[s] = (int(r), int(q))
    at = {v: k for k, v in pos.items()}
    edges = []
    for s, (r, q) in pos.items():
        for dr, dq in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            t = at.get((r + dr, q + dq))
            if t is not None:
                edges.append((s, t))
    return edges


def tiny(seed: int, n_agents: int | None = None, n_sectors: int | None = None,
         budget_T: int | None = None) -> Scenario:
    """Random instance with at most 2 agents, 5 sectors each and T <= 4."""
    rng = np.random.default_rng(seed)
    n_agents = n_agents or int(rng.integers(1, 3))
    grid = CellGrid(3, 2, 100.0)
    T = budget_T or int(rng.integers(2, 5))
    cov = np.round(rng.uniform(0.2, 1.0, grid.n_cells), 3)
    agents, layouts, graphs = [], {}, {}
    for k in range(n_agents):
        aid = f"a{k}"
        ns = n_sectors or int(rng.integers(3, 6))
        sectors = {}
        for s in range(ns):
            size = int(rng.integers(1, 3))
            cells = tuple(sorted(rng.choice(grid.n_cells, size=size, replace=False).tolist()))
            sectors[f"s{s}"] = cells
        lid = f"L{k}"
        layouts[lid] = SectorLayout(lid, sectors, owner=aid)
        names = list(sectors)
        edges = [(i, j) for i in names for j in names if i != j and rng.random() < 0.5]
        graphs[aid] = TraversabilityGraph(aid, tuple(edges))
        n_start = int(rng.integers(1, ns + 1))
        start = tuple(sorted(rng.choice(names, size=n_start, replace=False).tolist(),
                             key=names.index))
        rate = np.round(rng.uniform(0.0, 1.0 / 600, grid.n_cells), 7)
        kind = ("human", "dog", "uav")[int(rng.integers(0, 3))]
        agents.append(AgentSpec(aid, kind, rate, lid, start))
    return check_scenario(Scenario(grid, cov, agents, layouts, graphs, TimeDiscretization(300.0, T)))


def small(seed: int = 0) -> Scenario:
    """4x4 grid, one human on single cells and one UAV on 2x2 quadrants, T=4."""
    rng = np.random.default_rng(seed)
    grid = CellGrid(4, 4, 100.0)
    cov = np.round(rng.uniform(0.3, 1.0, grid.n_cells), 3)
    cells = _cell_layout(grid, "ground")
    quads = _window_layout(grid, "air", size=2, stride=2)
    layouts = {"ground": cells, "air": quads}
    human_rate = np.round(rng.uniform(1 / 1200, 1 / 400, grid.n_cells), 7)
    uav_rate = np.round(rng.uniform(1 / 1200, 1 / 300, grid.n_cells), 7)
    border = tuple(f"c{c}" for c in range(grid.n_cells)
                   if len(grid.neighbors4(c)) < 4)
    agents = [AgentSpec("h0", "human", human_rate, "ground", border),
              AgentSpec("u0", "uav", uav_rate, "air", tuple(quads.sectors))]
    graphs = {"h0": TraversabilityGraph("h0", tuple(grid_adjacency(grid, cells))),
              "u0": TraversabilityGraph("u0", tuple(grid_adjacency(grid, quads)))}
    return check_scenario(Scenario(grid, cov, agents, layouts, graphs, TimeDiscretization(300.0, 4)))


def terrain(grid: CellGrid, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Smooth synthetic slope and vegetation fields in [0, 1], one value per cell."""
    rng = np.random.default_rng(seed)
    xy = grid.centers / (grid.cell_size_m * max(grid.width_cells, grid.height_cells))
    fields = []
    for _ in range(2):
        f = np.zeros(grid.n_cells)
        for _ in range(4):
            mu = rng.uniform(0, 1, 2)
            s = rng.uniform(0.15, 0.4)
            f += rng.uniform(0.5, 1.0) * np.exp(-((xy - mu) ** 2).sum(axis=1) / (2 * s * s))
        f = (f - f.min()) / max(f.max() - f.min(), 1e-12)
        fields.append(np.round(f, 4))
    return fields[0], fields[1]


def medium(n_dogs: int = 3, n_humans: int = 3, n_uavs: int = 0, seed: int = 7,
           budget_T: int = 7, delta_t: float = 300.0) -> Scenario:
    """7x7 grid of 100 m cells; ground agents task single cells, UAVs 2x2 windows.

    Per-interval efficacies stay below the coverage requirement of most cells,
    so several visits are worth making and the LP relaxation stays close to
    the integer optimum.
    """
    grid = CellGrid(7, 7, 100.0)
    slope, veg = terrain(grid, seed)
    cov = np.round(0.5 + 0.5 * (1 - 0.5 * slope) * (0.4 + 0.6 * veg), 4)
    cells = _cell_layout(grid, "ground")
    windows = _window_layout(grid, "air", size=2, stride=1)
    layouts = {}
    graphs = {}
    agents = []
    border = tuple(f"c{c}" for c in range(grid.n_cells) if len(grid.neighbors4(c)) < 4)
    air_border = tuple(s for s, cs in windows.sectors.items()
                       if any(len(grid.neighbors4(c)) < 4 for c in cs))
    ground_edges = tuple(grid_adjacency(grid, cells))
    air_edges = tuple(_window_edges(windows))
    rates = {
        "dog": 1.0 / (delta_t * (1.3 + 0.8 * slope)),
        "human": 1.0 / (delta_t * (1.6 + 1.2 * veg + 0.8 * slope)),
        "uav": 1.0 / (delta_t * (1.0 + 3.0 * veg)),
    }
    team = [("dog", n_dogs), ("human", n_humans), ("uav", n_uavs)]
    for kind, count in team:
        for i in range(count):
            aid = f"{kind}{i}"
            if kind == "uav":
                layouts.setdefault("air", windows)
                agents.append(AgentSpec(aid, kind, np.round(rates[kind], 9), "air", air_border))
                graphs[aid] = TraversabilityGraph(aid, air_edges)
            else:
                layouts.setdefault("ground", cells)
                agents.append(AgentSpec(aid, kind, np.round(rates[kind], 9), "ground", border))
                graphs[aid] = TraversabilityGraph(aid, ground_edges)
    return check_scenario(Scenario(grid, cov, agents, layouts, graphs,
                                   TimeDiscretization(delta_t, budget_T)))
