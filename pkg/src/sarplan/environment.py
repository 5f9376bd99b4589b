"""Discretized search area, per-agent sector layouts and traversability.

Cells are indexed row-major from the north-west corner. A cell's position is
its center; x grows eastwards and y southwards, both in meters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

AGENT_KINDS = ("uav", "human", "dog")


@dataclass(frozen=True)
class CellGrid:
    width_cells: int
    height_cells: int
    cell_size_m: float

    def __post_init__(self):
        if self.width_cells < 1 or self.height_cells < 1:
            raise InputError("grid needs at least one cell in each direction")
        if not self.cell_size_m > 0:
            raise InputError("cell_size_m must be positive")

    @property
    def n_cells(self) -> int:
        return self.width_cells * self.height_cells

    def has_cell(self, c) -> bool:
        return isinstance(c, (int, np.integer)) and 0 <= c < self.n_cells

    def row_col(self, c: int) -> tuple[int, int]:
        return divmod(int(c), self.width_cells)

    def cell_at(self, row: int, col: int) -> int:
        return row * self.width_cells + col

    def cell_center(self, c: int) -> tuple[float, float]:
        r, q = self.row_col(c)
        return ((q + 0.5) * self.cell_size_m, (r + 0.5) * self.cell_size_m)

    @cached_property
    def centers(self) -> np.ndarray:
        """(n_cells, 2) array of cell centers."""
        idx = np.arange(self.n_cells)
        return np.column_stack(
            [(idx % self.width_cells + 0.5) * self.cell_size_m,
             (idx // self.width_cells + 0.5) * self.cell_size_m]
        )

    def neighbors4(self, c: int) -> list[int]:
        r, q = self.row_col(c)
        out = []
        for dr, dq in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            rr, qq = r + dr, q + dq
            if 0 <= rr < self.height_cells and 0 <= qq < self.width_cells:
                out.append(self.cell_at(rr, qq))
        return out


@dataclass(frozen=True)
class SectorLayout:
    """Named sectors, each a nonempty set of cell ids. Sectors may overlap."""

    id: str
    sectors: dict[str, tuple[int, ...]]
    owner: str | None = None

    @property
    def sector_ids(self) -> list[str]:
        return list(self.sectors)

    def cells(self, sector: str) -> tuple[int, ...]:
        try:
            return self.sectors[sector]
        except KeyError:
            raise InputError(f"unknown sector {sector!r} in layout {self.id!r}") from None


@dataclass(frozen=True)
class TraversabilityGraph:
    agent: str
    edges: tuple[tuple[str, str], ...]


@dataclass(frozen=True, eq=False)
class AgentSpec:
    id: str
    kind: str
    coverage_rate: np.ndarray  # per-second coverage fraction, one entry per cell
    layout_ref: str
    start_sectors: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in AGENT_KINDS:
            raise InputError(f"agent {self.id!r}: unknown kind {self.kind!r}")
        object.__setattr__(self, "coverage_rate", np.asarray(self.coverage_rate, dtype=float))


@dataclass(frozen=True)
class TimeDiscretization:
    delta_t: float
    budget_T: int

    def __post_init__(self):
        if not self.delta_t > 0:
            raise InputError("delta_t must be positive")
        if self.budget_T < 1:
            raise InputError("budget_T must be at least 1")


@dataclass(eq=False)
class Scenario:
    grid: CellGrid
    coverage_map: np.ndarray
    agents: list[AgentSpec]
    layouts: dict[str, SectorLayout]
    graphs: dict[str, TraversabilityGraph]
    time: TimeDiscretization
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.coverage_map = np.asarray(self.coverage_map, dtype=float)

    @property
    def agent_ids(self) -> list[str]:
        return [a.id for a in self.agents]

    def agent(self, agent_id: str) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise InputError(f"unknown agent {agent_id!r}")

    def agent_index(self, agent_id: str) -> int:
        for k, a in enumerate(self.agents):
            if a.id == agent_id:
                return k
        raise InputError(f"unknown agent {agent_id!r}")

    def layout_of(self, agent_id: str) -> SectorLayout:
        ref = self.agent(agent_id).layout_ref
        try:
            return self.layouts[ref]
        except KeyError:
            raise InputError(f"agent {agent_id!r} references missing layout {ref!r}") from None

    def graph_of(self, agent_id: str) -> TraversabilityGraph:
        try:
            return self.graphs[agent_id]
        except KeyError:
            raise InputError(f"no traversability graph for agent {agent_id!r}") from None

    def sectors_of(self, agent_id: str) -> list[str]:
        return self.layout_of(agent_id).sector_ids

    def successors(self, agent_id: str) -> dict[str, list[str]]:
        key = ("succ", agent_id)
        if key not in self._cache:
            succ = {s: [] for s in self.sectors_of(agent_id)}
            for i, j in self.graph_of(agent_id).edges:
                succ[i].append(j)
            self._cache[key] = succ
        return self._cache[key]

    def efficacy(self, agent_id: str) -> np.ndarray:
        """(n_sectors, n_cells) table of per-interval search performance."""
        key = ("eff", agent_id)
        if key not in self._cache:
            layout = self.layout_of(agent_id)
            agent = self.agent(agent_id)
            table = np.zeros((len(layout.sectors), self.grid.n_cells))
            for s, cells in enumerate(layout.sectors.values()):
                cells = list(cells)
                table[s, cells] = agent.coverage_rate[cells] * (self.time.delta_t / len(cells))
            self._cache[key] = table
        return self._cache[key]

    def centroids(self, layout_id: str) -> np.ndarray:
        key = ("cent", layout_id)
        if key not in self._cache:
            layout = self.layouts[layout_id]
            self._cache[key] = np.array(
                [self.grid.centers[list(cells)].mean(axis=0) for cells in layout.sectors.values()]
            )
        return self._cache[key]

    def distances(self, agent_a: str, agent_b: str) -> np.ndarray:
        """Centroid distances between the sectors of two agents' layouts."""
        la, lb = self.agent(agent_a).layout_ref, self.agent(agent_b).layout_ref
        key = ("dist", la, lb)
        if key not in self._cache:
            ca, cb = self.centroids(la), self.centroids(lb)
            self._cache[key] = np.sqrt(((ca[:, None, :] - cb[None, :, :]) ** 2).sum(axis=2))
        return self._cache[key]

    @property
    def diameter_m(self) -> float:
        """Largest centroid distance between any two sectors of any layouts."""
        if "diam" not in self._cache:
            pts = np.vstack([self.centroids(lid) for lid in self.layouts])
            pts = np.unique(pts, axis=0)
            d = 0.0
            if len(pts) > 1:
                d = float(np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)).max())
            self._cache["diam"] = d
        return self._cache["diam"]


def search_performance(layout: SectorLayout, agent: AgentSpec, sector: str, cell: int,
                       dt: TimeDiscretization, grid: CellGrid | None = None) -> float:
    """Expected coverage of ``cell`` from one interval spent by ``agent`` in ``sector``.

    The interval's effort is split uniformly over the sector's cells.
    """
    cells = layout.cells(sector)
    n = grid.n_cells if grid is not None else len(agent.coverage_rate)
    if not (isinstance(cell, (int, np.integer)) and 0 <= cell < n):
        raise InputError(f"unknown cell {cell!r}")
    if cell not in cells:
        return 0.0
    return float(agent.coverage_rate[cell]) * (dt.delta_t / len(cells))


def sector_centroid(grid: CellGrid, layout: SectorLayout, sector: str) -> tuple[float, float]:
    pts = grid.centers[list(layout.cells(sector))]
    x, y = pts.mean(axis=0)
    return float(x), float(y)


def sector_distance(grid: CellGrid, layout_a: SectorLayout, sector_i: str,
                    layout_b: SectorLayout, sector_j: str) -> float:
    xa, ya = sector_centroid(grid, layout_a, sector_i)
    xb, yb = sector_centroid(grid, layout_b, sector_j)
    return math.hypot(xa - xb, ya - yb)


def grid_adjacency(grid: CellGrid, layout: SectorLayout) -> list[tuple[str, str]]:
    """Directed edges between sectors whose cell sets touch 4-wise (or overlap)."""
    owner = {}
    for sid, cells in layout.sectors.items():
        for c in cells:
            owner.setdefault(c, set()).add(sid)
    edges = set()
    for sid, cells in layout.sectors.items():
        touching = set()
        for c in cells:
            touching |= owner[c]
            for nb in grid.neighbors4(c):
                touching |= owner.get(nb, set())
        touching.discard(sid)
        edges.update((sid, other) for other in touching)
    order = {s: n for n, s in enumerate(layout.sectors)}
    return sorted(edges, key=lambda e: (order[e[0]], order[e[1]]))


def validate_scenario(grid: CellGrid, layouts: dict[str, SectorLayout],
                      graphs: dict[str, TraversabilityGraph], agents: Sequence[AgentSpec],
                      dt: TimeDiscretization | None, coverage_map: Iterable[float] | None = None
                      ) -> list[str]:
    """Every invariant violation found, as readable messages. Empty means well-formed."""
    report = []
    n = grid.n_cells
    if coverage_map is not None:
        cm = np.asarray(coverage_map, dtype=float)
        if cm.shape != (n,):
            report.append(f"coverage_map has {cm.size} values, grid has {n} cells")
        else:
            for c in np.flatnonzero(~((cm >= 0) & (cm <= 1))):
                report.append(f"coverage_map[{c}] = {cm[c]} outside [0, 1]")
    if dt is not None:
        if not dt.delta_t > 0:
            report.append("time.delta_t must be positive")
        if dt.budget_T < 1:
            report.append("time.budget_T must be at least 1")

    for lid, layout in layouts.items():
        if not layout.sectors:
            report.append(f"layout {lid!r} has no sectors")
        for sid, cells in layout.sectors.items():
            if not cells:
                report.append(f"layout {lid!r} sector {sid!r} is empty")
            for c in cells:
                if not grid.has_cell(c):
                    report.append(f"layout {lid!r} sector {sid!r} references invalid cell {c!r}")

    seen = set()
    for a in agents:
        if a.id in seen:
            report.append(f"duplicate agent id {a.id!r}")
        seen.add(a.id)
        rate = np.asarray(a.coverage_rate, dtype=float)
        if rate.shape != (n,):
            report.append(f"agent {a.id!r} coverage_rate has {rate.size} values, grid has {n} cells")
        elif np.any(rate < 0) or not np.all(np.isfinite(rate)):
            report.append(f"agent {a.id!r} coverage_rate has negative or non-finite entries")
        layout = layouts.get(a.layout_ref)
        if layout is None:
            report.append(f"agent {a.id!r} references missing layout {a.layout_ref!r}")
            continue
        if not a.start_sectors:
            report.append(f"agent {a.id!r} has an empty start-sector set")
        for s in a.start_sectors:
            if s not in layout.sectors:
                report.append(f"agent {a.id!r} start sector {s!r} not in layout {layout.id!r}")
        graph = graphs.get(a.id)
        if graph is None:
            report.append(f"agent {a.id!r} has no traversability graph")
            continue
        for i, j in graph.edges:
            if i not in layout.sectors or j not in layout.sectors:
                report.append(f"agent {a.id!r} edge ({i!r}, {j!r}) references unknown sector")
            elif i == j:
                report.append(f"agent {a.id!r} edge ({i!r}, {j!r}) is a self-loop")
    for gid in graphs:
        if gid not in seen:
            report.append(f"graph for unknown agent {gid!r}")
    return report


def check_scenario(sc: Scenario) -> Scenario:
    report = validate_scenario(sc.grid, sc.layouts, sc.graphs, sc.agents, sc.time, sc.coverage_map)
    if report:
        raise InputError("invalid scenario: " + "; ".join(report))
    return sc
