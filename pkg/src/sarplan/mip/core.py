"""Routing-and-scheduling MIP: paths through a dummy depot, visit durations,
arrival times, and clamped per-cell coverage."""
from __future__ import annotations

import numpy as np

from ..environment import Scenario, check_scenario
from .model import MipModel

DUMMY = None  # role placeholder for the depot vertex


def _tag(model, key):
    return model.tags.setdefault(key, {})


def build_core(scenario: Scenario) -> MipModel:
    check_scenario(scenario)
    T = scenario.time.budget_T
    m = MipModel()
    m.tags.update(budget_T=T, occupancy=False, directives=[])
    xs, ys, ts, ws = _tag(m, "x"), _tag(m, "y"), _tag(m, "t"), _tag(m, "w")
    work = {}  # w column -> efficacy row, for the coverage rows

    for k, agent in enumerate(scenario.agents):
        aid = agent.id
        sectors = scenario.sectors_of(aid)
        pos = {s: n for n, s in enumerate(sectors)}
        eff = scenario.efficacy(aid)
        xs[aid], ys[aid], ts[aid], ws[aid] = [], {}, {}, {}
        for s in sectors:
            i = pos[s]
            ys[aid][s] = m.add_var(f"y_{k}_{i}", "binary", role=("y", aid, s))
            ts[aid][s] = m.add_var(f"t_{k}_{i}", "integer", 0, T, role=("t", aid, s))
            ws[aid][s] = m.add_var(f"w_{k}_{i}", "integer", 0, T, role=("w", aid, s))
            work[ws[aid][s]] = eff[i]

        arcs = [(DUMMY, s) for s in sectors if s in agent.start_sectors]
        arcs += list(scenario.graph_of(aid).edges)
        arcs += [(s, DUMMY) for s in sectors]
        inflow = {s: {} for s in sectors}
        outflow = {s: {} for s in sectors}
        start, end = {}, {}
        for a, b in arcs:
            na = "d" if a is DUMMY else pos[a]
            nb = "d" if b is DUMMY else pos[b]
            j = m.add_var(f"x_{k}_{na}_{nb}", "binary", role=("x", aid, a, b))
            xs[aid].append((j, a, b))
            if a is DUMMY:
                start[j] = 1.0
            else:
                outflow[a][j] = 1.0
            if b is DUMMY:
                end[j] = 1.0
            else:
                inflow[b][j] = 1.0

        m.add_row(f"depart_{k}", start, "=", 1)
        m.add_row(f"return_{k}", end, "=", 1)
        for s in sectors:
            i, y = pos[s], ys[aid][s]
            m.add_row(f"in_{k}_{i}", {**inflow[s], y: -1.0}, "=", 0)
            m.add_row(f"out_{k}_{i}", {**outflow[s], y: -1.0}, "=", 0)
        for j, a, b in xs[aid]:
            if a is DUMMY or b is DUMMY:
                continue
            # t_a + w_a - t_b <= (1 - x_ab) T
            m.add_row(f"mtz_{k}_{pos[a]}_{pos[b]}",
                      {ts[aid][a]: 1.0, ws[aid][a]: 1.0, ts[aid][b]: -1.0, j: float(T)}, "<=", T)
        for s in sectors:
            i, y, t, w = pos[s], ys[aid][s], ts[aid][s], ws[aid][s]
            m.add_row(f"arrive_{k}_{i}", {y: 1.0, t: -1.0}, "<=", 0)
            m.add_row(f"dur_{k}_{i}", {w: 1.0, y: -float(T)}, "<=", 0)
            m.add_row(f"visit_{k}_{i}", {y: 1.0, w: -1.0}, "<=", 0)
        m.add_row(f"budget_{k}", {ws[aid][s]: 1.0 for s in sectors}, "=", T)

    phis = _tag(m, "phi")
    c0 = scenario.coverage_map
    for c in range(scenario.grid.n_cells):
        phis[c] = m.add_var(f"phi_{c}", "continuous", 0.0, float(c0[c]), role=("phi", c), obj=1.0)
    for c in range(scenario.grid.n_cells):
        terms = {phis[c]: 1.0}
        for w, row in work.items():
            if row[c] > 0:
                terms[w] = -float(row[c])
        m.add_row(f"cov_{c}", terms, "<=", 0)
    return m


def coverage_columns(model: MipModel) -> list[int]:
    return [model.tags["phi"][c] for c in sorted(model.tags["phi"])]


def coverage_total(model: MipModel, x) -> float:
    return float(np.sum(np.asarray(x)[coverage_columns(model)]))
