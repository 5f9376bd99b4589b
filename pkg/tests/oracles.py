"""Independent reference implementations used only by the tests.

Nothing here calls into the package's planning, MIP or geometry code; the
scenario objects are read as plain data.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


# ---------------------------------------------------------------- enumeration
def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def agent_timelines(scenario, aid):
    """Every valid timeline (tuple of sector ids of length T) of one agent."""
    T = scenario.time.budget_T
    agent = next(a for a in scenario.agents if a.id == aid)
    edges = set(scenario.graphs[aid].edges)
    sectors = list(scenario.layouts[agent.layout_ref].sectors)
    out = []

    def grow(path):
        for sched in _compositions(T, len(path)):
            out.append(tuple(s for s, n in zip(path, sched) for _ in range(n)))
        if len(path) == T:
            return
        for nxt in sectors:
            if nxt not in path and (path[-1], nxt) in edges:
                grow(path + [nxt])

    for s in agent.start_sectors:
        grow([s])
    return out


def per_interval(scenario, aid, sector):
    """Coverage added to each cell by one interval in a sector (uniform split)."""
    agent = next(a for a in scenario.agents if a.id == aid)
    cells = scenario.layouts[agent.layout_ref].sectors[sector]
    v = np.zeros(scenario.grid.width_cells * scenario.grid.height_cells)
    for c in cells:
        v[c] = agent.coverage_rate[c] * scenario.time.delta_t / len(cells)
    return v


def centroid(scenario, aid, sector):
    agent = next(a for a in scenario.agents if a.id == aid)
    cells = scenario.layouts[agent.layout_ref].sectors[sector]
    w, size = scenario.grid.width_cells, scenario.grid.cell_size_m
    xs = [(c % w + 0.5) * size for c in cells]
    ys = [(c // w + 0.5) * size for c in cells]
    return sum(xs) / len(xs), sum(ys) / len(ys)


def hinge(kind, limit, theta, psi):
    if kind == "coalition":
        return np.maximum(0.0, psi - limit)
    if kind == "network":
        return np.maximum(0.0, theta - limit)
    if kind == "interference_avoidance":
        return np.maximum(0.0, limit - theta)
    return np.maximum(0.0, limit - psi)


def enumerate_optimum(scenario, directives=(), weights=()):
    """Best objective over all joint timelines, and one maximizer.

    Soft directives subtract ``weight * violation`` per active step; hard
    directives discard every combination with positive violation. Returns
    (None, None) when no combination satisfies the hard directives.
    """
    ids = [a.id for a in scenario.agents]
    T = scenario.time.budget_T
    lines = {a: agent_timelines(scenario, a) for a in ids}
    raws = {}
    index = {}
    for a in ids:
        agent = next(x for x in scenario.agents if x.id == a)
        secs = list(scenario.layouts[agent.layout_ref].sectors)
        index[a] = {s: i for i, s in enumerate(secs)}
        table = np.array([per_interval(scenario, a, s) for s in secs])
        raws[a] = np.array([table[[index[a][s] for s in ln]].sum(axis=0) for ln in lines[a]])
    grids = np.indices([len(lines[a]) for a in ids]).reshape(len(ids), -1)
    raw = sum(raws[a][grids[k]] for k, a in enumerate(ids))
    value = np.minimum(scenario.coverage_map, raw).sum(axis=1)
    ok = np.ones(value.shape, dtype=bool)
    for d, w in zip(directives, weights):
        steps = list(range(T)) if d.steps is None else list(d.steps)
        dists = []
        for a in d.group_a:
            for b in d.group_b:
                ka, kb = ids.index(a), ids.index(b)
                la = np.array([[index[a][s] for s in ln] for ln in lines[a]])[grids[ka]][:, steps]
                lb = np.array([[index[b][s] for s in ln] for ln in lines[b]])[grids[kb]][:, steps]
                secs_a, secs_b = list(index[a]), list(index[b])
                psi = np.array([[math.dist(centroid(scenario, a, i), centroid(scenario, b, j))
                                 for j in secs_b] for i in secs_a])
                dists.append(psi[la, lb])
        dists = np.array(dists)
        viol = hinge(d.kind, d.limit_m, dists.min(axis=0), dists.max(axis=0))
        if d.mode == "hard":
            ok &= viol.max(axis=1, initial=0.0) <= 1e-9
        else:
            value = value - w * viol.sum(axis=1)
    if not ok.any():
        return None, None
    value = np.where(ok, value, -np.inf)
    best = int(np.argmax(value))
    choice = {a: lines[a][grids[k][best]] for k, a in enumerate(ids)}
    return float(value[best]), choice


# ---------------------------------------------------------------- dense simplex
def tableau_lp(c, A_ub, b_ub, tol=1e-9):
    """Maximize c.x s.t. A_ub x <= b_ub, x >= 0 with b_ub >= 0 (textbook tableau, Bland)."""
    A_ub = np.asarray(A_ub, float)
    m, n = A_ub.shape
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A_ub
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b_ub
    tab[m, :n] = -np.asarray(c, float)
    basis = list(range(n, n + m))
    while True:
        enter = next((j for j in range(n + m) if tab[m, j] < -tol), None)
        if enter is None:
            break
        ratios = [(tab[i, -1] / tab[i, enter], basis[i], i) for i in range(m) if tab[i, enter] > tol]
        if not ratios:
            return "unbounded", None
        _, _, r = min(ratios)
        tab[r] /= tab[r, enter]
        for i in range(m + 1):
            if i != r:
                tab[i] -= tab[i, enter] * tab[r]
        basis[r] = enter
    x = np.zeros(n + m)
    for i, b in enumerate(basis):
        x[b] = tab[i, -1]
    return "optimal", float(tab[m, -1])


# ---------------------------------------------------------------- geometry
def brute_hull(points):
    """Hull vertices by testing every directed pair as a supporting edge."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) < 3:
        return pts
    edges = []
    for p in pts:
        for q in pts:
            if p == q:
                continue
            side = [(q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]) for r in pts]
            if all(s >= -1e-9 for s in side):
                # keep only the extreme pair along collinear runs
                between = [r for r, s in zip(pts, side) if abs(s) <= 1e-9]
                d = math.dist(p, q)
                if all(math.dist(p, r) <= d + 1e-9 for r in between):
                    edges.append((p, q))
    verts = sorted({p for e in edges for p in e})
    return verts


def fan_area(points):
    """Area of the hull of the points by fan triangulation around its centroid."""
    verts = brute_hull(points)
    if len(verts) < 3:
        return 0.0
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)
    verts.sort(key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    area = 0.0
    for a, b in zip(verts, verts[1:] + verts[:1]):
        area += abs((a[0] - cx) * (b[1] - cy) - (b[0] - cx) * (a[1] - cy)) / 2
    return area


def pair_scan(positions_a, positions_b):
    """Min and max over all cross pairs, plain loops."""
    ds = [math.dist(p, q) for p in positions_a for q in positions_b]
    return min(ds), max(ds)
