"""Best-first branch-and-bound over LP relaxations (maximization)."""
from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..mip.model import MipModel
from .lp import Relaxation, SolverConfig
from .simplex import Basis

log = logging.getLogger(__name__)

INVERSE_BUDGET = 2 ** 25  # floats of cached basis inverses kept on open nodes


@dataclass
class SolveOutcome:
    status: str  # optimal | feasible_gap | infeasible | unbounded | limit_no_incumbent
    x: np.ndarray | None
    objective: float | None
    bound: float
    gap: float
    nodes: int
    wall_time: float
    root_bound: float | None = None
    engine: str = ""
    log: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        return {"status": self.status, "objective": self.objective, "bound": self.bound,
                "gap": self.gap, "nodes": self.nodes, "wall_time_s": round(self.wall_time, 3),
                "root_bound": self.root_bound, "lp_engine": self.engine}


def relative_gap(bound: float, incumbent: float | None) -> float:
    if incumbent is None or math.isinf(bound):
        return math.inf
    return max(0.0, (bound - incumbent) / max(abs(bound), 1e-9))


def _branch_column(x, form, tol):
    frac = np.abs(x - np.round(x))
    for mask in (form.binary, form.integer & ~form.binary):
        cand = np.where(mask & (frac > tol), frac, -1.0)
        # most fractional; argmax keeps the lowest index among ties
        j = int(np.argmax(cand))
        if cand[j] > 0:
            return j
    return -1


def branch_and_bound(model: MipModel, config: SolverConfig | None = None,
                     warm_start=None) -> SolveOutcome:
    config = config or SolverConfig()
    t0 = time.perf_counter()
    form = model.matrix_form()
    tol = config.integrality_tolerance
    lb0 = form.lb.copy()
    ub0 = form.ub.copy()
    lb0[form.integer] = np.ceil(lb0[form.integer] - tol)
    ub0[form.integer] = np.floor(ub0[form.integer] + tol)
    relax = Relaxation(form, config.lp_engine, config.feasibility_tolerance)

    inc_x, inc_val = None, None
    history = []

    def elapsed():
        return time.perf_counter() - t0

    def offer(x, value, nodes, bound):
        nonlocal inc_x, inc_val
        if inc_val is not None and value <= inc_val + 1e-12 * (1 + abs(inc_val)):
            return
        inc_x, inc_val = x, value
        entry = {"time_s": round(elapsed(), 4), "nodes": nodes, "incumbent": value,
                 "bound": bound, "gap": relative_gap(bound, value)}
        history.append(entry)
        log.info("incumbent %.9g bound %.9g gap %.3g nodes %d", value, bound, entry["gap"], nodes)

    if warm_start is not None:
        ws = np.asarray(warm_start, dtype=float)
        act = form.A @ ws
        slack = config.feasibility_tolerance * 10
        ok = (np.all(ws >= lb0 - slack) and np.all(ws <= ub0 + slack)
              and np.all(act >= form.row_lo - slack) and np.all(act <= form.row_hi + slack)
              and np.all(np.abs(ws[form.integer] - np.round(ws[form.integer])) <= tol))
        if ok:
            ws = ws.copy()
            ws[form.integer] = np.round(ws[form.integer])
            offer(ws, float(form.c @ ws), 0, math.inf)
        else:
            log.info("warm start rejected: infeasible for this model")

    def remaining():
        return config.time_limit_s - elapsed()

    root = relax.solve(lb0, ub0, time_limit=remaining())
    if root.status == "limit":
        status = "feasible_gap" if inc_val is not None else "limit_no_incumbent"
        return SolveOutcome(status, inc_x, inc_val, math.inf, math.inf, 1, elapsed(), None,
                            relax.engine, history)
    if root.status == "unbounded":
        return SolveOutcome("unbounded", None, None, math.inf, math.inf, 1, elapsed(), None, relax.engine)
    if root.status == "infeasible":
        return SolveOutcome("infeasible", None, None, -math.inf, math.inf, 1, elapsed(), None, relax.engine)
    root_bound = root.objective
    nodes = 1
    heap = []
    counter = 0

    def consider(res, changes, parent_bound):
        nonlocal counter
        if res.status != "optimal":
            return
        bound = min(res.objective, parent_bound)
        if inc_val is not None and bound <= inc_val + 1e-9 * (1 + abs(inc_val)):
            return
        j = _branch_column(res.x, form, tol)
        if j < 0:
            x = res.x.copy()
            x[form.integer] = np.round(x[form.integer])
            top = max(-heap[0][0], bound) if heap else bound
            offer(x, float(form.c @ x), nodes, max(top, float(form.c @ x)))
            return
        counter += 1
        basis = res.basis
        if basis is not None and basis.inverse is not None and len(heap) * basis.inverse.size > INVERSE_BUDGET:
            basis = Basis(basis.head, basis.at_upper)
        heapq.heappush(heap, (-bound, counter, changes, res.x, basis, j))

    consider(root, (), math.inf)
    stopped = False
    while heap:
        bound = -heap[0][0]
        if inc_val is not None and relative_gap(bound, inc_val) <= config.target_gap:
            break
        if elapsed() >= config.time_limit_s or (config.node_limit and nodes >= config.node_limit):
            stopped = True
            break
        neg, order, changes, x, basis, j = heapq.heappop(heap)
        if inc_val is not None and -neg <= inc_val + 1e-9 * (1 + abs(inc_val)):
            continue
        lb, ub = lb0.copy(), ub0.copy()
        for col, lo, hi in changes:
            lb[col], ub[col] = lo, hi
        v = x[j]
        children = []
        for lo, hi in ((lb[j], math.floor(v)), (math.ceil(v), ub[j])):
            if lo > hi:
                continue
            clb, cub = lb.copy(), ub.copy()
            clb[j], cub[j] = lo, hi
            res = relax.solve(clb, cub, basis=basis, time_limit=remaining())
            nodes += 1
            children.append((res, changes + ((j, lo, hi),)))
        if any(res.status == "limit" for res, _ in children):
            # put the parent back so its bound still counts, then stop
            heapq.heappush(heap, (neg, order, changes, x, basis, j))
            stopped = True
            break
        for res, ch in children:
            consider(res, ch, -neg)

    if heap:
        best = max(-heap[0][0], inc_val if inc_val is not None else -math.inf)
    else:
        best = inc_val if inc_val is not None else -math.inf
    gap = relative_gap(best, inc_val)
    if inc_val is None:
        status = "limit_no_incumbent" if stopped else "infeasible"
    elif gap <= config.target_gap:
        status = "optimal"
    else:
        status = "feasible_gap"
    return SolveOutcome(status, inc_x, inc_val, best, gap, nodes, elapsed(), root_bound,
                        relax.engine, history)
