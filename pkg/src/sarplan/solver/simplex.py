"""Dense bounded-variable primal simplex.

Works on the computational form  A x - s = 0  with bounds on both the
structural columns x and the row activities s. The logical columns give an
identity starting basis. Phase 1 minimizes the sum of bound infeasibilities
of the basic variables from whatever basis it is handed, so a branch-and-bound
child can restart from its parent's optimal basis.

Pricing is Dantzig's rule with a Harris two-pass ratio test; after a run of
degenerate pivots it switches to Bland's rule until progress resumes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError

PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64


@dataclass
class Basis:
    head: np.ndarray  # basic column per row, indices into [x, s]
    at_upper: np.ndarray  # nonbasic status for every column
    inverse: np.ndarray | None = None  # freshly factored basis inverse, if kept


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None
    basis: Basis | None = None
    iterations: int = 0


def _nonbasic_values(lo, hi, at_upper):
    v = np.where(at_upper, hi, lo)
    bad = ~np.isfinite(v)
    if bad.any():
        alt = np.where(at_upper, lo, hi)
        v = np.where(bad, np.where(np.isfinite(alt), alt, 0.0), v)
    return v


def solve(c, A, row_lo, row_hi, lb, ub, basis: Basis | None = None,
          feas_tol: float = 1e-7, opt_tol: float = 1e-9, max_iter: int | None = None,
          Mx: np.ndarray | None = None) -> LPResult:
    """Maximize c.x subject to row_lo <= A x <= row_hi and lb <= x <= ub.

    ``Mx`` may pass the precomputed ``[A, -I]`` when one matrix is solved
    many times.
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    N = n + m
    cost = np.concatenate([-np.asarray(c, dtype=float), np.zeros(m)])  # minimize
    lo = np.concatenate([lb, row_lo]).astype(float)
    hi = np.concatenate([ub, row_hi]).astype(float)
    if np.any(lo > hi + feas_tol):
        return LPResult("infeasible")
    if m == 0:
        x = np.where(cost < 0, hi, np.where(cost > 0, lo, np.where(np.isfinite(lo), lo, 0.0)))
        if not np.all(np.isfinite(x)):
            return LPResult("unbounded")
        return LPResult("optimal", x[:n], float(np.dot(c, x[:n])), Basis(np.arange(0), np.zeros(N, bool)), 0)

    if Mx is None:
        Mx = np.hstack([A, -np.eye(m)])

    def column(j):
        return Mx[:, j]

    head = None
    if basis is not None and len(basis.head) == m:
        head = np.array(basis.head, dtype=np.int64)
        at_upper = np.array(basis.at_upper, dtype=bool)
        if basis.inverse is not None:
            Binv = basis.inverse.copy()
        else:
            try:
                Binv = np.linalg.inv(Mx[:, head])
                if not np.all(np.isfinite(Binv)):
                    head = None
            except np.linalg.LinAlgError:
                head = None
    if head is None:
        head = np.arange(n, N)
        at_upper = np.zeros(N, dtype=bool)
        at_upper[:n] = ~np.isfinite(lb) & np.isfinite(ub)
        Binv = -np.eye(m)

    is_basic = np.zeros(N, dtype=bool)
    is_basic[head] = True
    # nonbasic columns sit on a finite bound when they have one
    at_upper &= np.isfinite(hi)
    at_upper |= ~np.isfinite(lo) & np.isfinite(hi) & ~is_basic
    x = _nonbasic_values(lo, hi, at_upper)
    x[head] = 0.0

    def refresh(Binv):
        xn = x.copy()
        xn[head] = 0.0
        return -Binv @ (Mx @ xn)

    x[head] = refresh(Binv)
    fixed = lo == hi
    max_iter = max_iter or 50 * (N + 10)
    it = since_refactor = degenerate = 0
    bland = False

    while True:
        if it >= max_iter:
            raise NumericalError(f"simplex iteration limit {max_iter} reached")
        if since_refactor >= REFACTOR_EVERY:
            try:
                Binv = np.linalg.inv(Mx[:, head])
            except np.linalg.LinAlgError:
                raise NumericalError("basis matrix became singular") from None
            x[head] = refresh(Binv)
            since_refactor = 0

        xb, lb_b, ub_b = x[head], lo[head], hi[head]
        below = xb < lb_b - feas_tol
        above = xb > ub_b + feas_tol
        phase1 = bool(below.any() or above.any())
        cb = (above.astype(float) - below.astype(float)) if phase1 else cost[head]

        y = cb @ Binv
        d = (cost if not phase1 else np.zeros(N)) - np.concatenate([y @ A, -y])
        d[head] = 0.0
        free = ~np.isfinite(lo) & ~np.isfinite(hi)
        inc = ~is_basic & ~fixed & (d < -opt_tol) & ~at_upper
        dec = ~is_basic & ~fixed & (d > opt_tol) & (at_upper | free)
        cand = np.flatnonzero(inc | dec)
        if cand.size == 0:
            if phase1:
                return LPResult("infeasible", iterations=it)
            break
        if bland:
            j = int(cand[0])
        else:
            j = int(cand[np.argmax(np.abs(d[cand]))])
        direction = 1.0 if d[j] < 0 else -1.0
        alpha = Binv @ column(j)
        delta = -direction * alpha  # rate of change of the basic values

        theta, r, leave_upper = _ratio_test(x[head], lo[head], hi[head], delta, below, above,
                                            phase1, bland, 0.5 * feas_tol, head)
        span = hi[j] - lo[j]
        if span <= theta:
            theta, r = span, -1
        if not np.isfinite(theta):
            if phase1:
                raise NumericalError("phase 1 ray without breakpoint")
            return LPResult("unbounded", iterations=it)
        theta = max(theta, 0.0)

        x[j] += direction * theta
        x[head] += delta * theta
        it += 1
        since_refactor += 1
        if theta <= 1e-12:
            degenerate += 1
            if degenerate > 2 * m + 20:
                bland = True
        else:
            degenerate = 0
            bland = False

        if r < 0:
            at_upper[j] = direction > 0
            x[j] = hi[j] if at_upper[j] else lo[j]
            continue
        leaving = head[r]
        x[leaving] = hi[leaving] if leave_upper else lo[leaving]
        at_upper[leaving] = leave_upper
        is_basic[leaving] = False
        is_basic[j] = True
        head[r] = j
        piv = alpha[r]
        row = Binv[r] / piv
        Binv -= np.outer(alpha, row)
        Binv[r] = row

    # final accuracy check; refactor when the updated inverse has drifted
    x[head] = refresh(Binv)
    scale = 1.0 + np.abs(x).max()
    if since_refactor > 0 and np.abs(Mx @ x).max() > 1e-9 * scale:
        try:
            Binv = np.linalg.inv(Mx[:, head])
        except np.linalg.LinAlgError:
            raise NumericalError("final basis is singular") from None
        x[head] = refresh(Binv)
    scale = 1.0 + np.abs(x).max()
    if np.any(x < lo - 1e3 * feas_tol * scale) or np.any(x > hi + 1e3 * feas_tol * scale):
        raise NumericalError("solution violates bounds after refactorization")
    xs = x[:n]
    return LPResult("optimal", xs.copy(), float(np.dot(c, xs)),
                    Basis(head.copy(), at_upper.copy(), Binv), it)


def _ratio_test(xb, lb, ub, delta, below, above, phase1, bland, tol, head):
    """Step length, leaving row (-1 if none) and whether it leaves at its upper bound."""
    m = len(xb)
    big = np.inf
    lim = np.full(m, big)
    lim_relaxed = np.full(m, big)
    up = np.zeros(m, dtype=bool)
    dec = delta < -PIVOT_TOL
    inc = delta > PIVOT_TOL

    if phase1:
        feas = ~below & ~above
        # feasible basics keep their bounds
        sel = feas & dec & np.isfinite(lb)
        lim[sel] = (xb[sel] - lb[sel]) / -delta[sel]
        lim_relaxed[sel] = (xb[sel] - lb[sel] + tol) / -delta[sel]
        sel = feas & inc & np.isfinite(ub)
        lim[sel] = (ub[sel] - xb[sel]) / delta[sel]
        lim_relaxed[sel] = (ub[sel] - xb[sel] + tol) / delta[sel]
        up[sel] = True
        # infeasible basics stop where they become feasible
        sel = below & inc
        lim[sel] = (lb[sel] - xb[sel]) / delta[sel]
        lim_relaxed[sel] = lim[sel]
        sel = above & dec
        lim[sel] = (xb[sel] - ub[sel]) / -delta[sel]
        lim_relaxed[sel] = lim[sel]
        up[sel] = True
    else:
        sel = dec & np.isfinite(lb)
        lim[sel] = (xb[sel] - lb[sel]) / -delta[sel]
        lim_relaxed[sel] = (xb[sel] - lb[sel] + tol) / -delta[sel]
        sel = inc & np.isfinite(ub)
        lim[sel] = (ub[sel] - xb[sel]) / delta[sel]
        lim_relaxed[sel] = (ub[sel] - xb[sel] + tol) / delta[sel]
        up[sel] = True

    finite = np.flatnonzero(np.isfinite(lim))
    if finite.size == 0:
        return big, -1, False
    if bland:
        best = lim[finite].min()
        ties = finite[lim[finite] <= best + 1e-12]
        r = int(ties[np.argmin(head[ties])])
        return float(max(lim[r], 0.0)), r, bool(up[r])
    # Harris: largest pivot among rows blocking before the relaxed minimum
    cap = lim_relaxed[finite].min()
    ok = finite[lim[finite] <= cap]
    r = int(ok[np.argmax(np.abs(delta[ok]))])
    return float(max(lim[r], 0.0)), r, bool(up[r])
