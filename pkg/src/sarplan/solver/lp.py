"""LP relaxations of a MipModel behind one interface.

``simplex`` is the in-house dense engine and supports warm starts. ``highs``
hands the sparse relaxation to scipy's HiGHS binding, for models whose dense
basis inverse would not fit the desk-scale budget. ``auto`` picks between
them by size.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..errors import NumericalError
from ..mip.model import MatrixForm, MipModel
from . import simplex
from .simplex import LPResult

DENSE_LIMIT = 600  # rows; above this "auto" uses HiGHS
IPM_LIMIT = 3000  # rows; above this HiGHS runs interior point (with crossover)


@dataclass(frozen=True)
class SolverConfig:
    time_limit_s: float = 60.0
    target_gap: float = 1e-6
    integrality_tolerance: float = 1e-6
    feasibility_tolerance: float = 1e-7
    rng_seed: int = 0
    node_limit: int | None = None
    lp_engine: str = "auto"  # "simplex" | "highs" | "auto"

    def __post_init__(self):
        if not self.time_limit_s > 0:
            raise ValueError("time_limit_s must be positive")
        if not self.target_gap >= 0:
            raise ValueError("target_gap must be nonnegative")
        for name in ("integrality_tolerance", "feasibility_tolerance"):
            v = getattr(self, name)
            if not 0 < v < 1e-3:
                raise ValueError(f"{name} must lie in (0, 1e-3)")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")
        if self.lp_engine not in ("simplex", "highs", "auto"):
            raise ValueError(f"unknown lp_engine {self.lp_engine!r}")


class Relaxation:
    """The LP relaxation of one model, re-solvable under changed column bounds."""

    def __init__(self, form: MatrixForm, engine: str = "auto", feas_tol: float = 1e-7):
        self.form = form
        n_rows = form.A.shape[0]
        if engine == "auto":
            engine = "simplex" if n_rows <= DENSE_LIMIT else "highs"
        self.engine = engine
        self.feas_tol = feas_tol
        if engine == "simplex":
            self._dense = form.A.toarray()
            self._mx = np.hstack([self._dense, -np.eye(n_rows)])
        else:
            self._prepare_highs()

    def _prepare_highs(self):
        f = self.form
        eq = np.isfinite(f.row_lo) & (f.row_lo == f.row_hi)
        up = np.isfinite(f.row_hi) & ~eq
        low = np.isfinite(f.row_lo) & ~eq
        A = f.A.tocsr()
        blocks, rhs = [], []
        if up.any():
            blocks.append(A[up])
            rhs.append(f.row_hi[up])
        if low.any():
            blocks.append(-A[low])
            rhs.append(-f.row_lo[low])
        self._A_ub = sp.vstack(blocks).tocsr() if blocks else None
        self._b_ub = np.concatenate(rhs) if rhs else None
        self._A_eq = A[eq] if eq.any() else None
        self._b_eq = f.row_lo[eq] if eq.any() else None

    def solve(self, lb=None, ub=None, basis=None, time_limit: float | None = None) -> LPResult:
        """Status "limit" means HiGHS ran out of ``time_limit`` seconds."""
        f = self.form
        lb = f.lb if lb is None else lb
        ub = f.ub if ub is None else ub
        if np.any(lb > ub):
            return LPResult("infeasible")
        if self.engine == "simplex":
            return simplex.solve(f.c, self._dense, f.row_lo, f.row_hi, lb, ub, basis=basis,
                                 feas_tol=self.feas_tol, Mx=self._mx)
        bounds = np.column_stack([lb, ub])
        method = "highs-ipm" if f.A.shape[0] > IPM_LIMIT else "highs-ds"
        options = {} if time_limit is None else {"time_limit": max(time_limit, 1e-3)}
        res = linprog(-f.c, A_ub=self._A_ub, b_ub=self._b_ub, A_eq=self._A_eq, b_eq=self._b_eq,
                      bounds=bounds, method=method, options=options)
        if res.status == 1:
            return LPResult("limit")
        if res.status == 0:
            return LPResult("optimal", np.asarray(res.x), float(np.dot(f.c, res.x)), None, int(res.nit))
        if res.status == 2:
            return LPResult("infeasible")
        if res.status == 3:
            return LPResult("unbounded")
        raise NumericalError(f"HiGHS failed: {res.message}")


def solve_lp(model: MipModel, config: SolverConfig | None = None) -> LPResult:
    """Optimum of the model with integrality dropped."""
    config = config or SolverConfig()
    return Relaxation(model.matrix_form(), config.lp_engine, config.feasibility_tolerance).solve()
