"""Solver-agnostic MIP container.

Variables and rows are stored in insertion order, which fixes the column and
row order of every matrix and file derived from the model.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import InputError

KINDS = ("binary", "integer", "continuous")
SENSES = ("<=", ">=", "=")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lb: float
    ub: float


@dataclass(frozen=True)
class Row:
    name: str
    cols: tuple[int, ...]
    coefs: tuple[float, ...]
    sense: str
    rhs: float


@dataclass
class MatrixForm:
    """max c.x  s.t.  row_lo <= A x <= row_hi,  lb <= x <= ub."""

    c: np.ndarray
    A: sp.csr_matrix
    row_lo: np.ndarray
    row_hi: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    integer: np.ndarray  # bool mask
    binary: np.ndarray  # bool mask


@dataclass
class MipModel:
    variables: list[Variable] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    roles: dict[str, tuple] = field(default_factory=dict)
    index: dict[str, int] = field(default_factory=dict)
    tags: dict = field(default_factory=dict)

    def copy(self) -> "MipModel":
        return MipModel(list(self.variables), list(self.rows), dict(self.objective),
                        dict(self.roles), dict(self.index), copy.deepcopy(self.tags))

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def add_var(self, name: str, kind: str = "continuous", lb: float = 0.0,
                ub: float = np.inf, role: tuple | None = None, obj: float = 0.0) -> int:
        if name in self.index:
            raise InputError(f"duplicate variable {name!r}")
        if kind not in KINDS:
            raise InputError(f"unknown variable kind {kind!r}")
        if kind == "binary":
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        if kind != "continuous" and not (np.isfinite(lb) and np.isfinite(ub)):
            raise InputError(f"integer variable {name!r} needs finite bounds")
        j = len(self.variables)
        self.variables.append(Variable(name, kind, float(lb), float(ub)))
        self.index[name] = j
        if role is not None:
            self.roles[name] = role
        if obj:
            self.objective[j] = self.objective.get(j, 0.0) + obj
        return j

    def add_row(self, name: str, terms: dict[int, float], sense: str, rhs: float) -> None:
        if sense not in SENSES:
            raise InputError(f"unknown sense {sense!r}")
        cols = tuple(sorted(j for j, a in terms.items() if a != 0))
        for j in cols:
            if not 0 <= j < len(self.variables):
                raise InputError(f"row {name!r} references undeclared column {j}")
        self.rows.append(Row(name, cols, tuple(float(terms[j]) for j in cols), sense, float(rhs)))

    def var(self, name: str) -> int:
        return self.index[name]

    def fix(self, name: str, lb: float, ub: float) -> None:
        j = self.index[name]
        v = self.variables[j]
        self.variables[j] = Variable(v.name, v.kind, float(lb), float(ub))

    def matrix_form(self) -> MatrixForm:
        n = self.n_vars
        c = np.zeros(n)
        for j, a in self.objective.items():
            c[j] = a
        indptr, indices, data = [0], [], []
        lo, hi = np.empty(self.n_rows), np.empty(self.n_rows)
        for r, row in enumerate(self.rows):
            indices.extend(row.cols)
            data.extend(row.coefs)
            indptr.append(len(indices))
            lo[r] = row.rhs if row.sense in (">=", "=") else -np.inf
            hi[r] = row.rhs if row.sense in ("<=", "=") else np.inf
        A = sp.csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=np.int64),
                           np.array(indptr, dtype=np.int64)), shape=(self.n_rows, n))
        kinds = [v.kind for v in self.variables]
        return MatrixForm(
            c=c, A=A, row_lo=lo, row_hi=hi,
            lb=np.array([v.lb for v in self.variables]),
            ub=np.array([v.ub for v in self.variables]),
            integer=np.array([k != "continuous" for k in kinds], dtype=bool),
            binary=np.array([k == "binary" for k in kinds], dtype=bool),
        )

    def objective_value(self, x) -> float:
        return float(sum(a * x[j] for j, a in self.objective.items()))

    def max_violation(self, x) -> float:
        """Largest bound or row violation of assignment ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        m = self.matrix_form()
        act = m.A @ x
        worst = max(0.0, float(np.max(m.lb - x, initial=0.0)), float(np.max(x - m.ub, initial=0.0)))
        if len(act):
            worst = max(worst, float(np.max(m.row_lo - act)), float(np.max(act - m.row_hi)))
        return worst

    def integrality_violation(self, x) -> float:
        x = np.asarray(x, dtype=float)
        mask = np.array([v.kind != "continuous" for v in self.variables], dtype=bool)
        if not mask.any():
            return 0.0
        return float(np.max(np.abs(x[mask] - np.round(x[mask]))))

    def counts(self) -> dict[str, int]:
        out = {"variables": self.n_vars, "constraints": self.n_rows}
        for k in KINDS:
            out[k] = sum(v.kind == k for v in self.variables)
        return out
