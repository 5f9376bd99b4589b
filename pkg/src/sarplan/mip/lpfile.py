"""CPLEX-style LP file writer.

Output depends only on the model's insertion order, so two builds of the same
scenario produce identical bytes.
"""
from __future__ import annotations

import io
import math
import os
from typing import TextIO

from .model import MipModel

_PER_LINE = 8
_SENSE = {"<=": "<=", ">=": ">=", "=": "="}


def _num(v: float) -> str:
    if v == math.inf:
        return "+inf"
    if v == -math.inf:
        return "-inf"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _expr(terms, names) -> list[str]:
    parts = []
    for j, a in terms:
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        coef = "" if mag == 1 else _num(mag) + " "
        parts.append(f"{sign} {coef}{names[j]}")
    if not parts:
        parts = [f"0 {names[0]}"] if names else ["0"]
    elif parts[0].startswith("+ "):
        parts[0] = parts[0][2:]
    lines = []
    for start in range(0, len(parts), _PER_LINE):
        lines.append(" ".join(parts[start:start + _PER_LINE]))
    return lines


def write_lp(model: MipModel, out: TextIO) -> None:
    names = [v.name for v in model.variables]
    out.write("\\ mission planning model\n")
    out.write(f"\\ variables {model.n_vars} constraints {model.n_rows}\n")
    out.write("Maximize\n")
    obj = sorted(model.objective.items())
    lines = _expr(obj, names)
    out.write(f" obj: {lines[0]}\n")
    for ln in lines[1:]:
        out.write(f"  {ln}\n")
    out.write("Subject To\n")
    for row in model.rows:
        lines = _expr(zip(row.cols, row.coefs), names)
        out.write(f" {row.name}: {lines[0]}")
        for ln in lines[1:]:
            out.write(f"\n  {ln}")
        out.write(f" {_SENSE[row.sense]} {_num(row.rhs)}\n")

    out.write("Bounds\n")
    generals, binaries = [], []
    for v in model.variables:
        if v.kind == "binary" and v.lb == 0 and v.ub == 1:
            binaries.append(v.name)
            continue
        if v.kind != "continuous":
            generals.append(v.name)
        if v.lb == v.ub:
            out.write(f" {v.name} = {_num(v.lb)}\n")
        elif v.lb == 0 and v.ub == math.inf:
            continue
        elif v.lb == -math.inf and v.ub == math.inf:
            out.write(f" {v.name} free\n")
        else:
            out.write(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}\n")
    if generals:
        out.write("Generals\n")
        for start in range(0, len(generals), _PER_LINE):
            out.write(" " + " ".join(generals[start:start + _PER_LINE]) + "\n")
    if binaries:
        out.write("Binaries\n")
        for start in range(0, len(binaries), _PER_LINE):
            out.write(" " + " ".join(binaries[start:start + _PER_LINE]) + "\n")
    out.write("End\n")


def export_lp(model: MipModel, destination: str | os.PathLike | None = None) -> str:
    """Write the model in LP format; returns the text. ``destination`` may be a path."""
    buf = io.StringIO()
    write_lp(model, buf)
    text = buf.getvalue()
    if destination is not None:
        with open(destination, "w", newline="\n") as fh:
            fh.write(text)
    return text
