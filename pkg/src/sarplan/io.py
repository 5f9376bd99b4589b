"""Reading and writing scenario, plan, directive, result and experiment files.

All structured files are JSON with a top-level ``"format": 1`` (directive
files are a bare array). Unknown fields are rejected. Per-run metrics are CSV.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema
import numpy as np

from .directives import Directive
from .environment import (AgentSpec, CellGrid, Scenario, SectorLayout, TimeDiscretization,
                          TraversabilityGraph, validate_scenario)
from .errors import FormatError, InputError
from .plan import AgentPlan, MissionPlan

FORMAT = 1

_num = {"type": "number"}
_str = {"type": "string"}
_strs = {"type": "array", "items": _str}


def _obj(props, required=None):
    return {"type": "object", "properties": props, "required": list(props if required is None else required),
            "additionalProperties": False}


SCENARIO_SCHEMA = _obj({
    "format": {"const": FORMAT},
    "grid": _obj({"width": {"type": "integer", "minimum": 1}, "height": {"type": "integer", "minimum": 1},
                  "cell_size_m": {"type": "number", "exclusiveMinimum": 0}}),
    "coverage_map": {"type": "array", "items": _num},
    "agents": {"type": "array", "items": _obj({
        "id": _str, "kind": {"enum": ["uav", "human", "dog"]},
        "coverage_rate": {"type": "array", "items": _num}, "layout": _str, "start_sectors": _strs})},
    "layouts": {"type": "array", "items": _obj({
        "id": _str, "owner": {"type": ["string", "null"]},
        "sectors": {"type": "array", "items": _obj({
            "id": _str, "cells": {"type": "array", "items": {"type": "integer"}}})}},
        required=["id", "sectors"])},
    "graphs": {"type": "array", "items": _obj({
        "agent": _str, "edges": {"type": "array", "items": {
            "type": "array", "items": _str, "minItems": 2, "maxItems": 2}}})},
    "time": _obj({"delta_t_s": {"type": "number", "exclusiveMinimum": 0},
                  "budget_T": {"type": "integer", "minimum": 1}}),
})

PLAN_SCHEMA = _obj({
    "format": {"const": FORMAT},
    "plans": {"type": "array", "items": _obj({
        "agent": _str, "path": _strs,
        "schedule": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}}})},
    "meta": {"type": "object"},
}, required=["format", "plans"])

DIRECTIVE_SCHEMA = {"type": "array", "items": _obj({
    "kind": {"enum": ["coalition", "network", "interference_avoidance", "sparsity"]},
    "groupA": _strs, "groupB": _strs, "limit_m": {"type": "number", "minimum": 0},
    "steps": {"oneOf": [{"const": "all"}, {"type": "array", "items": {"type": "integer"}}]},
    "mode": {"enum": ["hard", "soft"]},
    "weight": {"type": ["number", "null"]},
}, required=["kind", "groupA", "groupB", "limit_m"])}

_solver_props = {"time_limit_s": _num, "target_gap": _num, "integrality_tolerance": _num,
                 "feasibility_tolerance": _num, "rng_seed": {"type": "integer"},
                 "node_limit": {"type": ["integer", "null"]},
                 "lp_engine": {"enum": ["simplex", "highs", "auto"]}}
_sim_props = {"tick_s": _num, "runs": {"type": "integer"}, "rng_seed": {"type": "integer"},
              "interference": _obj({"enabled": {"type": "boolean"}, "range_R_m": _num,
                                    "interferer_kinds": _strs}, required=[])}

EXPERIMENT_SCHEMA = _obj({
    "format": {"const": FORMAT},
    "scenario": _str,
    "variants": {"type": "array", "items": _obj({
        "name": _str, "directives": {"oneOf": [_str, DIRECTIVE_SCHEMA]}})},
    "baseline": {"type": "boolean"},
    "solver": _obj(_solver_props, required=[]),
    "sim": _obj(_sim_props, required=[]),
    "distance_groups": {"type": "array", "items": {"type": "array", "items": _strs,
                                                   "minItems": 2, "maxItems": 2}},
    "hull_group": _strs,
    "out": _str,
}, required=["format", "scenario", "variants"])


# ---------------------------------------------------------------- helpers
def _load_json(source, what: str):
    """Parse JSON from a path or text, turning syntax errors into FormatError."""
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith(("{", "[")):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as e:
            raise FormatError(f"cannot read {what} file {path}: {e.strerror}") from None
    else:
        text = str(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{what}: invalid JSON: {e.msg}", line=e.lineno) from None


def _check(data, schema, what: str):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data),
                    key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise FormatError(f"{what}: field {path}: {e.message}", field=path)


def finite_or_null(v):
    """Copy of a JSON-like value with infinite or NaN floats replaced by None."""
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: finite_or_null(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [finite_or_null(x) for x in v]
    return v


def _dump(data) -> str:
    return json.dumps(finite_or_null(data), indent=1, allow_nan=False) + "\n"


def _write(text: str, destination):
    if destination is None:
        return text
    try:
        Path(destination).write_text(text)
    except OSError as e:
        raise OSError(f"cannot write {destination}: {e.strerror}") from e
    return text


def _finite(xs: Iterable[float]) -> list[float]:
    return [float(x) for x in xs]


# ---------------------------------------------------------------- scenario
def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "format": FORMAT,
        "grid": {"width": sc.grid.width_cells, "height": sc.grid.height_cells,
                 "cell_size_m": sc.grid.cell_size_m},
        "coverage_map": _finite(sc.coverage_map),
        "agents": [{"id": a.id, "kind": a.kind, "coverage_rate": _finite(a.coverage_rate),
                    "layout": a.layout_ref, "start_sectors": list(a.start_sectors)}
                   for a in sc.agents],
        "layouts": [{"id": l.id, "owner": l.owner,
                     "sectors": [{"id": s, "cells": [int(c) for c in cells]}
                                 for s, cells in l.sectors.items()]}
                    for l in sc.layouts.values()],
        "graphs": [{"agent": g.agent, "edges": [list(e) for e in g.edges]} for g in sc.graphs.values()],
        "time": {"delta_t_s": sc.time.delta_t, "budget_T": sc.time.budget_T},
    }


def scenario_from_dict(data) -> Scenario:
    _check(data, SCENARIO_SCHEMA, "scenario")
    try:
        g = data["grid"]
        grid = CellGrid(g["width"], g["height"], float(g["cell_size_m"]))
        layouts = {}
        for l in data["layouts"]:
            if l["id"] in layouts:
                raise FormatError(f"scenario: duplicate layout id {l['id']!r}", field="layouts")
            secs = {}
            for s in l["sectors"]:
                if s["id"] in secs:
                    raise FormatError(f"scenario: layout {l['id']!r} repeats sector {s['id']!r}",
                                      field="layouts")
                secs[s["id"]] = tuple(s["cells"])
            layouts[l["id"]] = SectorLayout(l["id"], secs, l.get("owner"))
        agents = [AgentSpec(a["id"], a["kind"], np.array(a["coverage_rate"], dtype=float),
                            a["layout"], tuple(a["start_sectors"])) for a in data["agents"]]
        graphs = {}
        for gr in data["graphs"]:
            graphs[gr["agent"]] = TraversabilityGraph(gr["agent"], tuple(tuple(e) for e in gr["edges"]))
        t = data["time"]
        dt = TimeDiscretization(float(t["delta_t_s"]), t["budget_T"])
    except InputError as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"scenario: {e}") from None
    cov = np.array(data["coverage_map"], dtype=float)
    report = validate_scenario(grid, layouts, graphs, agents, dt, cov)
    if report:
        raise FormatError("scenario: " + "; ".join(report))
    return Scenario(grid, cov, agents, layouts, graphs, dt)


def read_scenario(source) -> Scenario:
    return scenario_from_dict(_load_json(source, "scenario"))


def write_scenario(sc: Scenario, destination=None) -> str:
    return _write(_dump(scenario_to_dict(sc)), destination)


# ---------------------------------------------------------------- plans
def plan_to_dict(mission: MissionPlan, meta: dict | None = None) -> dict:
    out = {"format": FORMAT,
           "plans": [{"agent": p.agent, "path": list(p.path),
                      "schedule": {s: int(p.schedule[s]) for s in p.path}}
                     for p in mission.plans.values()]}
    if meta:
        out["meta"] = meta
    return out


def plan_from_dict(data) -> MissionPlan:
    _check(data, PLAN_SCHEMA, "plan")
    seen = set()
    plans = []
    for p in data["plans"]:
        if p["agent"] in seen:
            raise FormatError(f"plan: agent {p['agent']!r} listed twice", field="plans")
        seen.add(p["agent"])
        try:
            plans.append(AgentPlan(p["agent"], tuple(p["path"]), dict(p["schedule"])))
        except InputError as e:
            raise FormatError(f"plan: {e}", field="plans") from None
    return MissionPlan.of(plans)


def read_plan(source) -> MissionPlan:
    return plan_from_dict(_load_json(source, "plan"))


def read_plan_meta(source) -> dict:
    data = _load_json(source, "plan")
    _check(data, PLAN_SCHEMA, "plan")
    return data.get("meta", {})


def write_plan(mission: MissionPlan, destination=None, meta: dict | None = None) -> str:
    return _write(_dump(plan_to_dict(mission, meta)), destination)


# ---------------------------------------------------------------- directives
def directives_to_list(directives: Sequence[Directive]) -> list:
    return [{"kind": d.kind, "groupA": list(d.group_a), "groupB": list(d.group_b),
             "limit_m": d.limit_m, "steps": "all" if d.steps is None else list(d.steps),
             "mode": d.mode, "weight": d.weight} for d in directives]


def directives_from_list(data) -> list[Directive]:
    _check(data, DIRECTIVE_SCHEMA, "directives")
    out = []
    for n, d in enumerate(data):
        steps = d.get("steps", "all")
        try:
            out.append(Directive(d["kind"], tuple(d["groupA"]), tuple(d["groupB"]),
                                 float(d["limit_m"]), None if steps == "all" else tuple(steps),
                                 d.get("mode", "soft"), d.get("weight")))
        except InputError as e:
            raise FormatError(f"directives: entry {n}: {e}", field=str(n)) from None
    return out


def read_directives(source) -> list[Directive]:
    return directives_from_list(_load_json(source, "directives"))


def write_directives(directives: Sequence[Directive], destination=None) -> str:
    return _write(_dump(directives_to_list(directives)), destination)


# ---------------------------------------------------------------- results
def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def write_rows_csv(rows: Sequence[dict], destination=None) -> str:
    """CSV with the union of row keys as header, in first-seen order."""
    header = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(k, "")) for k in header])
    return _write(buf.getvalue(), destination)


def read_rows_csv(source) -> list[dict]:
    text = Path(source).read_text() if not str(source).count("\n") else str(source)
    rows = []
    for r in csv.DictReader(_io.StringIO(text)):
        row = {}
        for k, v in r.items():
            try:
                row[k] = int(v)
            except ValueError:
                try:
                    row[k] = float(v)
                except ValueError:
                    row[k] = v
        rows.append(row)
    return rows


def write_summary(summary: dict, destination=None) -> str:
    return _write(_dump({"format": FORMAT, **summary}), destination)


def read_summary(source) -> dict:
    data = _load_json(source, "summary")
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise FormatError("summary: missing or unsupported format field", field="format")
    return {k: v for k, v in data.items() if k != "format"}


def write_trace(positions: np.ndarray, agent_ids: Sequence[str], destination=None) -> str:
    rows = [{"tick": t, **{a: int(c) for a, c in zip(agent_ids, row)}}
            for t, row in enumerate(np.asarray(positions))]
    return write_rows_csv(rows, destination)


# ---------------------------------------------------------------- experiments
def read_experiment(source) -> tuple[dict, Path]:
    """Validated experiment spec and the directory relative paths resolve against."""
    data = _load_json(source, "experiment")
    _check(data, EXPERIMENT_SCHEMA, "experiment")
    names = [v["name"] for v in data["variants"]]
    if len(set(names)) != len(names) or "baseline" in names:
        raise FormatError("experiment: variant names must be unique and not 'baseline'",
                          field="variants")
    base = Path(source).parent if not str(source).lstrip().startswith("{") else Path(".")
    return data, base
