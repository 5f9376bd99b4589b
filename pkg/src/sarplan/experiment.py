"""Plan-and-simulate studies comparing directive variants against a baseline."""
from __future__ import annotations

import logging
import traceback
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .directives import Directive
from .environment import Scenario
from .metrics import aggregate, report_run
from .plan import soft_penalty, violations
from .planner import plan_mission
from .simulator import InterferenceConfig, SimConfig, run
from .solver import SolverConfig

log = logging.getLogger(__name__)

TABLE_COLUMNS = ("variant", "coverage_pct", "interference_s", "mean_distance_m", "hull_area_m2")


@dataclass
class Variant:
    name: str
    directives: list[Directive]


@dataclass
class ExperimentSpec:
    scenario: Scenario
    variants: list[Variant]
    solver: SolverConfig = field(default_factory=SolverConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    distance_groups: list[tuple[tuple[str, ...], tuple[str, ...]]] = field(default_factory=list)
    hull_group: tuple[str, ...] | None = None
    baseline: bool = True
    out: Path | None = None

    def __post_init__(self):
        names = [v.name for v in self.variants]
        if len(set(names)) != len(names):
            raise ValueError("variant names must be unique")

    def all_variants(self) -> list[Variant]:
        base = [Variant("baseline", [])] if self.baseline else []
        return base + list(self.variants)


def spec_from_file(path, seed: int | None = None) -> ExperimentSpec:
    data, base = io.read_experiment(path)
    scenario = io.read_scenario(base / data["scenario"])
    variants = []
    for v in data["variants"]:
        d = v["directives"]
        dirs = io.read_directives(base / d) if isinstance(d, str) else io.directives_from_list(d)
        variants.append(Variant(v["name"], dirs))
    solver = SolverConfig(**data.get("solver", {}))
    sim_data = dict(data.get("sim", {}))
    inter = InterferenceConfig(**sim_data.pop("interference", {}))
    sim = SimConfig(interference=inter, **sim_data)
    if seed is not None:
        solver = replace(solver, rng_seed=seed)
        sim = replace(sim, rng_seed=seed)
    groups = [(tuple(a), tuple(b)) for a, b in data.get("distance_groups", [])]
    hull = tuple(data["hull_group"]) if data.get("hull_group") else None
    out = base / data["out"] if data.get("out") else None
    return ExperimentSpec(scenario, variants, solver, sim, groups, hull,
                          data.get("baseline", True), out)


def run_variant(spec: ExperimentSpec, variant: Variant, workers: int = 1) -> dict:
    sc = spec.scenario
    result = plan_mission(sc, variant.directives, spec.solver)
    if result.mission is None:
        raise RuntimeError(f"no plan: solver status {result.outcome.status}")
    mission = result.mission
    sims = run(mission, sc, spec.sim, workers=workers)
    rows = []
    for s in sims:
        rep = report_run(s, sc, spec.distance_groups, spec.hull_group)
        rows.append({"run": s.run, **rep.row(),
                     **{f"interference_s[{d}]": v for d, v in rep.interference_s.items()}})
    agg = aggregate([{k: v for k, v in r.items() if k != "run"} for r in rows])
    dist_cols = [k for k in agg if k.startswith("distance_m[")]
    row = {
        "variant": variant.name,
        "coverage_pct": agg["coverage_pct"]["mean"],
        "interference_s": agg["interference_s"]["mean"],
        "mean_distance_m": (float(np.mean([agg[k]["mean"] for k in dist_cols])) if dist_cols else None),
        "hull_area_m2": agg["hull_area_m2"]["mean"] if "hull_area_m2" in agg else None,
        "status": result.outcome.status,
        "objective": result.outcome.objective,
        "gap": result.outcome.gap,
        "plan_coverage": result.decoded.coverage,
        "plan_penalty": soft_penalty(mission, sc, variant.directives),
        "plan_violation_m": float(sum(v.sum() for v in violations(mission, sc, variant.directives))),
    }
    return {"row": row, "runs": rows, "aggregate": agg, "plan": mission,
            "solver": result.outcome.summary()}


def run_experiment(spec: ExperimentSpec, out: Path | None = None, workers: int = 1) -> dict:
    """Every variant in order; a failing variant is listed, not fatal."""
    out = out if out is not None else spec.out
    rows, failures, details = [], [], {}
    for v in spec.all_variants():
        try:
            res = run_variant(spec, v, workers)
        except Exception as e:  # a broken variant must not sink the study
            log.error("variant %s failed: %s", v.name, e)
            failures.append({"variant": v.name, "error": f"{type(e).__name__}: {e}"})
            log.debug("%s", traceback.format_exc())
            continue
        rows.append(res["row"])
        details[v.name] = res
        if out is not None:
            d = Path(out) / v.name
            d.mkdir(parents=True, exist_ok=True)
            io.write_plan(res["plan"], d / "plan.json", meta=_clean(res["solver"]))
            io.write_rows_csv(res["runs"], d / "runs.csv")
            io.write_summary({"runs": len(res["runs"]), "metrics": res["aggregate"]}, d / "summary.json")
            io.write_directives(v.directives, d / "directives.json")
    report = {"rows": rows, "failures": failures}
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        io.write_rows_csv([{k: r[k] for k in TABLE_COLUMNS} for r in rows], Path(out) / "report.csv")
        io.write_summary(report, Path(out) / "report.json")
    report["details"] = details
    return report


def _clean(summary: dict) -> dict:
    # wall time differs between identical runs; keep plan files reproducible
    return {k: v for k, v in summary.items() if k != "wall_time_s"}


def format_table(rows: Sequence[dict]) -> str:
    head = f"{'variant':<16}{'coverage_pct':>14}{'interference_s':>16}{'mean_distance_m':>17}{'hull_area_m2':>14}"
    lines = [head]
    for r in rows:
        def f(v, w):
            return f"{'-':>{w}}" if v is None else f"{v:>{w}.2f}"
        lines.append(f"{r['variant']:<16}{f(r['coverage_pct'], 14)}{f(r['interference_s'], 16)}"
                     f"{f(r['mean_distance_m'], 17)}{f(r['hull_area_m2'], 14)}")
    return "\n".join(lines)
