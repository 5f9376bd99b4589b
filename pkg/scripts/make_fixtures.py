"""Write the fixture scenarios, study directive sets and an example experiment spec as JSON.

usage: python3 scripts/make_fixtures.py [OUT_DIR]   (default: scenarios/)
"""
import json
import sys
from pathlib import Path

from sarplan import io
from sarplan.fixtures import medium, small, tiny
from sarplan.studies import STUDIES


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "scenarios")
    out.mkdir(parents=True, exist_ok=True)
    io.write_scenario(tiny(0, n_agents=2), out / "tiny.json")
    io.write_scenario(small(0), out / "small.json")
    for name, make in STUDIES.items():
        spec = make()
        io.write_scenario(spec.scenario, out / f"medium_{name}.json")
        variants = []
        for v in spec.variants:
            io.write_directives(v.directives, out / f"{v.name}.json")
            variants.append({"name": v.name, "directives": f"{v.name}.json"})
        sim = {"tick_s": spec.sim.tick_s, "runs": spec.sim.runs, "rng_seed": spec.sim.rng_seed,
               "interference": {"enabled": spec.sim.interference.enabled,
                                "range_R_m": spec.sim.interference.range_R_m}}
        exp = {"format": io.FORMAT, "scenario": f"medium_{name}.json", "variants": variants,
               "solver": {"time_limit_s": spec.solver.time_limit_s, "node_limit": spec.solver.node_limit},
               "sim": sim, "out": f"results_{name}"}
        if spec.distance_groups:
            exp["distance_groups"] = [[list(a), list(b)] for a, b in spec.distance_groups]
        if spec.hull_group:
            exp["hull_group"] = list(spec.hull_group)
        (out / f"experiment_{name}.json").write_text(json.dumps(exp, indent=1) + "\n")
    print(f"wrote fixtures to {out}/")


if __name__ == "__main__":
    main()
