"""Directive studies on the medium fixture: interference avoidance, coalition
and sparsity, each compared against a no-directive baseline."""
from __future__ import annotations

from .directives import Directive
from .experiment import ExperimentSpec, Variant
from .fixtures import medium
from .simulator import InterferenceConfig, SimConfig
from .solver import SolverConfig

# Node-limited so a study gives the same plans on any machine; the time limit
# only guards against runaway solves.
STUDY_SOLVER = SolverConfig(time_limit_s=300.0, node_limit=40)
SIM_RANGE_M = 200.0


def _of(scenario, kind):
    return [a for a in scenario.agent_ids if a.startswith(kind)]


def interference_study(ranges=(100.0, 150.0, 200.0), runs: int = 50, seed: int = 1,
                       solver: SolverConfig = STUDY_SOLVER) -> ExperimentSpec:
    """3 dogs and 3 humans; each dog keeps its distance from the humans and the later dogs."""
    sc = medium(3, 3, 0)
    dogs, humans = _of(sc, "dog"), _of(sc, "human")

    def directives(D):
        return [Directive("interference_avoidance", (d,), tuple(humans + dogs[i + 1:]), D)
                for i, d in enumerate(dogs)]
    sim = SimConfig(runs=runs, rng_seed=seed, interference=InterferenceConfig(True, SIM_RANGE_M))
    return ExperimentSpec(sc, [Variant(f"avoid_{D:g}m", directives(D)) for D in ranges], solver, sim)


def coalition_study(ranges=(200.0, 150.0, 100.0), runs: int = 50, seed: int = 1,
                    solver: SolverConfig = STUDY_SOLVER) -> ExperimentSpec:
    """3 humans and 3 UAVs; human i stays within range of UAV i."""
    sc = medium(0, 3, 3)
    pairs = list(zip(_of(sc, "human"), _of(sc, "uav")))

    def directives(D):
        return [Directive("coalition", (h,), (u,), D) for h, u in pairs]
    sim = SimConfig(runs=runs, rng_seed=seed)
    return ExperimentSpec(sc, [Variant(f"coalition_{D:g}m", directives(D)) for D in ranges], solver, sim,
                          distance_groups=[((h,), (u,)) for h, u in pairs])


def sparsity_study(distances=(100.0, 300.0, 500.0), runs: int = 50, seed: int = 1,
                   solver: SolverConfig = STUDY_SOLVER) -> ExperimentSpec:
    """3 UAVs kept apart pairwise."""
    sc = medium(0, 0, 3)
    uavs = _of(sc, "uav")

    def directives(D):
        return [Directive("sparsity", (uavs[i],), (uavs[j],), D)
                for i in range(len(uavs)) for j in range(i + 1, len(uavs))]
    sim = SimConfig(runs=runs, rng_seed=seed)
    return ExperimentSpec(sc, [Variant(f"sparsity_{D:g}m", directives(D)) for D in distances], solver, sim,
                          hull_group=tuple(uavs))


STUDIES = {"interference": interference_study, "coalition": coalition_study, "sparsity": sparsity_study}
