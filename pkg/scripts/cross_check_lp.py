"""Export tiny models as LP files, re-solve them with HiGHS, compare with branch-and-bound.

usage: python3 scripts/cross_check_lp.py [N_SEEDS]   (needs the `crosscheck` extra: highspy)
"""
import sys
import tempfile
from pathlib import Path

import highspy

from sarplan.directives import Directive
from sarplan.fixtures import tiny
from sarplan.mip import build_model, export_lp
from sarplan.solver import SolverConfig, branch_and_bound


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    worst = 0.0
    with tempfile.TemporaryDirectory() as d:
        for seed in range(n):
            sc = tiny(seed, n_agents=2)
            dirs = [Directive("coalition", ("a0",), ("a1",), 150.0)] if seed % 2 else []
            model = build_model(sc, dirs)
            ours = branch_and_bound(model, SolverConfig(time_limit_s=600, lp_engine="simplex"))
            path = Path(d) / f"tiny{seed}.lp"
            export_lp(model, path)
            h = highspy.Highs()
            h.setOptionValue("output_flag", False)
            h.readModel(str(path))
            h.run()
            theirs = h.getInfo().objective_function_value
            worst = max(worst, abs(theirs - ours.objective))
            print(f"seed {seed}: ours {ours.objective:.9f} highs {theirs:.9f} "
                  f"({model.n_vars} vars, {model.n_rows} rows)")
    print(f"max |diff| = {worst:.2e}: {'PASS' if worst <= 1e-6 else 'FAIL'}")


if __name__ == "__main__":
    main()
