"""Plan and simulate one directive study on the medium fixture and print its table.

usage: python3 scripts/run_study.py {interference,coalition,sparsity} [--runs N] [--out DIR]
"""
import argparse
import json
import time
from pathlib import Path

from sarplan.experiment import format_table, run_experiment
from sarplan.studies import STUDIES


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("study", choices=sorted(STUDIES))
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=Path)
    args = p.parse_args()
    spec = STUDIES[args.study](runs=args.runs, seed=args.seed)
    t0 = time.perf_counter()
    report = run_experiment(spec, args.out, workers=args.threads)
    print(format_table(report["rows"]))
    for r in report["rows"]:
        print(json.dumps({k: r[k] for k in ("variant", "status", "objective", "gap", "plan_violation_m")}))
    for f in report["failures"]:
        print(f"FAILED {f['variant']}: {f['error']}")
    print(f"wall time {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
