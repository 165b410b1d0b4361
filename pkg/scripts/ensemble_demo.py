"""Monte Carlo ensemble sweep: empirical vs predicted partition and working counts,
plus the measured level-4 signal, for a small single-qubit circuit."""

import argparse
import json

import numpy as np

from tiqca.compiler import Gate1, LogicalCircuit, Measure
from tiqca.ensemble import EnsembleParams, run_ensemble


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=20000)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--theta", type=float, default=0.6, help="rotation angle; Pr[1] = sin^2(theta)")
    parser.add_argument("--json", action="store_true", help="dump full reports")
    args = parser.parse_args()
    c, s = np.cos(args.theta), np.sin(args.theta)
    circuit = LogicalCircuit(1, [Gate1(1, np.array([[c, -s], [s, c]])), Measure(1)])
    print("eps     parts(emp/pred)      working(emp/pred)    M4/working-computers")
    for eps in (0.005, 0.01, 0.02, 0.05, 0.1):
        rep = run_ensemble(EnsembleParams(args.m, eps, 1, args.trials, args.seed), circuit)
        per = rep.m4_working_mean / rep.working_computers_mean if rep.working_computers_mean else float("nan")
        print(f"{eps:<7} {rep.partitions_mean:8.1f}/{rep.predicted_partitions:<8.1f}  "
              f"{rep.working_mean:8.1f}/{rep.predicted_working:<8.1f}  {per:.4f} (Pr[1]={s * s:.4f})")
        if args.json:
            print(rep.to_json())


if __name__ == "__main__":
    main()
