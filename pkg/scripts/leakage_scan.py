"""Five-level mode: fraction of random wall configurations where a routed pointer
breaks through a wall, as a function of wall density."""

import argparse

from tiqca.compiler import HADAMARD, Gate1, LogicalCircuit, compile_circuit
from tiqca.ensemble import leakage_fraction
from tiqca.lattice import FIVE_LEVEL
from tiqca.macros import macro_program


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=12)
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--steps", type=int, default=3, help="STEP_RIGHT repetitions after the gate")
    args = parser.parse_args()
    prog = (macro_program("POINTER_CREATE", FIVE_LEVEL)
            + compile_circuit(LogicalCircuit(1, [Gate1(1, HADAMARD)]), FIVE_LEVEL).program
            + macro_program("STEP_RIGHT", FIVE_LEVEL).repeat(args.steps))
    for eps in (0.5, 0.3, 0.2, 0.1, 0.05, 0.02):
        r = leakage_fraction(args.m, eps, prog, args.trials, master_seed=4)
        lo, hi = r["escape_interval"]
        print(f"eps={eps:<5} escape fraction {r['escape_fraction']:.3f}  [{lo:.3f}, {hi:.3f}]")


if __name__ == "__main__":
    main()
