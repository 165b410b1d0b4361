"""Working-computer ratio for epsilon = 1/n^2, written as CSV, with an optional plot."""

import argparse
from pathlib import Path

from tiqca.ensemble import scaling_csv, scaling_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=1000)
    parser.add_argument("--out", type=Path, default=Path("scaling.csv"))
    parser.add_argument("--plot", type=Path, help="write a PNG of ratio vs n")
    args = parser.parse_args()
    rows = scaling_table(range(2, args.n_max + 1))
    args.out.write_text(scaling_csv(rows))
    for r in rows[:9]:
        print(f"n={r.n:4d}  eps={r.epsilon:.5f}  ratio={r.ratio:.4f}")
    print(f"n={rows[-1].n:4d}  ratio={rows[-1].ratio:.6f}")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.semilogx([r.n for r in rows], [r.ratio for r in rows])
        ax.set_xlabel("logical qubits n")
        ax.set_ylabel("working / all partitions")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
