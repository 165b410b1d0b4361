"""Replay the reference pointer strings and print each trace with its global phase."""

import argparse

from tiqca.lattice import FIVE_LEVEL, SIX_LEVEL
from tiqca.verify import REFERENCE_REPLAYS, replay


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--boundary", choices=("open", "periodic"), default="open")
    args = parser.parse_args()
    for src, macro, times, want, mode in REFERENCE_REPLAYS:
        out = replay(src, macro, times, mode, args.boundary)
        shown = ", ".join(f"{s} ({a.real:+.3f}{a.imag:+.3f}i)" for s, a in out.top(4))
        flag = "ok " if len(out) == 1 and want in out.amplitudes else "BAD"
        print(f"{flag} [{mode.levels}] {macro}^{times}: {src} -> {shown}")


if __name__ == "__main__":
    main()
