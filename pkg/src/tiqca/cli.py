"""Command-line entry point: ``tiqca {run,compile,ensemble,verify,scaling}``.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 size guard hit.
Output files are written only after all computation has succeeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .compiler import LogicalCircuit, compile_circuit, parse_circuit
from .ensemble import EnsembleParams, run_ensemble, scaling_csv, scaling_table
from .errors import OracleTooLarge, ParseError, QCAError, SupportOverflow
from .lattice import (
    LatticeConfig,
    SchemeMode,
    all_level_counts,
    make_basis_state,
    make_product_state,
    norm_drift,
)
from .macros import macro_program, pointer_census
from .pulses import apply_program, format_program, parse_program
from .verify import SUITES


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _mode(args) -> SchemeMode:
    return SchemeMode.from_levels(args.mode)


def _parse_product(text: str, mode: SchemeMode) -> dict[int, complex]:
    """``"0:0.9486832980505138,5:0.31622776601683794"`` -> {level: amplitude}."""
    amps = {}
    for col, part in enumerate(text.split(","), start=1):
        try:
            lvl, amp = part.split(":")
            amps[int(lvl)] = complex(amp.replace("i", "j"))
        except ValueError:
            raise ParseError(f"bad product term {part!r}; expected level:amplitude", 1, col) from None
    return amps


def cmd_run(args) -> int:
    mode = _mode(args)
    if (args.state is None) == (args.product is None):
        raise UsageError("give exactly one of --state or --product")
    if (args.program is None) == (args.macro is None):
        raise UsageError("give exactly one of --program or --macro")
    if args.program is not None:
        program = parse_program(Path(args.program).read_text(), mode, name=args.program)
    else:
        program = macro_program(args.macro, mode)
    if args.state is not None:
        cfg = LatticeConfig(len(args.state), args.boundary, mode)
        state = make_basis_state(cfg, args.state)
        source = {"state": args.state}
    else:
        if args.m is None:
            raise UsageError("--product needs --m")
        cfg = LatticeConfig(args.m, args.boundary, mode)
        state = make_product_state(cfg, _parse_product(args.product, mode))
        source = {"product": args.product, "m": args.m}
    final = apply_program(state, program)
    top = final.top(args.top)
    totals = sorted({pointer_census(s, mode.wall_level, cfg.boundary == "periodic").total for s in final.amplitudes})
    lead = pointer_census(top[0][0], mode.wall_level, cfg.boundary == "periodic") if top else None
    report = {
        "mode": mode.levels,
        "boundary": cfg.boundary,
        "m": cfg.m,
        "input": source,
        "program_length": len(program),
        "support_size": len(final),
        "support": [{"state": s, "re": a.real, "im": a.imag, "prob": abs(a) ** 2} for s, a in top],
        "level_counts": {str(x): v for x, v in enumerate(all_level_counts(final))},
        "norm_drift": norm_drift(final),
        "census": {
            "pointer_totals": totals,
            "top_right_pointers": lead.right_pointers if lead else 0,
            "top_left_pointers": lead.left_pointers if lead else 0,
            "top_inactive": lead.inactive if lead else 0,
            "top_walls": list(lead.walls) if lead else [],
        },
    }
    _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_compile(args) -> int:
    mode = _mode(args)
    circuit = parse_circuit(Path(args.circuit).read_text())
    compiled = compile_circuit(circuit, mode, keep_phase=args.keep_phase)
    header = [f"L_min = {compiled.l_min}", f"qubits = {circuit.n}", f"mode = {mode.levels}"]
    if compiled.measured is not None:
        header.append(f"measured = {compiled.measured}")
    _write(args.out, format_program(compiled.program, header))
    return 0


def cmd_ensemble(args) -> int:
    mode = _mode(args)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if not 0 < args.eps < 1:
        raise UsageError("--eps must lie strictly between 0 and 1")
    circuit = parse_circuit(Path(args.circuit).read_text()) if args.circuit else LogicalCircuit(args.n, [])
    if circuit.n != args.n:
        raise UsageError(f"circuit declares {circuit.n} qubits but --n is {args.n}")
    params = EnsembleParams(args.m, args.eps, args.n, args.trials, args.seed, args.cap)
    report = run_ensemble(params, circuit, mode)
    _write(args.out, report.to_json())
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    lines = []
    for name in names:
        for check in SUITES[name]():
            lines.append(f"[{name}] {check.line()}")
            ok &= check.passed
    lines.append("ALL PASS" if ok else "SOME CHECKS FAILED")
    print("\n".join(lines))
    return 0 if ok else 1


def cmd_scaling(args) -> int:
    n_values = args.n or list(range(2, 11))
    _write(args.out, scaling_csv(scaling_table(n_values)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiqca", description=__doc__.splitlines()[0])
    parser.add_argument("--mode", type=int, choices=(5, 6), default=6)
    parser.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="apply a pulse program to a state")
    p.add_argument("--state", help="basis string, site 0 leftmost")
    p.add_argument("--product", help="single-site amplitudes 'level:amp,...' for a product state")
    p.add_argument("--m", type=int, help="lattice size for --product")
    p.add_argument("--program", help="pulse program file")
    p.add_argument("--macro", help="macro name, e.g. STEP_RIGHT")
    p.add_argument("--top", type=int, default=20, help="support entries listed in the report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compile", help="compile a circuit file into a pulse program")
    p.add_argument("circuit")
    p.add_argument("--keep-phase", action="store_true", help="also emit global-phase pulses per gate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("ensemble", help="Monte Carlo ensemble run")
    p.add_argument("circuit", nargs="?")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=16, help="largest partition simulated pulse by pulse")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("suite", choices=(*SUITES, "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", help="working-ratio table for epsilon = 1/n^2 (CSV)")
    p.add_argument("--n", type=int, nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SupportOverflow, OracleTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        source = getattr(args, "program", None) or getattr(args, "circuit", None) or "<input>"
        print(f"error: {source}: {exc}", file=sys.stderr)
        return 2
    except (QCAError, UsageError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
