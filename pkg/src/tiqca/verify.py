"""Self-check suites behind ``tiqca verify``.

Each suite returns a list of :class:`Check`; a suite passes when every check does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .compiler import HADAMARD, RAW_CNOT, Gate1, LogicalCircuit, Measure, compile_circuit
from .ensemble import formula_trials, pure_mixed_equivalence, scaling_table
from .lattice import (
    FIVE_LEVEL,
    SIX_LEVEL,
    LatticeConfig,
    SchemeMode,
    SparseState,
    from_dense,
    make_basis_state,
    max_abs_difference,
    to_dense,
)
from .macros import MacroName, macro_program
from .oracle import apply_pulse_dense
from .pulses import (
    SW,
    ControlledExchange,
    Pulse,
    QubitVector,
    apply_program,
    apply_pulse,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def replay(s: str, macro: str, times: int = 1, mode: SchemeMode = SIX_LEVEL, boundary: str = "open") -> SparseState:
    cfg = LatticeConfig(len(s), boundary, mode)
    prog = macro_program(macro, mode).repeat(times)
    return apply_program(make_basis_state(cfg, s), prog)


def _single_string(state: SparseState) -> str | None:
    if len(state) != 1:
        return None
    (s, a), = state.amplitudes.items()
    return s if abs(abs(a) - 1) < 1e-12 else None


# (input, macro, repetitions, expected, mode)
REFERENCE_REPLAYS = [
    ("0000005000000000000050005000000005", "POINTER_CREATE", 1, "0000325230000000003250005230000325", SIX_LEVEL),
    ("2332", "STEP_RIGHT", 1, "3223", SIX_LEVEL),
    ("23032", "STEP_RIGHT", 1, "04040", SIX_LEVEL),
    ("23032", "STEP_RIGHT", 2, "32023", SIX_LEVEL),
    ("23132", "STEP_RIGHT", 1, "14141", SIX_LEVEL),
    ("23132", "STEP_RIGHT", 2, "32123", SIX_LEVEL),
    ("235", "STEP_RIGHT", 1, "325", SIX_LEVEL),
    ("00100", "POINTER_CREATE", 1, "32123", FIVE_LEVEL),
]


def protocols_suite() -> list[Check]:
    checks = []
    for src, macro, times, want, mode in REFERENCE_REPLAYS:
        got = _single_string(replay(src, macro, times, mode))
        label = f"{macro}^{times} {src} -> {want} ({mode.levels}-level)"
        checks.append(Check(label, got == want, f"got {got}"))
    cfg = LatticeConfig(8, "open")
    start = make_basis_state(cfg, "52301005")
    back = apply_program(start, macro_program("STEP_RIGHT") + macro_program("STEP_LEFT"))
    dev = max_abs_difference(start, back)
    checks.append(Check("STEP_LEFT after STEP_RIGHT is identity", dev <= 1e-12, f"max dev {dev:.2e}"))
    worst = 0.0
    for src in range(2):
        for tgt in range(2):
            s = f"5{src}23{tgt}005"
            out = apply_program(make_basis_state(cfg, s), macro_program("CNOT_SRC_LEFT"))
            col = RAW_CNOT[:, 2 * src + tgt]
            for row in range(4):
                a, b = divmod(row, 2)
                worst = max(worst, abs(out.amplitude(f"5{a}23{b}005") - col[row]))
    checks.append(Check("CNOT macro matches recorded raw truth table", worst <= 1e-12, f"max dev {worst:.2e}"))
    return checks


def random_pulse(rng: np.random.Generator, d: int = 6) -> Pulse:
    kind = rng.integers(4)
    if kind == 0:
        x, y = rng.choice(d, size=2, replace=False)
        return SW(int(x), int(y))
    if kind == 1:
        x, a, b = rng.choice(d, size=3, replace=False)
        return ControlledExchange(int(x), int(a), int(b), float(rng.choice([1, -1]) * math.pi / 2))
    if kind == 2:
        x, a, b = rng.choice(d, size=3, replace=False)
        return ControlledExchange(int(x), int(a), int(b), float(rng.uniform(-math.pi, math.pi)))

    def qv():
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z /= np.linalg.norm(z)
        return QubitVector(z[0], z[1])

    u = qv()
    v = u if rng.random() < 0.2 else qv()
    control = int(rng.integers(2, d))
    return ControlledExchange(control, u, v, float(rng.uniform(-math.pi, math.pi)))


def random_sparse_state(rng: np.random.Generator, cfg: LatticeConfig, terms: int = 3) -> SparseState:
    amps: dict[str, complex] = {}
    for _ in range(terms):
        s = "".join(str(int(x)) for x in rng.integers(cfg.d, size=cfg.m))
        amps[s] = amps.get(s, 0j) + complex(rng.normal(), rng.normal())
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return SparseState(cfg, {s: a / norm for s, a in amps.items()})


def oracle_cases(cases: int = 200, seed: int = 2024, max_m: int = 6) -> float:
    """Largest per-amplitude sparse-vs-dense deviation over random cases."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        cfg = LatticeConfig(int(rng.integers(2, max_m + 1)), str(rng.choice(["periodic", "open"])), SIX_LEVEL)
        state = random_sparse_state(rng, cfg, int(rng.integers(1, 5)))
        pulse = random_pulse(rng, cfg.d)
        sparse = apply_pulse(state, pulse)
        dense = from_dense(apply_pulse_dense(to_dense(state), pulse))
        worst = max(worst, max_abs_difference(sparse, dense))
    return worst


def oracle_suite(cases: int = 200) -> list[Check]:
    worst = oracle_cases(cases)
    return [Check(f"sparse rule vs dense exponential, {cases} random cases", worst <= 1e-10, f"max dev {worst:.2e}")]


def pure_mixed_suite(m: int = 10) -> list[Check]:
    checks = []
    create6 = macro_program(MacroName.POINTER_CREATE, SIX_LEVEL)
    meas6 = macro_program(MacroName.MEASURE_PREP, SIX_LEVEL)
    circuit = LogicalCircuit(1, [Gate1(1, HADAMARD), Measure(1)])
    create5 = macro_program(MacroName.POINTER_CREATE, FIVE_LEVEL)
    prog5 = create5 + compile_circuit(circuit, FIVE_LEVEL).program
    for eps in (0.1, 0.2):
        dev = pure_mixed_equivalence(m, eps, create6 + meas6)
        checks.append(Check(f"6-level creation+measure m={m} eps={eps}", dev <= 1e-10, f"max dev {dev:.2e}"))
        dev = pure_mixed_equivalence(m, eps, prog5)
        checks.append(Check(f"5-level creation+1-qubit circuit m={m} eps={eps}", dev <= 1e-10, f"max dev {dev:.2e}"))
    return checks


def scaling_suite(trials: int = 50, m: int = 100_000, seed: int = 7) -> list[Check]:
    checks = []
    rows = {r.n: r for r in scaling_table(range(2, 1001))}
    checks.append(Check("ratio n=2 ~ 0.1001", abs(rows[2].ratio - 0.75**8) < 1e-15 and round(rows[2].ratio, 4) == 0.1001,
                        f"{rows[2].ratio:.6f}"))
    checks.append(Check("ratio n=10 ~ 0.7857", round(rows[10].ratio, 4) == 0.7857, f"{rows[10].ratio:.6f}"))
    ratios = [rows[n].ratio for n in range(2, 1001)]
    mono = all(b > a for a, b in zip(ratios, ratios[1:])) and ratios[-1] < 1
    checks.append(Check("ratio strictly increasing to 1 over n=2..1000", mono, f"n=1000 -> {ratios[-1]:.6f}"))
    for eps in (0.01, 0.02):
        for n in (2, 4):
            r = formula_trials(m, eps, n, trials, seed)
            zp = abs(r["partitions_mean"] - r["predicted_partitions"]) / r["partitions_stderr"]
            zw = abs(r["working_mean"] - r["predicted_working"]) / r["working_stderr"]
            checks.append(Check(f"partitions m={m} eps={eps} n={n}", zp <= 3,
                                f"{r['partitions_mean']:.1f} vs {r['predicted_partitions']:.1f} ({zp:.2f} se)"))
            checks.append(Check(f"working m={m} eps={eps} n={n}", zw <= 3,
                                f"{r['working_mean']:.1f} vs {r['predicted_working']:.1f} ({zw:.2f} se)"))
    return checks


SUITES = {
    "protocols": protocols_suite,
    "oracle": oracle_suite,
    "pure-mixed": pure_mixed_suite,
    "scaling": scaling_suite,
}


__all__ = ["Check", "SUITES", "protocols_suite", "oracle_suite", "pure_mixed_suite", "scaling_suite",
           "oracle_cases", "random_pulse", "random_sparse_state", "replay", "REFERENCE_REPLAYS"]
