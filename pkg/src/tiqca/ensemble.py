"""Monte Carlo over wall configurations, partition statistics and the
pure-state / mixed-state equivalence check.

Per-trial generators come from ``numpy.random.SeedSequence(master_seed,
spawn_key=(trial_index,))`` so any trial can be reproduced on its own.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .compiler import CompiledProgram, LogicalCircuit, compile_circuit, reference_simulate
from .errors import InvalidConfig, InvalidScaling, SupportOverflow
from .lattice import (
    FIVE_LEVEL,
    SIX_LEVEL,
    LatticeConfig,
    SchemeMode,
    SparseState,
    all_level_counts,
    expectation_level_count,
    level_count_matrix_element,
    make_basis_state,
    make_product_state,
)
from .macros import MacroName, macro_program
from .pulses import PulseProgram, apply_program

PURE_MIXED_MAX_M = 12


def working_min_length(n: int) -> int:
    """Smallest partition length that hosts two non-colliding n-qubit computers."""
    return 2 * n + 4


@dataclass(frozen=True)
class EnsembleParams:
    m: int
    epsilon: float
    n: int
    trials: int
    master_seed: int = 0
    pulse_cap: int = 16

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise InvalidConfig(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.trials < 1:
            raise InvalidConfig(f"need at least one trial, got {self.trials}")
        if self.n < 1:
            raise InvalidConfig(f"need n >= 1 logical qubits, got {self.n}")
        if self.m < 2 * self.n + 6:
            raise InvalidConfig(f"m={self.m} below 2n+6={2 * self.n + 6}")


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def sample_wall_mask(m: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    return rng.random(m) < epsilon


def sample_wall_config(m: int, epsilon: float, rng: np.random.Generator, mode: SchemeMode = SIX_LEVEL) -> str:
    """Independent Bernoulli(epsilon) walls on an otherwise all-zero lattice."""
    mask = sample_wall_mask(m, epsilon, rng)
    w = str(mode.wall_level)
    return "".join(w if x else "0" for x in mask)


def partition_lengths(mask: np.ndarray) -> np.ndarray:
    """Cyclic gap lengths between consecutive walls, zero-length gaps included."""
    walls = np.flatnonzero(mask)
    if walls.size == 0:
        return np.zeros(0, dtype=int)
    m = mask.size
    return np.diff(np.append(walls, walls[0] + m)) - 1


def expected_partitions(m: int, epsilon: float) -> float:
    return m * epsilon


def tail_probability(epsilon: float, k: int) -> float:
    """Probability that a partition holds k or more sites."""
    return (1.0 - epsilon) ** k


def expected_working(m: int, epsilon: float, n: int) -> float:
    return m * epsilon * tail_probability(epsilon, working_min_length(n))


@dataclass(frozen=True)
class ScalingRow:
    n: int
    epsilon: float
    ratio: float
    working_density: float


def scaling_table(n_values) -> list[ScalingRow]:
    rows = []
    for n in n_values:
        if n < 2:
            raise InvalidScaling(f"epsilon = 1/n^2 needs n >= 2, got {n}")
        eps = 1.0 / n**2
        ratio = tail_probability(eps, working_min_length(n))
        rows.append(ScalingRow(n, eps, ratio, eps * ratio))
    return rows


def scaling_csv(rows: list[ScalingRow]) -> str:
    lines = ["n,epsilon,ratio,working_density"]
    lines += [f"{r.n},{r.epsilon!r},{r.ratio!r},{r.working_density!r}" for r in rows]
    return "\n".join(lines) + "\n"


def wilson_interval(successes: int, total: int, z: float = 3.0) -> tuple[float, float]:
    if total == 0:
        return 0.0, 1.0
    p = successes / total
    denom = 1 + z**2 / total
    centre = (p + z**2 / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z**2 / (4 * total**2)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _mean_stderr(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return float(arr.mean()) if arr.size else 0.0, 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


@dataclass(frozen=True)
class PartitionCounts:
    partitions: int
    working: int


def count_partitions(mask: np.ndarray, n: int) -> PartitionCounts:
    lengths = partition_lengths(mask)
    if lengths.size == 0:
        return PartitionCounts(1, 0)
    return PartitionCounts(int(lengths.size), int(np.count_nonzero(lengths >= working_min_length(n))))


def formula_trials(m: int, epsilon: float, n: int, trials: int, master_seed: int) -> dict:
    """Partition/working counts over many trials, without any pulse simulation."""
    parts, works = [], []
    for t in range(trials):
        c = count_partitions(sample_wall_mask(m, epsilon, trial_rng(master_seed, t)), n)
        parts.append(c.partitions)
        works.append(c.working)
    pm, ps = _mean_stderr(parts)
    wm, ws = _mean_stderr(works)
    return {"partitions_mean": pm, "partitions_stderr": ps, "working_mean": wm, "working_stderr": ws,
            "predicted_partitions": expected_partitions(m, epsilon),
            "predicted_working": expected_working(m, epsilon, n)}


# ensemble runs ---------------------------------------------------------------------

@dataclass
class EnsembleReport:
    m: int
    epsilon: float
    n: int
    trials: int
    seed: int
    partitions_mean: float
    partitions_stderr: float
    working_mean: float
    working_stderr: float
    working_computers_mean: float
    predicted_partitions: float
    predicted_working: float
    predicted_working_computers: float
    working_fraction: float
    working_fraction_interval: tuple[float, float]
    m3_mean: float
    m3_stderr: float
    m4_mean: float
    m4_stderr: float
    m4_working_mean: float
    m4_nonworking_mean: float
    skipped_count: int
    fastpath_checked: int
    fastpath_max_deviation: float
    mode: int = 6
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        data["working_fraction_interval"] = list(self.working_fraction_interval)
        return json.dumps(data, sort_keys=True, indent=2) + "\n"


@lru_cache(maxsize=4096)
def _partition_signal(program: PulseProgram, length: int) -> tuple[float, float]:
    """(<M_3>, <M_4>) of one ``wall 0^length wall`` partition after ``program``."""
    mode = program.mode
    w = str(mode.wall_level)
    state = make_basis_state(LatticeConfig(length + 2, "open", mode), w + "0" * length + w)
    state = apply_program(state, program)
    return expectation_level_count(state, 3), expectation_level_count(state, 4)


def full_program(compiled: CompiledProgram) -> PulseProgram:
    mode = compiled.program.mode
    return macro_program(MacroName.POINTER_CREATE, mode) + compiled.program


def run_ensemble(params: EnsembleParams, circuit: LogicalCircuit, mode: SchemeMode = SIX_LEVEL,
                 crosscheck_lengths: int = 3) -> EnsembleReport:
    """Six-level ensemble run with independent per-partition simulation."""
    if mode != SIX_LEVEL:
        raise InvalidConfig("per-partition ensembles need walls that pulses cannot move (6-level mode)")
    n = params.n
    if circuit.n != n:
        raise InvalidConfig(f"circuit has {circuit.n} qubits, params say n={n}")
    compiled = compile_circuit(circuit, mode)
    program = full_program(compiled)
    ref = reference_simulate(circuit)
    p1 = ref.prob_one or 0.0
    fast = (2.0, 2.0 * p1) if compiled.measured is not None else (2.0, 0.0)
    threshold = working_min_length(n)

    deviations = []
    for length in range(threshold, min(params.pulse_cap, threshold + crosscheck_lengths - 1) + 1):
        m3, m4 = _partition_signal(program, length)
        deviations.append(max(abs(m3 - fast[0]), abs(m4 - fast[1])))

    recs = {k: [] for k in ("parts", "work", "m3", "m4", "m4w", "m4n")}
    skipped = 0
    for t in range(params.trials):
        mask = sample_wall_mask(params.m, params.epsilon, trial_rng(params.master_seed, t))
        lengths = partition_lengths(mask)
        m3 = m4 = m4w = m4n = 0.0
        working = 0
        for length in lengths.tolist():
            if length >= threshold:
                working += 1
                m3 += fast[0]
                m4 += fast[1]
                m4w += fast[1]
            elif length <= params.pulse_cap:
                s3, s4 = _partition_signal(program, length)
                m3 += s3
                m4 += s4
                m4n += s4
            else:
                skipped += 1
        recs["parts"].append(max(int(lengths.size), 1))
        recs["work"].append(working)
        recs["m3"].append(m3)
        recs["m4"].append(m4)
        recs["m4w"].append(m4w)
        recs["m4n"].append(m4n)

    pm, ps = _mean_stderr(recs["parts"])
    wm, ws = _mean_stderr(recs["work"])
    m3m, m3s = _mean_stderr(recs["m3"])
    m4m, m4s = _mean_stderr(recs["m4"])
    total_parts, total_work = int(sum(recs["parts"])), int(sum(recs["work"]))
    return EnsembleReport(
        m=params.m, epsilon=params.epsilon, n=n, trials=params.trials, seed=params.master_seed,
        partitions_mean=pm, partitions_stderr=ps, working_mean=wm, working_stderr=ws,
        working_computers_mean=2 * wm,
        predicted_partitions=expected_partitions(params.m, params.epsilon),
        predicted_working=expected_working(params.m, params.epsilon, n),
        predicted_working_computers=2 * expected_working(params.m, params.epsilon, n),
        working_fraction=total_work / total_parts if total_parts else 0.0,
        working_fraction_interval=wilson_interval(total_work, total_parts),
        m3_mean=m3m, m3_stderr=m3s, m4_mean=m4m, m4_stderr=m4s,
        m4_working_mean=float(np.mean(recs["m4w"])), m4_nonworking_mean=float(np.mean(recs["m4n"])),
        skipped_count=skipped, fastpath_checked=len(deviations),
        fastpath_max_deviation=max(deviations, default=0.0),
    )


# pure vs mixed -----------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceResult:
    pure: tuple[float, ...]
    mixed: tuple[float, ...]

    @property
    def max_deviation(self) -> float:
        return max(abs(a - b) for a, b in zip(self.pure, self.mixed))


def wall_configurations(m: int, mode: SchemeMode):
    w = str(mode.wall_level)
    for bits in itertools.product("0" + w, repeat=m):
        yield "".join(bits)


def pure_mixed_comparison(m: int, epsilon: float, program: PulseProgram, mode: SchemeMode | None = None,
                          boundary: str = "periodic") -> EquivalenceResult:
    mode = mode or program.mode
    if m > PURE_MIXED_MAX_M:
        raise SupportOverflow(f"exact pure/mixed comparison limited to m <= {PURE_MIXED_MAX_M}")
    cfg = LatticeConfig(m, boundary, mode)
    w = mode.wall_level
    amps = {0: math.sqrt(1 - epsilon)}
    if epsilon > 0:
        amps[w] = math.sqrt(epsilon)
    pure = all_level_counts(apply_program(make_product_state(cfg, amps), program))
    mixed = np.zeros(mode.levels)
    ws = str(w)
    for s in wall_configurations(m, mode):
        k = s.count(ws)
        p = epsilon**k * (1 - epsilon) ** (m - k)
        if p == 0:
            continue
        mixed += p * np.asarray(all_level_counts(apply_program(make_basis_state(cfg, s), program)))
    return EquivalenceResult(tuple(pure), tuple(float(x) for x in mixed))


def pure_mixed_equivalence(m: int, epsilon: float, program: PulseProgram, mode: SchemeMode | None = None,
                           boundary: str = "periodic") -> float:
    """Max over levels of |<Phi'|M_x|Phi'> - sum_i p_i <phi'_i|M_x|phi'_i>|."""
    return pure_mixed_comparison(m, epsilon, program, mode, boundary).max_deviation


def diagonal_collapse_max(m: int, program: PulseProgram, mode: SchemeMode | None = None,
                          boundary: str = "periodic") -> float:
    """Largest |<phi'_i|M_x|phi'_j>| over distinct wall configurations i != j."""
    mode = mode or program.mode
    cfg = LatticeConfig(m, boundary, mode)
    evolved = [apply_program(make_basis_state(cfg, s), program) for s in wall_configurations(m, mode)]
    worst = 0.0
    for a, b in itertools.combinations(evolved, 2):
        if a.amplitudes.keys().isdisjoint(b.amplitudes.keys()):
            continue
        for x in range(mode.levels):
            worst = max(worst, abs(level_count_matrix_element(a, b, x)))
    return worst


# five-level leakage ----------------------------------------------------------------

def escape_probability(initial: str, final: SparseState, wall_level: int) -> float:
    """Probability mass of strings in which some original wall site has changed level."""
    w = str(wall_level)
    walls = [i for i, ch in enumerate(initial) if ch == w]
    return float(sum(abs(a) ** 2 for s, a in final.amplitudes.items() if any(s[i] != w for i in walls)))


def leakage_fraction(m: int, epsilon: float, program: PulseProgram, trials: int, master_seed: int = 0,
                     boundary: str = "periodic") -> dict:
    """Five-level full-lattice runs: share of trials where a pointer broke through a wall."""
    mode = program.mode
    cfg = LatticeConfig(m, boundary, mode)
    escaped = 0
    mass = []
    for t in range(trials):
        s = sample_wall_config(m, epsilon, trial_rng(master_seed, t), mode)
        final = apply_program(make_basis_state(cfg, s), program)
        p = escape_probability(s, final, mode.wall_level)
        mass.append(p)
        escaped += p > 1e-12
    lo, hi = wilson_interval(escaped, trials)
    return {"m": m, "epsilon": epsilon, "trials": trials, "escape_fraction": escaped / trials,
            "escape_interval": [lo, hi], "escape_mass_mean": float(np.mean(mass))}


__all__ = [
    "EnsembleParams", "EnsembleReport", "trial_rng", "sample_wall_config", "sample_wall_mask",
    "partition_lengths", "expected_partitions", "expected_working", "tail_probability", "scaling_table",
    "scaling_csv", "ScalingRow", "working_min_length", "count_partitions", "formula_trials", "run_ensemble",
    "pure_mixed_equivalence", "pure_mixed_comparison", "diagonal_collapse_max", "leakage_fraction",
    "escape_probability", "wilson_interval", "full_program", "FIVE_LEVEL", "SIX_LEVEL",
]
