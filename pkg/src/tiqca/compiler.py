"""Circuit-to-pulse compilation on the pointer tape.

Tape model: the left computer's pointer sits in a *gap* ``k`` between
logical qubits ``k`` and ``k+1`` (qubits are 1-based, home gap is 0)::

    wall q1 .. qk 2 3 q(k+1) .. qn 0 ...

Single-qubit pulses (control level 3) reach qubit ``gap+1``; the CNOT macro
couples qubits ``gap`` (next to the 2) and ``gap+1`` (next to the 3).  The
right computer of the partition runs the mirror image of the same program.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    InvalidCircuit,
    NotSpecialUnitary,
    NotUnitary,
    ParseError,
    PartitionTooSmall,
    PointerNotHome,
    RoutingError,
)
from .lattice import LatticeConfig, SchemeMode, SIX_LEVEL, SparseState, make_basis_state, reduced_density
from .macros import MacroName, create_pointers, macro_program
from .pulses import KET0, KET1, KET1_I, ROT, ControlledExchange, Pulse, PulseProgram, apply_program

X = np.array([[0, 1], [1, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

# Raw action of the six-pulse CNOT macro on (source, target), fixed by simulation:
# source |0> flips the target with phase i, source |1> idles with phase -1.
RAW_CNOT_ON_ZERO = 1j
RAW_CNOT_ON_ONE = -1.0
RAW_CNOT = np.block([[RAW_CNOT_ON_ZERO * X, np.zeros((2, 2))],
                     [np.zeros((2, 2)), RAW_CNOT_ON_ONE * np.eye(2)]])
# standard CNOT = (POLARITY_POST on source) . RAW . (X on source)
POLARITY_PRE = X
POLARITY_POST = np.diag([1 / RAW_CNOT_ON_ONE, 1 / RAW_CNOT_ON_ZERO]) @ X


@dataclass(frozen=True)
class Gate1:
    target: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise InvalidCircuit(f"single-qubit gate must be 2x2, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)

    def __eq__(self, other):
        return isinstance(other, Gate1) and self.target == other.target and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.target, self.matrix.tobytes()))


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    @property
    def adjacent(self) -> bool:
        return abs(self.control - self.target) == 1


@dataclass(frozen=True)
class Measure:
    q: int


Op = Union[Gate1, CNOT, Measure]


@dataclass
class LogicalCircuit:
    n: int
    ops: list[Op] = field(default_factory=list)

    def validate(self) -> "LogicalCircuit":
        if self.n < 1:
            raise InvalidCircuit(f"need at least one qubit, got n={self.n}")
        for idx, op in enumerate(self.ops):
            qubits = {Gate1: lambda o: [o.target], CNOT: lambda o: [o.control, o.target],
                      Measure: lambda o: [o.q]}[type(op)](op)
            for q in qubits:
                if not 1 <= q <= self.n:
                    raise InvalidCircuit(f"op {idx}: qubit {q} outside 1..{self.n}")
            if isinstance(op, CNOT) and op.control == op.target:
                raise InvalidCircuit(f"op {idx}: CNOT control equals target")
            if isinstance(op, Gate1):
                err = np.abs(op.matrix.conj().T @ op.matrix - np.eye(2)).max()
                if err > 1e-10:
                    raise InvalidCircuit(f"op {idx}: gate matrix not unitary (error {err:.2e})")
            if isinstance(op, Measure) and idx != len(self.ops) - 1:
                raise InvalidCircuit("measurement must be the last operation")
        return self

    @property
    def measured(self) -> int | None:
        return self.ops[-1].q if self.ops and isinstance(self.ops[-1], Measure) else None


# single-qubit synthesis -------------------------------------------------------

def _expm_pauli(theta: float, pauli: np.ndarray) -> np.ndarray:
    return math.cos(theta) * np.eye(2) + 1j * math.sin(theta) * pauli


SIGMA_X = X
SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def euler_angles(g: np.ndarray, tol: float = 1e-10) -> tuple[float, float, float]:
    """Angles with ``g = exp(i a X) exp(i b Y) exp(i c X)``, each in (-pi, pi]."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2) or np.abs(g.conj().T @ g - np.eye(2)).max() > tol:
        raise NotUnitary("matrix is not a 2x2 unitary")
    if abs(np.linalg.det(g) - 1) > tol:
        raise NotSpecialUnitary(f"det = {np.linalg.det(g):.6g}, expected 1")
    # conjugating by the Hadamard maps X -> Z and Y -> -Y, reducing to a ZYZ split
    w = HADAMARD @ g @ HADAMARD
    c, s = abs(w[0, 0]), abs(w[1, 0])
    beta = math.atan2(s, c)
    if s < 1e-12:
        total = cmath.phase(w[0, 0])
        alpha, gamma = total, 0.0
    elif c < 1e-12:
        diff = cmath.phase(w[1, 0])
        alpha, gamma = -diff, 0.0
    else:
        total, diff = cmath.phase(w[0, 0]), cmath.phase(w[1, 0])
        alpha, gamma = (total - diff) / 2, (total + diff) / 2
    return _wrap(alpha), _wrap(beta), _wrap(gamma)


def _wrap(theta: float) -> float:
    theta = math.remainder(theta, 2 * math.pi)
    if abs(theta) < 1e-14:  # keep emitted programs free of round-off noise
        return 0.0
    return math.pi if theta <= -math.pi else theta


def euler_product(alpha: float, beta: float, gamma: float) -> np.ndarray:
    return _expm_pauli(alpha, SIGMA_X) @ _expm_pauli(beta, SIGMA_Y) @ _expm_pauli(gamma, SIGMA_X)


def special_unitary(u: np.ndarray) -> tuple[np.ndarray, float]:
    """Split ``u = exp(i phi) g`` with ``det g = 1``; returns ``(g, phi)``."""
    det = np.linalg.det(u)
    phi = cmath.phase(det) / 2
    return u * cmath.exp(-1j * phi), phi


def gate_pulses(u: np.ndarray, keep_phase: bool = False) -> list[ControlledExchange]:
    """Pulses applying ``u`` to the qubit right of a ``23`` pointer, in time order."""
    g, phi = special_unitary(np.asarray(u, dtype=complex))
    alpha, beta, gamma = euler_angles(g)
    pulses = [ROT(gamma, KET0, KET1), ROT(beta, KET0, KET1_I), ROT(alpha, KET0, KET1)]
    if keep_phase and abs(phi) > 1e-15:
        # u = v gives exp(2 i t |u><u|); the two halves make exp(i phi) on both qubit levels
        pulses += [ROT(phi / 2, KET0, KET0), ROT(phi / 2, KET1, KET1)]
    return pulses


# compilation ------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    label: str
    start: int
    stop: int
    gap: int  # gap after the segment


@dataclass(frozen=True)
class CompiledProgram:
    program: PulseProgram
    n: int
    l_min: int
    gap_trajectory: tuple[int, ...]
    segments: tuple[Segment, ...]
    measured: int | None = None

    @property
    def final_gap(self) -> int:
        return self.gap_trajectory[-1] if self.gap_trajectory else 0


def swap_as_cnots(a: int, b: int) -> list[CNOT]:
    return [CNOT(a, b), CNOT(b, a), CNOT(a, b)]


def lower_cnots(ops: Sequence[Op]) -> list[Op]:
    """Replace non-adjacent CNOTs by adjacent ones plus swap chains."""
    out: list[Op] = []
    for op in ops:
        if not isinstance(op, CNOT) or op.adjacent:
            out.append(op)
            continue
        c, t = op.control, op.target
        step = 1 if t > c else -1
        chain = []
        pos = c
        while abs(t - pos) > 1:
            chain.extend(swap_as_cnots(pos, pos + step))
            pos += step
        out.extend(chain)
        out.append(CNOT(pos, t))
        out.extend(reversed(chain))
    return out


class _Emitter:
    def __init__(self, mode: SchemeMode, n: int):
        self.mode = mode
        self.n = n
        self.pulses: list[Pulse] = []
        self.segments: list[Segment] = []
        self.gap = 0
        self._right = macro_program(MacroName.STEP_RIGHT, mode).pulses
        self._left = macro_program(MacroName.STEP_LEFT, mode).pulses

    def emit(self, label: str, pulses: Sequence[Pulse]):
        start = len(self.pulses)
        self.pulses.extend(pulses)
        self.segments.append(Segment(label, start, len(self.pulses), self.gap))

    def route(self, gap: int):
        if not 0 <= gap <= self.n:
            raise RoutingError(f"gap {gap} outside 0..{self.n}")
        while self.gap < gap:
            self.gap += 1
            self.emit("STEP_RIGHT", self._right)
        while self.gap > gap:
            self.gap -= 1
            self.emit("STEP_LEFT", self._left)

    def gate(self, target: int, u: np.ndarray, keep_phase: bool):
        self.route(target - 1)
        self.emit(f"G{target}", gate_pulses(u, keep_phase))

    def raw_cnot(self, source: int, target: int):
        gap = min(source, target)
        if not 1 <= gap <= self.n - 1:
            raise RoutingError(f"CNOT({source},{target}) needs a gap in 1..{self.n - 1}")
        self.route(gap)
        name = MacroName.CNOT_SRC_LEFT if source < target else MacroName.CNOT_SRC_RIGHT
        self.emit(name.value, macro_program(name, self.mode).pulses)


def compile_circuit(circuit: LogicalCircuit, mode: SchemeMode = SIX_LEVEL, keep_phase: bool = False) -> CompiledProgram:
    circuit.validate()
    em = _Emitter(mode, circuit.n)
    measured = None
    for op in lower_cnots(circuit.ops):
        if isinstance(op, Gate1):
            em.gate(op.target, op.matrix, keep_phase)
        elif isinstance(op, CNOT):
            em.gate(op.control, POLARITY_PRE, keep_phase)
            em.raw_cnot(op.control, op.target)
            em.gate(op.control, POLARITY_POST, keep_phase)
        else:
            measured = op.q
    if measured is None:
        em.route(0)
    else:
        em.route(measured - 1)
        em.emit(MacroName.MEASURE_PREP.value, macro_program(MacroName.MEASURE_PREP, mode).pulses)
    program = PulseProgram(tuple(em.pulses), mode, "compiled")
    gaps = tuple(seg.gap for seg in em.segments)
    return CompiledProgram(program, circuit.n, 2 * circuit.n + 4, gaps, tuple(em.segments), measured)


compile = compile_circuit  # noqa: A001 - public name used by the CLI and docs


# reference simulation ----------------------------------------------------------

@dataclass(frozen=True)
class ReferenceResult:
    state: np.ndarray
    prob_one: float | None = None


def _apply_1q(vec: np.ndarray, n: int, q: int, u: np.ndarray) -> np.ndarray:
    t = vec.reshape((2,) * n)
    t = np.tensordot(u, t, axes=([1], [q - 1]))
    return np.moveaxis(t, 0, q - 1).reshape(-1)


def _apply_cnot(vec: np.ndarray, n: int, c: int, t: int) -> np.ndarray:
    tens = vec.reshape((2,) * n).copy()
    idx = [slice(None)] * n
    idx[c - 1] = 1
    sub = tens[tuple(idx)]
    axis = (t - 1) - (1 if t > c else 0)
    tens[tuple(idx)] = np.flip(sub, axis=axis)
    return tens.reshape(-1)


def reference_simulate(circuit: LogicalCircuit) -> ReferenceResult:
    """Plain state-vector simulation, qubit 1 most significant."""
    circuit.validate()
    n = circuit.n
    if n > 12:
        raise InvalidCircuit(f"reference simulation limited to 12 qubits, got {n}")
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = 1.0
    prob = None
    for op in circuit.ops:
        if isinstance(op, Gate1):
            vec = _apply_1q(vec, n, op.target, op.matrix)
        elif isinstance(op, CNOT):
            vec = _apply_cnot(vec, n, op.control, op.target)
        else:
            probs = np.abs(vec.reshape((2,) * n)) ** 2
            prob = float(np.moveaxis(probs, op.q - 1, 0)[1].sum())
    return ReferenceResult(vec, prob)


# running on a partition ---------------------------------------------------------

def fresh_partition(length: int, mode: SchemeMode = SIX_LEVEL) -> SparseState:
    """``wall 0^length wall`` on an open lattice, with pointers created."""
    cfg = LatticeConfig(length + 2, "open", mode)
    w = str(mode.wall_level)
    return create_pointers(make_basis_state(cfg, w + "0" * length + w))


def _partition_sites(state: SparseState, partition: tuple[int, int]) -> list[int]:
    start, length = partition
    return [(start + j) % state.config.m for j in range(length)]


def readout_densities(state: SparseState, partition: tuple[int, int], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced density matrices of the left and (mirrored) right computer."""
    start, length = partition
    if length < 2 * n + 4:
        raise PartitionTooSmall(f"partition of length {length} cannot host two {n}-qubit computers")
    sites = _partition_sites(state, partition)
    left_ptr, right_ptr = sites[:2], sites[-2:]
    left_q = sites[2:2 + n]
    right_q = [sites[length - 3 - j] for j in range(n)]
    for s in state.amplitudes:
        if s[left_ptr[0]] + s[left_ptr[1]] != "23" or s[right_ptr[0]] + s[right_ptr[1]] != "32":
            raise PointerNotHome(f"pointers not at home in support string {s}")
        for i in left_q + right_q:
            if s[i] not in "01":
                raise PointerNotHome(f"site {i} holds level {s[i]} in support string {s}")
    return _density(state, left_q, n), _density(state, right_q, n)


def _density(state: SparseState, sites: list[int], n: int) -> np.ndarray:
    order = sorted(range(n), key=lambda j: sites[j])
    sorted_sites = [sites[j] for j in order]
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for (r, c), val in reduced_density(state, sorted_sites).items():
        # reduced_density orders by site index; permute back to qubit order
        rq = "".join(r[order.index(j)] for j in range(n))
        cq = "".join(c[order.index(j)] for j in range(n))
        rho[int(rq, 2), int(cq, 2)] += val
    return rho


def _principal(rho: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(rho)
    vec = evecs[:, -1]
    k = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[k]) / vec[k])


def logical_readout(state: SparseState, partition: tuple[int, int], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Both computers' n-qubit states (principal eigenvectors, phase-fixed)."""
    left, right = readout_densities(state, partition, n)
    return _principal(left), _principal(right)


def run_on_partition(compiled: CompiledProgram, length: int | None = None, mode: SchemeMode | None = None) -> SparseState:
    mode = mode or compiled.program.mode
    length = 2 * compiled.n + 6 if length is None else length
    return apply_program(fresh_partition(length, mode), compiled.program)


# circuit text format -------------------------------------------------------------

def parse_circuit(text: str) -> LogicalCircuit:
    n = None
    ops: list[Op] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        head = toks[0]
        cols = []
        pos = 0
        for tok in toks:
            pos = line.index(tok, pos)
            cols.append(pos + 1)
            pos += len(tok)

        def num(i, kind=int):
            try:
                return kind(toks[i])
            except (ValueError, IndexError):
                col = cols[i] if i < len(cols) else len(raw) + 1
                raise ParseError(f"expected {kind.__name__} argument {i}", lineno, col) from None

        arity = {"qubits": 1, "g": 9, "cx": 2, "measure": 1}.get(head)
        if arity is None:
            raise ParseError(f"unknown keyword {head!r}", lineno, cols[0])
        if len(toks) - 1 != arity:
            raise ParseError(f"{head} takes {arity} arguments, got {len(toks) - 1}", lineno,
                             cols[arity + 1] if len(toks) > arity + 1 else len(raw) + 1)
        if head == "qubits":
            if n is not None:
                raise ParseError("qubit count given twice", lineno, cols[0])
            n = num(1)
            continue
        if n is None:
            raise ParseError("'qubits <n>' must come first", lineno, cols[0])
        if head == "g":
            vals = [num(i, float) for i in range(2, 10)]
            mat = np.array([complex(vals[0], vals[1]), complex(vals[2], vals[3]),
                            complex(vals[4], vals[5]), complex(vals[6], vals[7])]).reshape(2, 2)
            ops.append(Gate1(num(1), mat))
        elif head == "cx":
            ops.append(CNOT(num(1), num(2)))
        else:
            ops.append(Measure(num(1)))
    if n is None:
        raise ParseError("missing 'qubits <n>' line", 1, 1)
    return LogicalCircuit(n, ops).validate()


def format_circuit(circuit: LogicalCircuit) -> str:
    lines = [f"qubits {circuit.n}"]
    for op in circuit.ops:
        if isinstance(op, Gate1):
            vals = []
            for z in op.matrix.reshape(-1):
                vals += [repr(float(z.real)), repr(float(z.imag))]
            lines.append(f"g {op.target} " + " ".join(vals))
        elif isinstance(op, CNOT):
            lines.append(f"cx {op.control} {op.target}")
        else:
            lines.append(f"measure {op.q}")
    return "\n".join(lines) + "\n"


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_circuit(rng: np.random.Generator, n: int, max_gates: int = 8, measure: bool = False) -> LogicalCircuit:
    ops: list[Op] = []
    for _ in range(int(rng.integers(1, max_gates + 1))):
        if n >= 2 and rng.random() < 0.4:
            c, t = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            ops.append(CNOT(int(c), int(t)))
        else:
            ops.append(Gate1(int(rng.integers(1, n + 1)), random_unitary(rng)))
    if measure:
        ops.append(Measure(int(rng.integers(1, n + 1))))
    return LogicalCircuit(n, ops)


__all__ = [
    "Gate1", "CNOT", "Measure", "LogicalCircuit", "euler_angles", "euler_product", "special_unitary",
    "gate_pulses", "compile_circuit", "compile", "CompiledProgram", "Segment", "lower_cnots",
    "reference_simulate", "ReferenceResult", "logical_readout", "readout_densities", "fresh_partition",
    "run_on_partition", "parse_circuit", "format_circuit", "random_circuit", "random_unitary",
    "RAW_CNOT", "POLARITY_PRE", "POLARITY_POST", "X", "HADAMARD",
]
