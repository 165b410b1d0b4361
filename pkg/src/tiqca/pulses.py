"""Global translation- and reflection-invariant pulses and their exact action.

A controlled exchange with control level ``x`` and exchange pair ``(u, v)`` is
``exp(i * angle * H)`` with ``H = sum_bonds (P_x (x) A + A (x) P_x)`` and
``A = |u><v| + |v><u|``.  Because the bond terms commute and ``x`` is
orthogonal to ``span{u, v}``, each site evolves independently under
``exp(i * angle * k * A)`` where ``k`` is its number of control neighbours.
That per-site rule is what :func:`apply_pulse` implements; the dense oracle
in :mod:`tiqca.oracle` exponentiates ``H`` directly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import InvalidPulse, ModeMismatch, ParseError
from .lattice import LatticeConfig, SchemeMode, SIX_LEVEL, SparseState, prune

HALF_PI = math.pi / 2
_COEFF_CUTOFF = 1e-15


@dataclass(frozen=True)
class QubitVector:
    """A state ``c0|0> + c1|1>`` of one site, restricted to the qubit levels."""

    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        norm = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidPulse(f"qubit vector ({self.c0}, {self.c1}) has norm^2 {norm}")

    def vector(self, d: int) -> np.ndarray:
        out = np.zeros(d, dtype=complex)
        out[0], out[1] = self.c0, self.c1
        return out

    def support(self) -> set[int]:
        return {lvl for lvl, c in ((0, self.c0), (1, self.c1)) if c != 0}


KET0 = QubitVector(1, 0)
KET1 = QubitVector(0, 1)
KET1_I = QubitVector(0, 1j)

Endpoint = Union[int, QubitVector]


def _endpoint_vector(e: Endpoint, d: int) -> np.ndarray:
    if isinstance(e, QubitVector):
        return e.vector(d)
    out = np.zeros(d, dtype=complex)
    out[e] = 1.0
    return out


def _endpoint_support(e: Endpoint) -> set[int]:
    return e.support() if isinstance(e, QubitVector) else {e}


@dataclass(frozen=True)
class ControlledExchange:
    control: int
    u: Endpoint
    v: Endpoint
    angle: float = HALF_PI

    def generator(self, d: int) -> np.ndarray:
        """Single-site ``A = |u><v| + |v><u|`` as a d x d matrix."""
        u = _endpoint_vector(self.u, d)
        v = _endpoint_vector(self.v, d)
        return np.outer(u, v.conj()) + np.outer(v, u.conj())

    def span_levels(self) -> set[int]:
        return _endpoint_support(self.u) | _endpoint_support(self.v)

    @property
    def is_basis(self) -> bool:
        return not isinstance(self.u, QubitVector) and not isinstance(self.v, QubitVector)


@dataclass(frozen=True)
class GlobalLevelSwap:
    x: int
    y: int


Pulse = Union[ControlledExchange, GlobalLevelSwap]


def LX(x: int, a: int, b: int, sign: int = +1) -> ControlledExchange:
    """The ``U_{xa}^{xb}`` pulse (angle +pi/2), or its inverse for ``sign=-1``."""
    return ControlledExchange(x, a, b, sign * HALF_PI)


def ROT(angle: float, u: QubitVector, v: QubitVector) -> ControlledExchange:
    """Rotation of qubit levels next to a ``3``."""
    return ControlledExchange(3, u, v, angle)


def SW(x: int, y: int) -> GlobalLevelSwap:
    return GlobalLevelSwap(x, y)


def validate_pulse(pulse: Pulse, mode: SchemeMode) -> Pulse:
    d = mode.levels
    if isinstance(pulse, GlobalLevelSwap):
        for lvl in (pulse.x, pulse.y):
            if not 0 <= lvl < d:
                raise InvalidPulse(f"swap level {lvl} outside 0..{d - 1}")
        return pulse
    if not isinstance(pulse, ControlledExchange):
        raise InvalidPulse(f"not a pulse: {pulse!r}")
    if not math.isfinite(pulse.angle):
        raise InvalidPulse("angle must be finite")
    if not 0 <= pulse.control < d:
        raise InvalidPulse(f"control level {pulse.control} outside 0..{d - 1}")
    for e in (pulse.u, pulse.v):
        if not isinstance(e, QubitVector) and not (isinstance(e, (int, np.integer)) and 0 <= e < d):
            raise InvalidPulse(f"exchange endpoint {e!r} invalid for {d} levels")
    if pulse.control in pulse.span_levels():
        raise InvalidPulse(f"control level {pulse.control} overlaps exchange span {sorted(pulse.span_levels())}")
    return pulse


@dataclass(frozen=True)
class PulseProgram:
    pulses: tuple[Pulse, ...] = ()
    mode: SchemeMode = SIX_LEVEL
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        for p in self.pulses:
            validate_pulse(p, self.mode)

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self) -> Iterator[Pulse]:
        return iter(self.pulses)

    def __add__(self, other: "PulseProgram") -> "PulseProgram":
        if other.mode != self.mode:
            raise ModeMismatch(f"cannot join {self.mode} and {other.mode} programs")
        return PulseProgram(self.pulses + other.pulses, self.mode, self.name)

    def repeat(self, times: int) -> "PulseProgram":
        return PulseProgram(self.pulses * times, self.mode, self.name)


def invert(program: PulseProgram) -> PulseProgram:
    out = []
    for p in reversed(program.pulses):
        out.append(replace(p, angle=-p.angle) if isinstance(p, ControlledExchange) else p)
    name = program.name
    if name is not None:
        name = name[:-3] if name.endswith("^-1") else f"{name}^-1"
    return PulseProgram(tuple(out), program.mode, name)


# per-site rule ---------------------------------------------------------------

@lru_cache(maxsize=256)
def _neighbor_table(config: LatticeConfig) -> tuple[tuple[int, ...], ...]:
    return tuple(config.neighbors(i) for i in range(config.m))


def site_activation(s: str, pulse: ControlledExchange, config: LatticeConfig) -> list[int]:
    """Number of neighbours of each site that sit in the control level."""
    ctrl = str(pulse.control)
    nbrs = _neighbor_table(config)
    return [sum(1 for j in nbrs[i] if s[j] == ctrl) for i in range(len(s))]


@lru_cache(maxsize=1024)
def _transition_table(pulse: ControlledExchange, d: int) -> dict[int, dict[str, tuple[tuple[str, complex], ...]]]:
    """For k = 1, 2: level char -> ((out char, coefficient), ...) under exp(i*angle*k*A)."""
    active = sorted(pulse.span_levels())
    gen = pulse.generator(d)[np.ix_(active, active)]
    evals, evecs = np.linalg.eigh(gen)
    table: dict[int, dict[str, tuple[tuple[str, complex], ...]]] = {}
    for k in (1, 2):
        if pulse.is_basis and len(active) == 2:
            # closed form for an orthonormal pair: exp(i th A) = cos th + i sin th A
            th = k * pulse.angle
            c, s = math.cos(th), math.sin(th)
            mat = np.array([[c, 1j * s], [1j * s, c]])
        else:
            mat = (evecs * np.exp(1j * pulse.angle * k * evals)) @ evecs.conj().T
        rows: dict[str, tuple[tuple[str, complex], ...]] = {}
        for col, lvl_in in enumerate(active):
            outs = tuple((str(active[row]), complex(mat[row, col])) for row in range(len(active))
                         if abs(mat[row, col]) > _COEFF_CUTOFF)
            rows[str(lvl_in)] = outs
        table[k] = rows
    return table


def _apply_exchange(state: SparseState, pulse: ControlledExchange) -> SparseState:
    cfg = state.config
    table = _transition_table(pulse, cfg.d)
    ctrl = str(pulse.control)
    active = table[1].keys()
    nbrs = _neighbor_table(cfg)
    out: dict[str, complex] = {}
    for s, amp in state.amplitudes.items():
        moves = []
        for i, ch in enumerate(s):
            if ch in active:
                k = 0
                for j in nbrs[i]:
                    if s[j] == ctrl:
                        k += 1
                if k:
                    moves.append((i, table[k][ch]))
        if not moves:
            out[s] = out.get(s, 0j) + amp
            continue
        for combo in itertools.product(*(opts for _, opts in moves)):
            chars = list(s)
            a = amp
            for (i, _), (ch_out, coeff) in zip(moves, combo):
                chars[i] = ch_out
                a *= coeff
            t = "".join(chars)
            out[t] = out.get(t, 0j) + a
    return SparseState._trusted(cfg, prune(out))


def _apply_swap(state: SparseState, pulse: GlobalLevelSwap) -> SparseState:
    x, y = str(pulse.x), str(pulse.y)
    trans = str.maketrans({x: y, y: x})
    return SparseState._trusted(state.config, {s.translate(trans): a for s, a in state.amplitudes.items()})


def apply_pulse(state: SparseState, pulse: Pulse) -> SparseState:
    validate_pulse(pulse, state.config.mode)
    if isinstance(pulse, GlobalLevelSwap):
        return _apply_swap(state, pulse)
    return _apply_exchange(state, pulse)


def apply_program(state: SparseState, program: PulseProgram | Iterable[Pulse]) -> SparseState:
    if isinstance(program, PulseProgram) and program.mode != state.config.mode:
        raise ModeMismatch(f"program mode {program.mode} differs from lattice mode {state.config.mode}")
    for p in program:
        state = apply_pulse(state, p)
    return state


def wall_positions(s: str, wall_level: int) -> tuple[int, ...]:
    w = str(wall_level)
    return tuple(i for i, ch in enumerate(s) if ch == w)


def touches_level(pulse: Pulse, level: int) -> bool:
    """True when the pulse can change a site sitting in ``level``."""
    if isinstance(pulse, GlobalLevelSwap):
        return level in (pulse.x, pulse.y) and pulse.x != pulse.y
    return level in pulse.span_levels()


# text format -----------------------------------------------------------------

def _fmt_real(x: float) -> str:
    return repr(float(x))


def format_pulse(pulse: Pulse) -> str:
    if isinstance(pulse, GlobalLevelSwap):
        return f"SW {pulse.x} {pulse.y}"
    if pulse.is_basis:
        if abs(abs(pulse.angle) - HALF_PI) > 1e-12:
            raise InvalidPulse(f"LX lines only carry angles of +-pi/2, got {pulse.angle}")
        sign = "+" if pulse.angle > 0 else "-"
        return f"LX {pulse.control} {pulse.u} {pulse.v} {sign}"
    if pulse.control != 3:
        raise InvalidPulse("ROT lines are defined for control level 3 only")
    u = pulse.u if isinstance(pulse.u, QubitVector) else QubitVector(*_endpoint_vector(pulse.u, 2))
    v = pulse.v if isinstance(pulse.v, QubitVector) else QubitVector(*_endpoint_vector(pulse.v, 2))
    comps = [u.c0.real, u.c0.imag, u.c1.real, u.c1.imag, v.c0.real, v.c0.imag, v.c1.real, v.c1.imag]
    return "ROT " + " ".join(_fmt_real(x) for x in [pulse.angle, *comps])


def format_program(program: PulseProgram, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(format_pulse(p) for p in program.pulses)
    return "\n".join(lines) + ("\n" if lines else "")


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out, col = [], 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def _int_tok(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer level, got {tok!r}", lineno, col) from None


def _real_tok(tok: str, lineno: int, col: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise ParseError(f"expected a decimal real, got {tok!r}", lineno, col) from None
    if not math.isfinite(val):
        raise ParseError(f"non-finite real {tok!r}", lineno, col)
    return val


def parse_program(text: str, mode: SchemeMode = SIX_LEVEL, name: str | None = None) -> PulseProgram:
    pulses: list[Pulse] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        expected = {"LX": 4, "ROT": 9, "SW": 2}.get(head)
        if expected is None:
            raise ParseError(f"unknown pulse keyword {head!r}", lineno, hcol)
        if len(args) != expected:
            col = args[expected][1] if len(args) > expected else len(raw) + 1
            raise ParseError(f"{head} takes {expected} arguments, got {len(args)}", lineno, col)
        try:
            if head == "SW":
                pulse: Pulse = SW(*(_int_tok(t, lineno, c) for t, c in args))
            elif head == "LX":
                x, a, b = (_int_tok(t, lineno, c) for t, c in args[:3])
                sign_tok, scol = args[3]
                if sign_tok not in ("+", "-"):
                    raise ParseError(f"LX sign must be + or -, got {sign_tok!r}", lineno, scol)
                pulse = LX(x, a, b, +1 if sign_tok == "+" else -1)
            else:
                vals = [_real_tok(t, lineno, c) for t, c in args]
                u = QubitVector(complex(vals[1], vals[2]), complex(vals[3], vals[4]))
                v = QubitVector(complex(vals[5], vals[6]), complex(vals[7], vals[8]))
                pulse = ROT(vals[0], u, v)
            validate_pulse(pulse, mode)
        except InvalidPulse as exc:
            raise ParseError(str(exc), lineno, hcol) from None
        pulses.append(pulse)
    return PulseProgram(tuple(pulses), mode, name)


def phase_of(z: complex) -> complex:
    return z / abs(z) if z else 1.0 + 0j


__all__ = [
    "QubitVector", "KET0", "KET1", "KET1_I", "ControlledExchange", "GlobalLevelSwap", "Pulse",
    "PulseProgram", "LX", "ROT", "SW", "validate_pulse", "invert", "site_activation", "apply_pulse",
    "apply_program", "wall_positions", "touches_level", "format_pulse", "format_program",
    "parse_program", "phase_of", "HALF_PI",
]
