"""Named pulse sequences (pointer creation, stepping, CNOT, measurement) and
classical pointer/partition utilities."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import ModeMismatch
from .lattice import FIVE_LEVEL, SIX_LEVEL, SchemeMode, SparseState
from .pulses import LX, SW, ControlledExchange, GlobalLevelSwap, PulseProgram, apply_program, invert


class MacroName(str, Enum):
    POINTER_CREATE = "POINTER_CREATE"
    STEP_RIGHT = "STEP_RIGHT"
    STEP_LEFT = "STEP_LEFT"
    CNOT_SRC_LEFT = "CNOT_SRC_LEFT"
    CNOT_SRC_RIGHT = "CNOT_SRC_RIGHT"
    MEASURE_PREP = "MEASURE_PREP"


_STEP_RIGHT = (LX(0, 3, 4), LX(4, 0, 2), LX(0, 4, 3), LX(1, 3, 4), LX(4, 1, 2), LX(1, 4, 3), SW(2, 3))
_CNOT_SRC_LEFT = (LX(0, 2, 4), LX(4, 3, 2), LX(2, 1, 0), LX(4, 3, 2), LX(2, 1, 0), LX(0, 2, 4))
_MEASURE_PREP = (LX(3, 1, 4),)


def _create_sequence(wall: int):
    return (LX(wall, 0, 2), LX(2, 0, 3), LX(3, 2, 4), LX(wall, 0, 2), LX(3, 2, 4))


def relabel(pulse, mapping: dict[int, int]):
    """Apply a level relabelling to every level a pulse mentions."""
    f = lambda lvl: mapping.get(lvl, lvl)  # noqa: E731
    if isinstance(pulse, GlobalLevelSwap):
        return GlobalLevelSwap(f(pulse.x), f(pulse.y))
    return ControlledExchange(f(pulse.control), f(pulse.u), f(pulse.v), pulse.angle)


def macro_program(name: MacroName | str, mode: SchemeMode = SIX_LEVEL, wall_level: int | None = None) -> PulseProgram:
    """The fixed pulse list of a named macro.

    ``wall_level`` may be passed to assert which wall the creation sequence
    should key on; a mismatch with ``mode`` raises :class:`ModeMismatch`.
    """
    key = str(name.value if isinstance(name, MacroName) else name).upper()
    if key in ("POINTER_CREATE_6", "POINTER_CREATE_5"):
        wanted = 5 if key.endswith("6") else 1
        if wall_level is not None and wall_level != wanted:
            raise ModeMismatch(f"{key} keys on wall {wanted}, not {wall_level}")
        wall_level, key = wanted, "POINTER_CREATE"
    try:
        macro = MacroName(key)
    except ValueError:
        raise KeyError(f"unknown macro {name!r}") from None
    if macro is MacroName.POINTER_CREATE:
        if wall_level is not None and wall_level != mode.wall_level:
            raise ModeMismatch(f"creation on wall level {wall_level} requested in a mode whose wall is {mode.wall_level}")
        pulses = _create_sequence(mode.wall_level)
    elif macro is MacroName.STEP_RIGHT:
        pulses = _STEP_RIGHT
    elif macro is MacroName.STEP_LEFT:
        pulses = invert(PulseProgram(_STEP_RIGHT, mode)).pulses
    elif macro is MacroName.CNOT_SRC_LEFT:
        pulses = _CNOT_SRC_LEFT
    elif macro is MacroName.CNOT_SRC_RIGHT:
        pulses = tuple(relabel(p, {2: 3, 3: 2}) for p in _CNOT_SRC_LEFT)
    else:
        pulses = _MEASURE_PREP
    return PulseProgram(pulses, mode, macro.value)


def create_pointers(state: SparseState) -> SparseState:
    return apply_program(state, macro_program(MacroName.POINTER_CREATE, state.config.mode))


@dataclass(frozen=True)
class PointerCensus:
    right_pointers: int  # "23"
    left_pointers: int  # "32"
    inactive: int  # "04040" / "14141", each holding two pointers
    walls: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.right_pointers + self.left_pointers + 2 * self.inactive


def _count(pattern: str, s: str) -> int:
    return len(re.findall(f"(?={pattern})", s))


def pointer_census(s: str, wall_level: int = 5, periodic: bool = False) -> PointerCensus:
    walls = tuple(i for i, ch in enumerate(s) if ch == str(wall_level))
    # a periodic string is scanned with its first four sites appended
    text = s + s[:4] if periodic and len(s) > 1 else s
    if periodic:
        limit = len(s)
        count = lambda pat: sum(1 for mt in re.finditer(f"(?={pat})", text) if mt.start() < limit)  # noqa: E731
    else:
        count = lambda pat: _count(pat, text)  # noqa: E731
    return PointerCensus(count("23"), count("32"), count("04040") + count("14141"), walls)


def partition_split(s: str, mode: SchemeMode = SIX_LEVEL, boundary: str = "open") -> list[tuple[int, int]]:
    """Maximal wall-free runs as ``(start, length)``; periodic joins the wrap-around run."""
    w = str(mode.wall_level)
    m = len(s)
    walls = [i for i, ch in enumerate(s) if ch == w]
    if not walls:
        return [(0, m)] if m else []
    runs = []
    if boundary == "periodic":
        for a, b in zip(walls, walls[1:] + [walls[0] + m]):
            if b - a - 1 > 0:
                runs.append(((a + 1) % m, b - a - 1))
        return sorted(runs)
    start = 0
    for wpos in walls + [m]:
        if wpos > start:
            runs.append((start, wpos - start))
        start = wpos + 1
    return runs


__all__ = ["MacroName", "macro_program", "create_pointers", "PointerCensus", "pointer_census",
           "partition_split", "relabel", "FIVE_LEVEL", "SIX_LEVEL"]
