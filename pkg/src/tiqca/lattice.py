"""Lattice configurations, sparse/dense states and level-count observables.

Basis strings are plain ``str`` of digits, site 0 leftmost (``"0230"``).
A :class:`SparseState` maps basis strings to complex amplitudes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import (
    ConfigMismatch,
    InvalidConfig,
    InvalidLevel,
    NotNormalized,
    OracleTooLarge,
    SupportOverflow,
)

PRUNE_CUTOFF = 1e-14
MAX_SUPPORT = 10**7
MAX_DENSE = 10**7

Boundary = Literal["periodic", "open"]


@dataclass(frozen=True)
class SchemeMode:
    levels: int = 6
    wall_level: int = 5

    def __post_init__(self):
        if (self.levels, self.wall_level) not in ((6, 5), (5, 1)):
            raise InvalidConfig(
                f"unsupported mode levels={self.levels} wall={self.wall_level}; "
                "use 6 levels with wall 5 or 5 levels with wall 1"
            )

    @classmethod
    def from_levels(cls, levels: int) -> "SchemeMode":
        if levels == 6:
            return cls(6, 5)
        if levels == 5:
            return cls(5, 1)
        raise InvalidConfig(f"levels must be 5 or 6, got {levels}")


SIX_LEVEL = SchemeMode(6, 5)
FIVE_LEVEL = SchemeMode(5, 1)


@dataclass(frozen=True)
class LatticeConfig:
    m: int
    boundary: Boundary = "periodic"
    mode: SchemeMode = SIX_LEVEL

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise InvalidConfig(f"lattice needs m >= 2 sites, got {self.m!r}")
        if self.boundary not in ("periodic", "open"):
            raise InvalidConfig(f"unknown boundary {self.boundary!r}")

    @property
    def d(self) -> int:
        return self.mode.levels

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Neighbor sites of ``i``; with periodic m=2 the single neighbor appears twice."""
        m = self.m
        if self.boundary == "periodic":
            return ((i - 1) % m, (i + 1) % m)
        return tuple(j for j in (i - 1, i + 1) if 0 <= j < m)

    def bonds(self) -> list[tuple[int, int]]:
        """Nearest-neighbour pairs (i, i+1), including the wrap bond when periodic."""
        if self.boundary == "periodic":
            return [(i, (i + 1) % self.m) for i in range(self.m)]
        return [(i, i + 1) for i in range(self.m - 1)]


def validate_basis(config: LatticeConfig, s: str) -> str:
    if len(s) != config.m:
        raise InvalidConfig(f"basis string {s!r} has length {len(s)}, lattice has m={config.m}")
    d = config.d
    for i, ch in enumerate(s):
        if not ch.isdigit() or int(ch) >= d:
            raise InvalidLevel(f"site {i} has level {ch!r}, mode allows 0..{d - 1}")
    return s


@dataclass(frozen=True)
class SparseState:
    """Immutable map basis string -> amplitude on a fixed lattice."""

    config: LatticeConfig
    amplitudes: Mapping[str, complex] = field(default_factory=dict)

    def __post_init__(self):
        amps = {validate_basis(self.config, k): complex(v) for k, v in self.amplitudes.items()
                if abs(v) >= PRUNE_CUTOFF}
        object.__setattr__(self, "amplitudes", MappingProxyType(amps))

    @classmethod
    def _trusted(cls, config: LatticeConfig, amps: dict[str, complex]) -> "SparseState":
        # skips key validation; callers guarantee keys are valid and pruned
        obj = object.__new__(cls)
        object.__setattr__(obj, "config", config)
        object.__setattr__(obj, "amplitudes", MappingProxyType(amps))
        return obj

    def __len__(self) -> int:
        return len(self.amplitudes)

    def amplitude(self, s: str) -> complex:
        return self.amplitudes.get(s, 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def probabilities(self) -> dict[str, float]:
        return {s: abs(a) ** 2 for s, a in self.amplitudes.items()}

    def top(self, limit: int | None = None) -> list[tuple[str, complex]]:
        """Support sorted by descending probability, ties broken by key."""
        items = sorted(self.amplitudes.items(), key=lambda kv: (-abs(kv[1]) ** 2, kv[0]))
        return items if limit is None else items[:limit]

    def map_keys(self, fn) -> "SparseState":
        out: dict[str, complex] = {}
        for s, a in self.amplitudes.items():
            t = fn(s)
            out[t] = out.get(t, 0j) + a
        return SparseState._trusted(self.config, prune(out))

    def reflect(self) -> "SparseState":
        return self.map_keys(lambda s: s[::-1])

    def shift(self, k: int = 1) -> "SparseState":
        """Cyclic shift: the level at site i moves to site i+k."""
        m = self.config.m
        k %= m
        return self.map_keys(lambda s: s[m - k:] + s[:m - k])

    def with_config(self, config: LatticeConfig) -> "SparseState":
        return SparseState(config, dict(self.amplitudes))


def prune(amps: dict[str, complex], cutoff: float = PRUNE_CUTOFF) -> dict[str, complex]:
    return {s: a for s, a in amps.items() if abs(a) >= cutoff}


def make_basis_state(config: LatticeConfig, s: str) -> SparseState:
    return SparseState(config, {validate_basis(config, s): 1.0})


def make_product_state(config: LatticeConfig, site_amps: Sequence[complex] | Mapping[int, complex]) -> SparseState:
    """m-fold tensor power of one single-site state.

    ``site_amps`` is either a per-level list of length ``d`` or a ``{level: amp}`` map.
    """
    if isinstance(site_amps, Mapping):
        per_level = dict(site_amps)
    else:
        per_level = dict(enumerate(site_amps))
    for lvl in per_level:
        if not 0 <= lvl < config.d:
            raise InvalidLevel(f"level {lvl} outside 0..{config.d - 1}")
    per_level = {lvl: complex(a) for lvl, a in per_level.items() if a != 0}
    total = sum(abs(a) ** 2 for a in per_level.values())
    if abs(total - 1.0) > 1e-12:
        raise NotNormalized(f"single-site amplitudes have norm^2 {total!r}")
    if len(per_level) ** config.m > MAX_SUPPORT:
        raise SupportOverflow(f"{len(per_level)}^{config.m} support entries exceed {MAX_SUPPORT}")
    levels = sorted(per_level)
    amps: dict[str, complex] = {}
    for combo in itertools.product(levels, repeat=config.m):
        a = 1.0 + 0j
        for lvl in combo:
            a *= per_level[lvl]
        amps["".join(map(str, combo))] = a
    return SparseState._trusted(config, prune(amps))


def level_count(s: str, x: int) -> int:
    return s.count(str(x))


def expectation_level_count(state: SparseState, x: int) -> float:
    """<M_x>: expected number of sites found in level ``x``."""
    if not 0 <= x < state.config.d:
        raise InvalidLevel(f"level {x} outside 0..{state.config.d - 1}")
    ch = str(x)
    return float(sum(abs(a) ** 2 * s.count(ch) for s, a in state.amplitudes.items()))


def all_level_counts(state: SparseState) -> list[float]:
    return [expectation_level_count(state, x) for x in range(state.config.d)]


def inner_product(a: SparseState, b: SparseState) -> complex:
    """<a|b>."""
    if a.config != b.config:
        raise ConfigMismatch(f"{a.config} vs {b.config}")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for s, amp in small.amplitudes.items():
        other = large.amplitudes.get(s)
        if other is not None:
            total += amp.conjugate() * other if small is a else other.conjugate() * amp
    return total


def level_count_matrix_element(a: SparseState, b: SparseState, x: int) -> complex:
    """<a| M_x |b>, with M_x diagonal in the basis-string basis."""
    if a.config != b.config:
        raise ConfigMismatch(f"{a.config} vs {b.config}")
    ch = str(x)
    total = 0j
    for s, amp in a.amplitudes.items():
        other = b.amplitudes.get(s)
        if other is not None:
            total += amp.conjugate() * other * s.count(ch)
    return total


# dense oracle representation ------------------------------------------------

@dataclass(frozen=True)
class DenseState:
    config: LatticeConfig
    vector: np.ndarray

    def __post_init__(self):
        dim = dense_dimension(self.config)
        vec = np.asarray(self.vector, dtype=complex)
        if vec.shape != (dim,):
            raise InvalidConfig(f"dense vector shape {vec.shape}, expected ({dim},)")
        object.__setattr__(self, "vector", vec)


def dense_dimension(config: LatticeConfig) -> int:
    dim = config.d ** config.m
    if dim > MAX_DENSE:
        raise OracleTooLarge(f"d^m = {dim} exceeds {MAX_DENSE}")
    return dim


def basis_index(s: str, d: int) -> int:
    idx = 0
    for ch in s:
        idx = idx * d + int(ch)
    return idx


def basis_string(index: int, d: int, m: int) -> str:
    digits = []
    for _ in range(m):
        index, r = divmod(index, d)
        digits.append(str(r))
    return "".join(reversed(digits))


def to_dense(state: SparseState) -> DenseState:
    cfg = state.config
    vec = np.zeros(dense_dimension(cfg), dtype=complex)
    for s, a in state.amplitudes.items():
        vec[basis_index(s, cfg.d)] = a
    return DenseState(cfg, vec)


def from_dense(dense: DenseState) -> SparseState:
    cfg = dense.config
    idx = np.flatnonzero(np.abs(dense.vector) >= PRUNE_CUTOFF)
    amps = {basis_string(int(i), cfg.d, cfg.m): complex(dense.vector[i]) for i in idx}
    return SparseState._trusted(cfg, amps)


def reduced_density(state: SparseState, sites: Iterable[int]) -> dict[tuple[str, str], complex]:
    """Reduced density matrix on ``sites`` as a sparse {(row, col): value} map."""
    sites = sorted(set(sites))
    rest = [i for i in range(state.config.m) if i not in set(sites)]
    groups: dict[str, list[tuple[str, complex]]] = {}
    for s, a in state.amplitudes.items():
        env = "".join(s[i] for i in rest)
        sub = "".join(s[i] for i in sites)
        groups.setdefault(env, []).append((sub, a))
    rho: dict[tuple[str, str], complex] = {}
    for entries in groups.values():
        for r, ar in entries:
            for c, ac in entries:
                rho[(r, c)] = rho.get((r, c), 0j) + ar * ac.conjugate()
    return rho


def max_abs_difference(a: SparseState, b: SparseState) -> float:
    keys = set(a.amplitudes) | set(b.amplitudes)
    return max((abs(a.amplitude(k) - b.amplitude(k)) for k in keys), default=0.0)


def equal_up_to_phase(a: SparseState, b: SparseState, tol: float = 1e-10) -> bool:
    """True when ``b == e^{i phi} a`` for a single global phase."""
    overlap = inner_product(a, b)
    if abs(overlap) < 1e-300:
        return len(a) == 0 and len(b) == 0
    phase = overlap / abs(overlap)
    keys = set(a.amplitudes) | set(b.amplitudes)
    return all(abs(a.amplitude(k) * phase - b.amplitude(k)) <= tol for k in keys)


def norm_drift(state: SparseState) -> float:
    return abs(state.norm_squared() - 1.0)


def site_probabilities(state: SparseState, site: int) -> np.ndarray:
    probs = np.zeros(state.config.d)
    for s, a in state.amplitudes.items():
        probs[int(s[site])] += abs(a) ** 2
    return probs


def binomial_weight(k: int, m: int, eps: float) -> float:
    return eps**k * (1.0 - eps) ** (m - k)


__all__ = [
    "PRUNE_CUTOFF", "SchemeMode", "SIX_LEVEL", "FIVE_LEVEL", "LatticeConfig", "SparseState",
    "DenseState", "make_basis_state", "make_product_state", "expectation_level_count",
    "all_level_counts", "inner_product", "level_count_matrix_element", "to_dense", "from_dense",
    "basis_index", "basis_string", "reduced_density", "max_abs_difference", "equal_up_to_phase",
    "norm_drift", "site_probabilities", "validate_basis", "prune", "binomial_weight",
]
