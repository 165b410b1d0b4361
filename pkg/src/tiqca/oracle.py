"""Dense verification oracle: literal Hamiltonian assembly and matrix exponential.

Nothing here uses the per-site activation rule.  The Hamiltonian of a
controlled exchange is assembled bond by bond from Kronecker products and
exponentiated with :func:`scipy.linalg.expm` on the invariant subspace
reachable from the input support (falling back to
:func:`scipy.sparse.linalg.expm_multiply` when that subspace is large).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InvalidPulse
from .lattice import DenseState, LatticeConfig, dense_dimension
from .pulses import ControlledExchange, GlobalLevelSwap, Pulse, validate_pulse

_DENSE_SUBSPACE_LIMIT = 2500


def _site_operator(config: LatticeConfig, ops: dict[int, np.ndarray]) -> sp.csr_matrix:
    """Kronecker product with ``ops[i]`` on site i and identity elsewhere."""
    d = config.d
    eye = sp.identity(d, dtype=complex, format="csr")
    out = None
    for i in range(config.m):
        factor = sp.csr_matrix(ops[i]) if i in ops else eye
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out


@lru_cache(maxsize=64)
def hamiltonian(pulse: ControlledExchange, config: LatticeConfig) -> sp.csr_matrix:
    """``sum_bonds |x,a><x,b| + |x,b><x,a| + |a,x><b,x| + |b,x><a,x|`` as a sparse matrix."""
    validate_pulse(pulse, config.mode)
    d = config.d
    proj = np.zeros((d, d), dtype=complex)
    proj[pulse.control, pulse.control] = 1.0
    gen = pulse.generator(d)
    dim = dense_dimension(config)
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for i, j in config.bonds():
        h = h + _site_operator(config, {i: proj, j: gen}) + _site_operator(config, {i: gen, j: proj})
    h.eliminate_zeros()
    return h


def level_swap_operator(pulse: GlobalLevelSwap, config: LatticeConfig) -> sp.csr_matrix:
    d = config.d
    single = np.eye(d, dtype=complex)
    single[[pulse.x, pulse.y]] = single[[pulse.y, pulse.x]]
    return _site_operator(config, {i: single for i in range(config.m)})


def _reachable(h: sp.csr_matrix, support: np.ndarray) -> np.ndarray:
    """Indices of the smallest H-invariant coordinate subspace containing ``support``."""
    pattern = (abs(h) > 0).astype(np.int8)
    mask = np.zeros(h.shape[0], dtype=bool)
    mask[support] = True
    frontier = mask.copy()
    while frontier.any():
        hit = (pattern @ frontier.astype(np.int8)) > 0
        frontier = hit & ~mask
        mask |= hit
    return np.flatnonzero(mask)


def apply_pulse_dense(state: DenseState, pulse: Pulse) -> DenseState:
    cfg = state.config
    validate_pulse(pulse, cfg.mode)
    if isinstance(pulse, GlobalLevelSwap):
        return DenseState(cfg, level_swap_operator(pulse, cfg) @ state.vector)
    h = hamiltonian(pulse, cfg)
    vec = state.vector
    support = np.flatnonzero(vec)
    if support.size == 0:
        return DenseState(cfg, vec.copy())
    sub = _reachable(h, support)
    if sub.size <= _DENSE_SUBSPACE_LIMIT:
        h_sub = h[sub][:, sub].toarray()
        out = np.zeros_like(vec)
        out[sub] = scipy.linalg.expm(1j * pulse.angle * h_sub) @ vec[sub]
        return DenseState(cfg, out)
    return DenseState(cfg, spla.expm_multiply(1j * pulse.angle * h, vec))


def apply_program_dense(state: DenseState, pulses) -> DenseState:
    for p in pulses:
        state = apply_pulse_dense(state, p)
    return state


def _pair_gate(pulse: ControlledExchange, d: int) -> np.ndarray:
    """Phase-free two-site permutation |xa><->|xb>, |ax><->|bx>."""
    x, a, b = pulse.control, pulse.u, pulse.v
    gate = np.eye(d * d, dtype=complex)
    for (p, q) in (((x, a), (x, b)), ((a, x), (b, x))):
        i, j = p[0] * d + p[1], q[0] * d + q[1]
        gate[[i, j]] = gate[[j, i]]
    return gate


def apply_pulse_staggered(state: DenseState, pulse: ControlledExchange) -> DenseState:
    """Two shifted layers of a phase-free two-site permutation.

    Only defined for basis-level exchanges at angle +-pi/2.  It reproduces the
    exponential up to a phase per basis string (``i`` per flipped site and
    ``-1`` per doubly activated site).
    """
    cfg = state.config
    if not isinstance(pulse, ControlledExchange) or not pulse.is_basis or pulse.u == pulse.v:
        raise InvalidPulse("staggered layers need a basis-level exchange with u != v")
    if abs(abs(pulse.angle) - np.pi / 2) > 1e-12:
        raise InvalidPulse("staggered layers reproduce only the pi/2 pulse")
    if cfg.boundary == "periodic" and cfg.m % 2:
        raise InvalidPulse("periodic staggering needs an even number of sites")
    d, m = cfg.d, cfg.m
    gate = _pair_gate(pulse, d).reshape(d, d, d, d)
    tensor = state.vector.reshape((d,) * m)
    bonds = cfg.bonds()
    for parity in (0, 1):
        for i, j in bonds:
            if i % 2 != parity:
                continue
            tensor = np.tensordot(gate, tensor, axes=([2, 3], [i, j]))
            tensor = np.moveaxis(tensor, [0, 1], [i, j])
    return DenseState(cfg, tensor.reshape(-1))


__all__ = ["hamiltonian", "apply_pulse_dense", "apply_program_dense", "apply_pulse_staggered",
           "level_swap_operator"]
