import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tiqca.errors import InvalidPulse, OracleTooLarge
from tiqca.lattice import LatticeConfig, from_dense, make_basis_state, max_abs_difference, to_dense
from tiqca.oracle import apply_program_dense, apply_pulse_dense, apply_pulse_staggered, hamiltonian
from tiqca.pulses import KET0, KET1, LX, ROT, ControlledExchange, apply_pulse, site_activation
from tiqca.verify import oracle_cases, random_pulse


def test_hamiltonian_is_hermitian():
    h = hamiltonian(ROT(0.4, KET0, KET1), LatticeConfig(4)).toarray()
    assert np.abs(h - h.conj().T).max() == 0


def test_zero_angle_dense_identity():
    state = to_dense(make_basis_state(LatticeConfig(4), "0230"))
    out = apply_pulse_dense(state, ControlledExchange(0, 3, 4, 0.0))
    assert np.array_equal(out.vector, state.vector)


def test_random_cases_within_tolerance():
    assert oracle_cases(60, seed=99) <= 1e-10


def _expected_phase(s, pulse, cfg):
    # exponential carries i per single activation (times the angle sign) and -1 per double activation
    phase = 1.0 + 0j
    for site, k in enumerate(site_activation(s, pulse, cfg)):
        if int(s[site]) in (pulse.u, pulse.v):
            phase *= {0: 1, 1: 1j * math.copysign(1, pulse.angle), 2: -1}[k]
    return phase


@pytest.mark.parametrize("m,boundary", [(4, "open"), (5, "open"), (4, "periodic"), (2, "periodic")])
@pytest.mark.parametrize("pulse", [LX(0, 3, 4), LX(4, 0, 2, -1), LX(2, 1, 0)])
def test_staggered_layers_match_up_to_string_phase(m, boundary, pulse):
    cfg = LatticeConfig(m, boundary)
    levels = sorted({pulse.control, pulse.u, pulse.v, 5})
    for tup in itertools.product(levels, repeat=m):
        s = "".join(map(str, tup))
        state = to_dense(make_basis_state(cfg, s))
        exact = from_dense(apply_pulse_dense(state, pulse))
        stag = from_dense(apply_pulse_staggered(state, pulse))
        assert len(stag) == 1 and set(stag.amplitudes) == set(exact.amplitudes)
        (key, a), = stag.amplitudes.items()
        assert exact.amplitude(key) == pytest.approx(a * _expected_phase(s, pulse, cfg), abs=1e-12)


def test_staggered_rejects_general_pulses():
    state = to_dense(make_basis_state(LatticeConfig(4), "0230"))
    with pytest.raises(InvalidPulse):
        apply_pulse_staggered(state, ControlledExchange(0, 3, 4, 0.3))
    with pytest.raises(InvalidPulse):
        apply_pulse_staggered(to_dense(make_basis_state(LatticeConfig(5), "02300")), LX(0, 3, 4))


@given(st.integers(0, 2**32 - 1))
def test_program_dense_matches_sparse(seed):
    rng = np.random.default_rng(seed)
    cfg = LatticeConfig(4, "periodic")
    pulses = [random_pulse(rng) for _ in range(3)]
    s = "".join(str(x) for x in rng.integers(6, size=4))
    sparse = make_basis_state(cfg, s)
    for p in pulses:
        sparse = apply_pulse(sparse, p)
    dense = from_dense(apply_program_dense(to_dense(make_basis_state(cfg, s)), pulses))
    assert max_abs_difference(sparse, dense) <= 1e-10


def test_dense_size_guard():
    with pytest.raises(OracleTooLarge):
        to_dense(make_basis_state(LatticeConfig(10), "0" * 10))
