import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tiqca.lattice import SIX_LEVEL, LatticeConfig
from tiqca.verify import random_pulse, random_sparse_state

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
boundaries = st.sampled_from(["periodic", "open"])


@st.composite
def lattice_configs(draw, min_m=2, max_m=6, mode=SIX_LEVEL):
    return LatticeConfig(draw(st.integers(min_m, max_m)), draw(boundaries), mode)


@st.composite
def states_and_pulses(draw, min_m=2, max_m=6):
    cfg = draw(lattice_configs(min_m, max_m))
    rng = np.random.default_rng(draw(seeds))
    return random_sparse_state(rng, cfg, int(rng.integers(1, 5))), random_pulse(rng, cfg.d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
