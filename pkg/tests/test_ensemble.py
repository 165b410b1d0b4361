import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tiqca.compiler import HADAMARD, X, Gate1, LogicalCircuit, Measure, compile_circuit
from tiqca.errors import InvalidConfig, InvalidScaling
from tiqca.ensemble import (
    EnsembleParams,
    count_partitions,
    diagonal_collapse_max,
    expected_partitions,
    expected_working,
    formula_trials,
    leakage_fraction,
    partition_lengths,
    pure_mixed_equivalence,
    run_ensemble,
    sample_wall_config,
    scaling_csv,
    scaling_table,
    tail_probability,
    trial_rng,
    wilson_interval,
)
from tiqca.lattice import FIVE_LEVEL
from tiqca.macros import macro_program

from conftest import seeds


def test_formulas():
    assert expected_partitions(10**6, 0.01) == pytest.approx(1e4)
    assert expected_partitions(100, 0) == 0
    assert expected_working(10**6, 0.01, 10) == pytest.approx(1e4 * 0.99**24, rel=1e-15)
    assert expected_working(10**6, 0.01, 10) == pytest.approx(7856.78, abs=0.01)
    assert tail_probability(0.1, 3) == pytest.approx(0.729)
    assert expected_working(10**6, 1e-9, 3) / expected_partitions(10**6, 1e-9) == pytest.approx(1, abs=1e-7)


def test_scaling_table():
    rows = {r.n: r for r in scaling_table(range(2, 1001))}
    assert rows[2].ratio == 0.75**8 and round(rows[2].ratio, 4) == 0.1001
    assert round(rows[10].ratio, 4) == 0.7857
    ratios = [rows[n].ratio for n in sorted(rows)]
    assert all(b > a for a, b in zip(ratios, ratios[1:])) and ratios[-1] < 1
    assert scaling_csv(scaling_table([2])).splitlines()[0] == "n,epsilon,ratio,working_density"
    with pytest.raises(InvalidScaling):
        scaling_table([1])


def test_sampling_extremes():
    rng = trial_rng(0, 0)
    assert sample_wall_config(10, 0.0, rng) == "0" * 10
    assert sample_wall_config(10, 1.0, rng) == "5" * 10
    assert sample_wall_config(10, 1.0, rng, FIVE_LEVEL) == "1" * 10


def test_sampling_frequency():
    hits = sum(sample_wall_config(20, 0.5, trial_rng(3, t)).count("5") for t in range(10**4))
    n = 20 * 10**4
    assert abs(hits / n - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_partition_lengths_cyclic():
    mask = np.array([0, 0, 1, 0, 0, 0, 1, 0], dtype=bool)
    assert sorted(partition_lengths(mask).tolist()) == [3, 3]
    assert count_partitions(np.zeros(10, dtype=bool), 2) == count_partitions(np.zeros(5, dtype=bool), 9)
    assert count_partitions(np.zeros(10, dtype=bool), 2).partitions == 1


def test_trial_streams_independent_of_order():
    a = [trial_rng(5, t).random() for t in range(5)]
    b = [trial_rng(5, t).random() for t in reversed(range(5))][::-1]
    assert a == b


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.01, 0.02])
@pytest.mark.parametrize("n", [2, 4])
def test_monte_carlo_matches_formulas(eps, n):
    r = formula_trials(10**5, eps, n, 50, master_seed=21)
    assert abs(r["partitions_mean"] - r["predicted_partitions"]) <= 3 * r["partitions_stderr"]
    assert abs(r["working_mean"] - r["predicted_working"]) <= 3 * r["working_stderr"]


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_params_validation():
    with pytest.raises(InvalidConfig):
        EnsembleParams(100, 0.0, 2, 10)
    with pytest.raises(InvalidConfig):
        EnsembleParams(100, 0.1, 2, 0)
    with pytest.raises(InvalidConfig):
        EnsembleParams(9, 0.1, 2, 1)


def test_run_ensemble_working_count():
    params = EnsembleParams(2000, 0.05, 2, trials=200, master_seed=1)
    rep = run_ensemble(params, LogicalCircuit(2))
    assert abs(rep.working_mean - rep.predicted_working) <= 3 * rep.working_stderr
    assert rep.working_computers_mean == 2 * rep.working_mean
    assert rep.fastpath_max_deviation < 1e-9


def test_run_ensemble_x_measure_signal():
    circuit = LogicalCircuit(1, [Gate1(1, X), Measure(1)])
    rep = run_ensemble(EnsembleParams(400, 0.05, 1, trials=5, master_seed=2), circuit)
    # each working partition holds two computers, each contributing one atom in level 4
    assert rep.m4_working_mean == pytest.approx(2 * rep.working_mean)
    assert rep.fastpath_checked > 0 and rep.fastpath_max_deviation < 1e-9


def test_run_ensemble_no_walls():
    rep = run_ensemble(EnsembleParams(50, 1e-12, 2, trials=3), LogicalCircuit(2))
    assert rep.partitions_mean == 1 and rep.working_mean == 0 and rep.skipped_count == 0


def test_run_ensemble_deterministic():
    circuit = LogicalCircuit(1, [Gate1(1, HADAMARD), Measure(1)])
    params = EnsembleParams(500, 0.08, 1, trials=4, master_seed=9)
    assert run_ensemble(params, circuit).to_json() == run_ensemble(params, circuit).to_json()


def test_run_ensemble_rejects_five_level():
    with pytest.raises(InvalidConfig):
        run_ensemble(EnsembleParams(50, 0.1, 1, 2), LogicalCircuit(1), FIVE_LEVEL)


def _programs():
    create6 = macro_program("POINTER_CREATE")
    prog6 = create6 + macro_program("MEASURE_PREP")
    circuit = LogicalCircuit(1, [Gate1(1, HADAMARD), Measure(1)])
    prog5 = macro_program("POINTER_CREATE", FIVE_LEVEL) + compile_circuit(circuit, FIVE_LEVEL).program
    return prog6, prog5


def test_pure_mixed_trivial_epsilon():
    prog6, _ = _programs()
    assert pure_mixed_equivalence(8, 0.0, prog6) == 0


@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_pure_mixed_small(eps):
    prog6, prog5 = _programs()
    assert pure_mixed_equivalence(8, eps, prog6) <= 1e-10
    assert pure_mixed_equivalence(8, eps, prog5) <= 1e-10


@pytest.mark.parametrize("m", [4, 6, 8])
def test_diagonal_collapse(m):
    prog6, _ = _programs()
    step = macro_program("STEP_RIGHT")
    assert diagonal_collapse_max(m, prog6) == 0
    assert diagonal_collapse_max(m, prog6 + step) == 0


def test_five_level_leakage_shrinks_with_epsilon():
    _, prog5 = _programs()
    prog = prog5 + macro_program("STEP_RIGHT", FIVE_LEVEL).repeat(3)
    # dense walls leave no room to create pointers, so only the sparse-wall regime is monotone
    rates = [leakage_fraction(12, eps, prog, trials=300, master_seed=4)["escape_fraction"]
             for eps in (0.2, 0.1, 0.05, 0.02)]
    assert all(a > b for a, b in zip(rates, rates[1:]))


@given(seeds, st.floats(0.01, 0.5))
def test_partitions_sum_with_walls_to_m(seed, eps):
    mask = trial_rng(seed, 0).random(200) < eps
    lengths = partition_lengths(mask)
    if mask.any():
        assert lengths.sum() + mask.sum() == 200 and lengths.size == mask.sum()
    else:
        assert lengths.size == 0
